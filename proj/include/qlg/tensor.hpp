#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qlg/errors.hpp"

namespace qlg {

using cdouble = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

// Dense complex tensor with a fixed row-major layout: the last index runs
// fastest. All reshapes/permutes go through this layout, which makes every
// contraction order deterministic.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(std::vector<std::int64_t> shape);
    DenseTensor(std::vector<std::int64_t> shape, std::vector<cdouble> data);

    // Matrix (rank-2) adapter, row-major copy of an Eigen matrix.
    static DenseTensor from_matrix(const MatrixXcd& m);

    std::int64_t rank() const { return static_cast<std::int64_t>(shape_.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    std::int64_t dim(std::int64_t axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
    const std::vector<std::int64_t>& shape() const { return shape_; }

    const cdouble* data() const { return data_.data(); }
    cdouble* data() { return data_.data(); }
    const std::vector<cdouble>& values() const { return data_; }

    cdouble& at(std::initializer_list<std::int64_t> idx);
    cdouble at(std::initializer_list<std::int64_t> idx) const;

    // Reinterprets the flat buffer under a new shape; total size must match.
    DenseTensor reshape(std::vector<std::int64_t> new_shape) const;

    // perm[i] names the old axis that becomes axis i of the result.
    DenseTensor permute(std::span<const int> perm) const;

    DenseTensor conj() const;
    double frobenius_norm() const;

    // Fuse axes [0, split) into rows and [split, rank) into columns.
    MatrixXcd matricize(std::int64_t split) const;

    DenseTensor operator+(const DenseTensor& other) const;
    DenseTensor& operator*=(cdouble s);

private:
    std::vector<std::int64_t> shape_;
    std::vector<cdouble> data_;
};

// Pairwise tensor contraction. pairs[k] = (axis of a, axis of b); paired
// dimensions must match. The result carries the unpaired axes of a (in their
// original order) followed by the unpaired axes of b. Bilinear, with no
// implicit conjugation: an inner product ⟨v|v⟩ is contract(v.conj(), v).
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<int, int>> pairs);

inline DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                            std::initializer_list<std::pair<int, int>> pairs) {
    return contract(a, b, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

}  // namespace qlg
