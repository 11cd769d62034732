#include "qlg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qlg {

namespace {

std::int64_t checked_product(const std::vector<std::int64_t>& shape) {
    std::int64_t p = 1;
    for (std::int64_t d : shape) {
        if (d <= 0) throw shape_error("tensor dimensions must be positive");
        p *= d;
    }
    return p;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::int64_t> shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(checked_product(shape_)), cdouble{0.0, 0.0}) {}

DenseTensor::DenseTensor(std::vector<std::int64_t> shape, std::vector<cdouble> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (checked_product(shape_) != static_cast<std::int64_t>(data_.size()))
        throw shape_error("tensor data length does not match shape product");
}

DenseTensor DenseTensor::from_matrix(const MatrixXcd& m) {
    DenseTensor t({m.rows(), m.cols()});
    for (std::int64_t r = 0; r < m.rows(); ++r)
        for (std::int64_t c = 0; c < m.cols(); ++c) t.data_[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
    return t;
}

cdouble& DenseTensor::at(std::initializer_list<std::int64_t> idx) {
    const DenseTensor& self = *this;
    return const_cast<cdouble&>(static_cast<const DenseTensor&>(self).at(idx));
}

cdouble DenseTensor::at(std::initializer_list<std::int64_t> idx) const {
    if (static_cast<std::int64_t>(idx.size()) != rank()) throw shape_error("index rank mismatch");
    std::int64_t flat = 0;
    std::int64_t axis = 0;
    for (std::int64_t i : idx) {
        if (i < 0 || i >= shape_[static_cast<std::size_t>(axis)]) throw shape_error("tensor index out of range");
        flat = flat * shape_[static_cast<std::size_t>(axis)] + i;
        ++axis;
    }
    return data_[static_cast<std::size_t>(flat)];
}

DenseTensor DenseTensor::reshape(std::vector<std::int64_t> new_shape) const {
    if (checked_product(new_shape) != size()) {
        std::ostringstream os;
        os << "reshape size mismatch: have " << size() << " elements";
        throw shape_error(os.str());
    }
    DenseTensor out;
    out.shape_ = std::move(new_shape);
    out.data_ = data_;
    return out;
}

DenseTensor DenseTensor::permute(std::span<const int> perm) const {
    if (static_cast<std::int64_t>(perm.size()) != rank()) throw shape_error("permutation rank mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p >= rank() || seen[static_cast<std::size_t>(p)]) throw shape_error("invalid permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }
    std::vector<std::int64_t> new_shape(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) new_shape[i] = shape_[static_cast<std::size_t>(perm[i])];

    // old strides (row-major)
    std::vector<std::int64_t> old_stride(shape_.size(), 1);
    for (std::int64_t i = rank() - 2; i >= 0; --i)
        old_stride[static_cast<std::size_t>(i)] = old_stride[static_cast<std::size_t>(i + 1)] * shape_[static_cast<std::size_t>(i + 1)];

    DenseTensor out(new_shape);
    const std::int64_t n = size();
    std::vector<std::int64_t> idx(perm.size(), 0);
    for (std::int64_t flat = 0; flat < n; ++flat) {
        std::int64_t src = 0;
        for (std::size_t ax = 0; ax < perm.size(); ++ax)
            src += idx[ax] * old_stride[static_cast<std::size_t>(perm[ax])];
        out.data_[static_cast<std::size_t>(flat)] = data_[static_cast<std::size_t>(src)];
        // increment multi-index of the new layout
        for (std::int64_t ax = static_cast<std::int64_t>(perm.size()) - 1; ax >= 0; --ax) {
            if (++idx[static_cast<std::size_t>(ax)] < new_shape[static_cast<std::size_t>(ax)]) break;
            idx[static_cast<std::size_t>(ax)] = 0;
        }
    }
    return out;
}

DenseTensor DenseTensor::conj() const {
    DenseTensor out = *this;
    for (auto& v : out.data_) v = std::conj(v);
    return out;
}

double DenseTensor::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

MatrixXcd DenseTensor::matricize(std::int64_t split) const {
    if (split < 0 || split > rank()) throw shape_error("matricize split out of range");
    std::int64_t rows = 1, cols = 1;
    for (std::int64_t i = 0; i < split; ++i) rows *= shape_[static_cast<std::size_t>(i)];
    for (std::int64_t i = split; i < rank(); ++i) cols *= shape_[static_cast<std::size_t>(i)];
    using RowMajorMap =
        Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    return RowMajorMap(data_.data(), rows, cols);
}

DenseTensor DenseTensor::operator+(const DenseTensor& other) const {
    if (shape_ != other.shape_) throw shape_error("tensor addition shape mismatch");
    DenseTensor out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

DenseTensor& DenseTensor::operator*=(cdouble s) {
    for (auto& v : data_) v *= s;
    return *this;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<int, int>> pairs) {
    for (const auto& [ia, ib] : pairs) {
        if (ia < 0 || ia >= a.rank() || ib < 0 || ib >= b.rank())
            throw shape_error("contraction axis out of range");
        if (a.dim(ia) != b.dim(ib)) {
            std::ostringstream os;
            os << "contraction dimension mismatch at pair (" << ia << "," << ib << "): "
               << a.dim(ia) << " vs " << b.dim(ib);
            throw shape_error(os.str());
        }
    }

    std::vector<int> a_free, b_free, a_con, b_con;
    std::vector<bool> a_used(static_cast<std::size_t>(a.rank()), false),
        b_used(static_cast<std::size_t>(b.rank()), false);
    for (const auto& [ia, ib] : pairs) {
        if (a_used[static_cast<std::size_t>(ia)] || b_used[static_cast<std::size_t>(ib)])
            throw shape_error("axis contracted twice");
        a_used[static_cast<std::size_t>(ia)] = true;
        b_used[static_cast<std::size_t>(ib)] = true;
        a_con.push_back(ia);
        b_con.push_back(ib);
    }
    for (int i = 0; i < a.rank(); ++i)
        if (!a_used[static_cast<std::size_t>(i)]) a_free.push_back(i);
    for (int i = 0; i < b.rank(); ++i)
        if (!b_used[static_cast<std::size_t>(i)]) b_free.push_back(i);

    // a -> (free..., contracted...), b -> (contracted..., free...)
    std::vector<int> pa = a_free;
    pa.insert(pa.end(), a_con.begin(), a_con.end());
    std::vector<int> pb = b_con;
    pb.insert(pb.end(), b_free.begin(), b_free.end());

    DenseTensor ap = a.permute(pa);
    DenseTensor bp = b.permute(pb);
    MatrixXcd am = ap.matricize(static_cast<std::int64_t>(a_free.size()));
    MatrixXcd bm = bp.matricize(static_cast<std::int64_t>(b_con.size()));
    MatrixXcd rm = am * bm;

    std::vector<std::int64_t> out_shape;
    out_shape.reserve(a_free.size() + b_free.size());
    for (int i : a_free) out_shape.push_back(a.dim(i));
    for (int i : b_free) out_shape.push_back(b.dim(i));
    if (out_shape.empty()) {
        return DenseTensor({1}, {rm(0, 0)}).reshape({1});
    }
    std::vector<cdouble> data(static_cast<std::size_t>(rm.rows() * rm.cols()));
    for (std::int64_t r = 0; r < rm.rows(); ++r)
        for (std::int64_t c = 0; c < rm.cols(); ++c)
            data[static_cast<std::size_t>(r * rm.cols() + c)] = rm(r, c);
    return DenseTensor(std::move(out_shape), std::move(data));
}

}  // namespace qlg
