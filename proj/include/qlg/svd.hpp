#pragma once

#include <cstdint>

#include "qlg/tensor.hpp"

namespace qlg {

struct TruncationReport {
    std::int64_t kept = 0;
    // Sum of squared discarded singular values over the total; in [0, 1].
    double discarded_weight = 0.0;
    // True when chi_max forced more truncation than the cutoff alone.
    bool chi_cap_hit = false;
};

struct SvdResult {
    MatrixXcd u;   // orthonormal columns, rows(m) x kept
    VectorXd s;    // nonincreasing, nonnegative, length kept
    MatrixXcd v;   // orthonormal rows, kept x cols(m); m ≈ u * s.asDiagonal() * v
    TruncationReport report;
};

// Deterministic truncated SVD. kept = min(chi_max, smallest k whose discarded
// weight is <= cutoff), at least 1. Phase convention: the largest-magnitude
// entry of each left singular vector is made real-positive (first index wins
// ties), so factorizations are reproducible across runs.
//
// Throws validation_error on non-finite input, numerical_error if the
// underlying factorization fails to converge.
SvdResult svd_truncate(const MatrixXcd& m, std::int64_t chi_max, double cutoff);

}  // namespace qlg
