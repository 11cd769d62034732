#pragma once

#include <cstdint>
#include <functional>

#include "qlg/tensor.hpp"

namespace qlg {

// out = H * in, dim entries each. The operator must be Hermitian; that is the
// caller's contract and is not checked.
using ApplyFn = std::function<void(const cdouble* in, cdouble* out)>;

struct LanczosOptions {
    double tol = 1e-12;          // residual tolerance, relative to max(1, |e0|)
    int max_iter = 400;
    std::uint64_t seed = 0x5DEECE66Dull;  // start-vector seed when none is given
    bool throw_on_maxiter = true;
    const VectorXcd* initial = nullptr;   // optional warm start
};

struct LanczosResult {
    double e0 = 0.0;
    VectorXcd v0;
    int iterations = 0;
    double residual = 0.0;  // true residual norm of the returned pair
    bool converged = false;
};

// Lowest eigenpair of a Hermitian operator given only its action on a vector.
// Full reorthogonalization against all stored Krylov vectors (local problem
// dims here are small enough that robustness beats speed). On Krylov
// breakdown restarts with a fresh seeded random vector, giving up after 3
// restarts. Throws numerical_error carrying the best residual when max_iter
// is exceeded and throw_on_maxiter is set.
LanczosResult lanczos_lowest(const ApplyFn& apply, std::int64_t dim, const LanczosOptions& opt = {});

}  // namespace qlg
