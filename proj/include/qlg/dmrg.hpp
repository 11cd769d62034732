#pragma once

#include <cstdint>
#include <vector>

#include "qlg/mps.hpp"

namespace qlg {

struct DmrgOptions {
    std::int64_t chi_max = 400;
    double energy_tol = 1e-10;
    int max_sweeps = 30;
    double svd_cutoff = 1e-10;
    // optional symmetry-breaking field: adds bias_field * sum_i sigma_i^z to
    // the swept operator only; the reported energy excludes it. Negative
    // values select the up-polarized state.
    double bias_field = 0.0;
    std::uint64_t seed = 20240901ull;
    int lanczos_max_iter = 120;
    double lanczos_tol = 1e-9;
};

struct DmrgResult {
    MpsState state;                     // fully right-canonical, normalized
    double e0 = 0.0;                    // <psi| mpo |psi> of the unbiased operator
    std::vector<double> sweep_energies; // variational energy after each sweep
    bool converged = false;
};

// Two-site DMRG ground-state search. The bond dimension ramps up over the
// first sweeps (16, 32, ... up to chi_max); convergence is declared once the
// per-sweep energy change drops below energy_tol at full bond dimension.
// Non-convergence is reported through the flag, not an exception.
DmrgResult dmrg_ground(const Mpo& mpo, const DmrgOptions& opt = {});

}  // namespace qlg
