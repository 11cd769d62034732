#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qlg/model.hpp"
#include "qlg/mps.hpp"

namespace qlg {

struct EvolutionConfig {
    double dt = 0.01;      // Trotter step, units 1/J
    double t_max = 3.0;
    int trotter_order = 2; // only 2 is supported
    std::int64_t chi_max = 400;
    double svd_cutoff = 1e-10;
    int sample_stride = 1;
    // per-step discarded weight that triggers a warning when the chi cap is hit
    double warn_discard = 1e-6;
    int recanonicalize_every = 50;  // re-gauge period in steps (0 = never)
    bool parallel_bonds = true;
};

struct TrajectorySample {
    int step = 0;
    double t = 0.0;
    cdouble overlap_with_ref;  // set when a reference state was given
    double norm_factor = 1.0;  // accumulated renormalization applied so far
    double cumulative_truncation = 0.0;
};

using TebdObserver = std::function<void(int step, double t, const MpsState&)>;

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<std::string> warnings;  // chi-cap events above the warn threshold
    std::int64_t max_chi = 0;
    double max_step_discard = 0.0;
    double norm_factor = 1.0;
    MpsState final_state;
};

// Precomputed second-order Trotter machinery for one Hamiltonian: bond gates
// exp(-i h_bond tau) for the half/full steps, with on-site fields split onto
// their adjacent bonds. One step applies even(dt/2) odd(dt) even(dt/2).
class TebdStepper {
public:
    TebdStepper(const SpinHamiltonian& h, const EvolutionConfig& cfg);

    // advance by one Trotter step; bonds of equal parity update in parallel
    // (disjoint tensors). The serial path is the reference implementation and
    // produces bit-identical states.
    void step(MpsState& psi);

    int steps_total() const { return steps_; }
    double dt() const { return cfg_.dt; }
    const EvolutionConfig& config() const { return cfg_; }
    double max_step_discard() const { return max_step_discard_; }
    std::int64_t max_chi() const { return max_chi_; }
    double norm_factor() const { return norm_factor_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    int steps_done() const { return steps_done_; }

private:
    void apply_parity_pass(MpsState& psi, int parity, const std::vector<MatrixXcd>& gates);

    EvolutionConfig cfg_;
    int n_ = 0;
    int steps_ = 0;
    int steps_done_ = 0;
    std::vector<MatrixXcd> gates_half_, gates_full_;
    double max_step_discard_ = 0.0;
    std::int64_t max_chi_ = 0;
    double norm_factor_ = 1.0;
    std::vector<std::string> warnings_;
};

// Evolve psi under h, sampling the overlap with overlap_ref (when given) and
// calling observer every sample_stride steps, t = 0 included. The final state
// is re-gauged before return.
Trajectory tebd_evolve(const MpsState& psi, const SpinHamiltonian& h, const EvolutionConfig& cfg,
                       const MpsState* overlap_ref = nullptr, const TebdObserver& observer = {});

}  // namespace qlg
