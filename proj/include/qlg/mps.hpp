#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlg/model.hpp"
#include "qlg/svd.hpp"
#include "qlg/tensor.hpp"

namespace qlg {

// Open-boundary matrix product state. Site tensors have shape
// (left bond, physical = 2, right bond), row-major. The canonical center sits
// at `center`; tensors to its right are right-isometric, tensors to its left
// left-isometric. After canonicalize() the state is fully right-canonical
// (center 0) and lambdas[i] holds the Schmidt spectrum across bond i (the cut
// between sites i-1 and i), normalized to unit 2-norm.
struct MpsState {
    std::vector<DenseTensor> tensors;
    std::vector<VectorXd> lambdas;  // n+1 entries; [0] and [n] are {1}
    int center = 0;
    double cumulative_truncation = 0.0;

    int n() const { return static_cast<int>(tensors.size()); }
    std::int64_t bond_dim(int bond) const;  // bond in [0, n]
    std::int64_t max_bond_dim() const;
};

// |s_0 s_1 ...> with each local state a 2-vector (not necessarily basis).
MpsState product_mps(const std::vector<Eigen::Vector2cd>& local_states);
MpsState all_up_mps(int n);
MpsState neel_mps(int n);

// Normalized random MPS with bond dimension <= chi, deterministic in seed.
MpsState random_mps(int n, std::int64_t chi, std::uint64_t seed);

// Full re-gauge: left-orthogonalizing sweep then a right-to-left SVD sweep
// that captures the Schmidt spectra. Truncates at (chi_max, cutoff) during
// the second sweep, accumulates discarded weight, normalizes the state, and
// returns the norm it had on entry.
double canonicalize(MpsState& psi, std::int64_t chi_max = 1 << 30, double cutoff = 0.0);

// <a|b>; the bra side is conjugated.
cdouble overlap(const MpsState& a, const MpsState& b);

// sigma_k^mu applied to one site tensor; unitary on the physical leg, so
// norm, isometries and Schmidt spectra are untouched.
MpsState apply_site_op(const MpsState& psi, int k, Axis mu);

// <psi| mpo |psi> by transfer contraction.
cdouble mpo_expectation(const Mpo& mpo, const MpsState& psi);

// Exact MPO application; bond dimensions multiply (test/oracle use).
MpsState mpo_apply(const Mpo& mpo, const MpsState& psi);

// State vector in the dense basis convention of to_dense (n <= 14).
VectorXcd mps_to_dense(const MpsState& psi);

// Self-describing binary checkpoint (magic, format version, shape headers,
// tensors, Schmidt spectra) plus an FNV-1a content hash stored in the footer
// and verified on load.
void mps_save(const std::string& path, const MpsState& psi);
MpsState mps_load(const std::string& path);
std::uint64_t mps_content_hash(const MpsState& psi);

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ull);

}  // namespace qlg
