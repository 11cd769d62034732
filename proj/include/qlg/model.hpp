#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlg/tensor.hpp"

namespace qlg {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

Axis axis_from_string(const std::string& s);
const char* axis_name(Axis a);

// 2x2 Pauli matrix for the given axis, basis {up, down}:
// sigma_z = diag(+1, -1), sigma_x |up> = |down>, sigma_y |up> = i |down>.
MatrixXcd pauli(Axis a);

struct ModelInfo {
    std::string family;  // "xxz", "xy", "general", "fk", ...
    double j = 1.0;
    std::optional<double> delta;
    std::optional<double> gamma;
    // Field in units of its critical value b_z = j; the QPT of the anisotropic
    // chain sits at nu = 1 for every gamma > 0.
    std::optional<double> nu;
    std::optional<double> lambda() const;
    std::string lambda_name() const;
};

// General spin-1/2 Hamiltonian
//   H = sum_{alpha, i<j} J_alpha^{i,j} sigma_i^alpha sigma_j^alpha
//     + sum_{alpha, i}   B_alpha^i sigma_i^alpha
// with real coefficients. Immutable after construction; freely shareable.
struct SpinHamiltonian {
    int n_sites = 0;
    // key (alpha, i, j) with i < j
    std::map<std::tuple<int, int, int>, double> couplings;
    // key (alpha, i)
    std::map<std::pair<int, int>, double> fields;
    ModelInfo info;

    double coupling(Axis a, int i, int j) const;
    double field(Axis a, int i) const;
    bool nearest_neighbor_only() const;
    double max_abs_coefficient() const;
};

SpinHamiltonian build_general(int n,
                              const std::vector<std::tuple<Axis, int, int, double>>& couplings,
                              const std::vector<std::tuple<Axis, int, double>>& fields);

// XXZ chain, open boundaries: J_x = J_y = j, J_z = j*delta on nearest
// neighbors, no fields.
SpinHamiltonian build_xxz(int n, double j, double delta);

// Anisotropic XY chain in a transverse field, open boundaries:
// J_x = j(1+gamma)/2, J_y = j(1-gamma)/2, B_z = bz on every site.
SpinHamiltonian build_xy(int n, double j, double gamma, double bz);

// f_k^mu = 2 sum_{alpha != mu} ( sum_j J_alpha^{j,k} sigma_k^alpha sigma_j^alpha
//                                + B_alpha^k sigma_k^alpha ),
// the operator with sigma_k^mu H sigma_k^mu = H - f_k^mu.
SpinHamiltonian build_fk(const SpinHamiltonian& h, int k, Axis mu);

// Dense 2^n x 2^n matrix. Basis convention: site 0 is the most significant
// bit, up (sigma_z = +1) before down, so basis state b has site i in
// "down" iff bit (n-1-i) of b is set. Guarded at n_sites <= 14.
MatrixXcd to_dense(const SpinHamiltonian& h);

// One Pauli-string term in the uniform gather form
//   out[b] += coeff * sign(popcount(b & sign_mask)) * in[b ^ flip_mask],
// which covers sigma^x (flip only), sigma^y (flip + sign + imaginary coeff)
// and sigma^z (sign only) strings of one or two sites.
struct CompiledTerm {
    std::uint64_t flip_mask = 0;
    std::uint64_t sign_mask = 0;
    cdouble coeff;
};

struct CompiledHamiltonian {
    int n_sites = 0;
    std::vector<CompiledTerm> terms;
};

CompiledHamiltonian compile_terms(const SpinHamiltonian& h);

namespace kernels {

// out = H * in over the full 2^n basis; serial reference implementation.
void apply_hamiltonian_serial(const CompiledHamiltonian& h, const cdouble* in, cdouble* out);

// OpenMP variant, parallel over basis states. Each output entry is written by
// exactly one iteration, so results are bit-identical to the serial kernel
// for any thread count.
void apply_hamiltonian_omp(const CompiledHamiltonian& h, const cdouble* in, cdouble* out);

}  // namespace kernels

// Dispatches to the OpenMP kernel; the serial one is kept for testing and
// benchmarking.
void apply_hamiltonian(const CompiledHamiltonian& h, const cdouble* in, cdouble* out);

// Matrix product operator for nearest-neighbor Hamiltonians. Site tensor
// w[i] has shape (bl, br, 2, 2) with physical indices (row = out, col = in);
// the boundary sites carry bl = 1 / br = 1.
struct Mpo {
    int n_sites = 0;
    std::vector<DenseTensor> w;
    std::int64_t max_bond() const;
};

// Throws unsupported_error when a coupling is longer-ranged than nearest
// neighbor (this release builds MPOs for chain models only).
Mpo to_mpo(const SpinHamiltonian& h);

// mpo' = mpo + coeff * sum_i sigma_i^axis, using to_mpo's slot layout.
Mpo add_onsite(const Mpo& mpo, Axis axis, double coeff);

}  // namespace qlg
