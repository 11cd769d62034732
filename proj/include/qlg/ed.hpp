#pragma once

#include <functional>
#include <vector>

#include "qlg/model.hpp"
#include "qlg/series.hpp"

namespace qlg {

// Full spectrum of a small chain (n_sites <= 10), the workhorse behind the
// exact correlation oracle: machine-precision phases for identity tests.
struct EdSolution {
    int n_sites = 0;
    VectorXd evals;
    MatrixXcd evecs;  // columns are eigenvectors
    double e0() const { return evals[0]; }
};

struct EdGroundState {
    double e0 = 0.0;
    VectorXcd psi0;
    double degeneracy_gap = 0.0;  // e1 - e0
    double residual = 0.0;        // ||H psi0 - e0 psi0||
};

EdSolution ed_solve(const SpinHamiltonian& h);

// Lowest eigenpair for n_sites <= 14 (dense path below 11 sites, Lanczos with
// deflation above). In a degenerate ground manifold the returned vector is
// the normalized projection of |up...up>, which removes arbitrary mixing and
// matches the polarized-state convention of the ferromagnetic phase.
EdGroundState ed_ground(const SpinHamiltonian& h);
EdGroundState ground_from_solution(const EdSolution& sol);

// Exact symmetrized two-time correlation
//   C(t) = Re[ e^{i E0 t} <psi0| sigma_k^mu e^{-iHt} sigma_k^mu |psi0> ]
// via eigendecomposition (n <= 10) or Krylov stepping (11..14).
CorrelationSeries ed_correlation(const SpinHamiltonian& h, int k, Axis mu,
                                 const std::vector<double>& times);
CorrelationSeries ed_correlation(const EdSolution& sol, const SpinHamiltonian& h, int k, Axis mu,
                                 const std::vector<double>& times);

// | C(t1,t2) - C(0, t2-t1) | with C(ti,tj) = 1/2 <{Q(ti), Q(tj)}> evaluated
// literally on the ground state; vanishes for eigenstate initial conditions.
double stationarity_check(const SpinHamiltonian& h, int k, Axis mu, double t1, double t2);

// max-abs entry of sigma_k^mu H sigma_k^mu - (H - f_k^mu); exact identity.
double conjugation_identity_check(const SpinHamiltonian& h, int k, Axis mu);

struct HfResult {
    double residual = 0.0;     // |<dH/dlambda> - central difference|
    double residual_2x = 0.0;  // same with a doubled step (Richardson check)
    bool degenerate = false;   // ground state flagged degenerate; contract waived
    double gap = 0.0;
    double expectation = 0.0;
    double finite_difference = 0.0;
};

// Hellmann-Feynman: <psi0(l)| dh |psi0(l)> vs (E0(l+d) - E0(l-d)) / 2d.
HfResult hellmann_feynman_check(const std::function<SpinHamiltonian(double)>& family,
                                const SpinHamiltonian& dh, double lambda, double dlambda = 1e-5);

// <psi0| f_k^mu |psi0>, either directly or through Hellmann-Feynman finite
// differences on the individual coupling/field coefficients touching site k.
double fk_expectation_direct(const SpinHamiltonian& h, int k, Axis mu);
double fk_expectation_hellmann_feynman(const SpinHamiltonian& h, int k, Axis mu,
                                       double dlambda = 1e-5);

// First-order expansion of the time-evolution operator:
//   cos(E0 t) + sin(E0 t) [ E0 t - t <f_k^mu> ].
double first_order_approx(const SpinHamiltonian& h, int k, Axis mu, double t,
                          bool hellmann_feynman_route = false);

// Second-order correction -(t^2/2) cos(E0 t) (E0^2 - 2 E0 <f> + <f^2>).
double second_order_correction(const SpinHamiltonian& h, int k, Axis mu, double t);

// <psi| op |psi> for a Hermitian operator given as a SpinHamiltonian.
double expectation_value(const SpinHamiltonian& op, const VectorXcd& psi);

// w = exp(-i H dt) v via adaptive Lanczos exponentiation (matrix-free).
VectorXcd krylov_evolve(const CompiledHamiltonian& h, const VectorXcd& v, double dt);

}  // namespace qlg
