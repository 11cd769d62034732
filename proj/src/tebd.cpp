#include "qlg/tebd.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qlg/svd.hpp"

namespace qlg {

namespace {

MatrixXcd bond_hamiltonian(const SpinHamiltonian& h, int i) {
    const int n = h.n_sites;
    MatrixXcd hb = MatrixXcd::Zero(4, 4);
    auto two_site = [](const MatrixXcd& a, const MatrixXcd& b) {
        MatrixXcd m(4, 4);
        for (int r1 = 0; r1 < 2; ++r1)
            for (int c1 = 0; c1 < 2; ++c1)
                for (int r2 = 0; r2 < 2; ++r2)
                    for (int c2 = 0; c2 < 2; ++c2) m(r1 * 2 + r2, c1 * 2 + c2) = a(r1, c1) * b(r2, c2);
        return m;
    };
    const MatrixXcd id = MatrixXcd::Identity(2, 2);
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const double j = h.coupling(a, i, i + 1);
        if (j != 0.0) hb += j * two_site(pauli(a), pauli(a));
        // fields split half/half onto adjacent bonds, full weight at the edges
        const double bl = h.field(a, i);
        if (bl != 0.0) hb += (i == 0 ? 1.0 : 0.5) * bl * two_site(pauli(a), id);
        const double br = h.field(a, i + 1);
        if (br != 0.0) hb += (i + 1 == n - 1 ? 1.0 : 0.5) * br * two_site(id, pauli(a));
    }
    return hb;
}

MatrixXcd bond_gate(const MatrixXcd& hb, double tau) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hb);
    MatrixXcd phases = MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) phases(i, i) = std::polar(1.0, -es.eigenvalues()[i] * tau);
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

struct BondUpdateStats {
    double discarded = 0.0;
    bool cap_hit = false;
    std::int64_t kept = 1;
    double kept_norm = 1.0;
};

using RowMajorMap = Eigen::Map<Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Hastings-style gate application on bond (i, i+1) of a right-canonical
// state: theta = Lambda_i B_i B_{i+1} is the two-site wavefunction in the
// bond's orthonormal frame; the replacement B_i' = (G B_i B_{i+1}) V^dagger
// avoids dividing by small Schmidt values.
BondUpdateStats apply_bond_gate(MpsState& psi, int i, const MatrixXcd& gate, std::int64_t chi_max,
                                double cutoff) {
    const DenseTensor& t1 = psi.tensors[static_cast<std::size_t>(i)];
    const DenseTensor& t2 = psi.tensors[static_cast<std::size_t>(i + 1)];
    const std::int64_t al = t1.dim(0), m = t1.dim(2), ar = t2.dim(2);
    const VectorXd& lam = psi.lambdas[static_cast<std::size_t>(i)];
    if (lam.size() != al) throw shape_error("tebd: stale bond spectrum");

    // phi(al*2, 2*ar) = (B_i B_{i+1}) as a matrix over (al s1 | s2 ar)
    ConstRowMajorMap m1(t1.data(), al * 2, m);
    ConstRowMajorMap m2(t2.data(), m, 2 * ar);
    MatrixXcd phi = m1 * m2;  // row-major blocks: rows (al,s1), cols (s2,ar)

    // gate contraction: rows of phi regrouped as (al | s1), cols (s2 | ar);
    // G[(s1' s2'), (s1 s2)] acts on the middle pair
    MatrixXcd phi_g = MatrixXcd::Zero(al * 2, 2 * ar);
    for (std::int64_t s1p = 0; s1p < 2; ++s1p)
        for (std::int64_t s2p = 0; s2p < 2; ++s2p)
            for (std::int64_t s1 = 0; s1 < 2; ++s1)
                for (std::int64_t s2 = 0; s2 < 2; ++s2) {
                    const cdouble g = gate(s1p * 2 + s2p, s1 * 2 + s2);
                    if (g == cdouble{0.0, 0.0}) continue;
                    for (std::int64_t a = 0; a < al; ++a)
                        phi_g.row(a * 2 + s1p).segment(s2p * ar, ar) +=
                            g * phi.row(a * 2 + s1).segment(s2 * ar, ar);
                }

    // theta = Lambda phi_g (weight the left bond), then truncate
    MatrixXcd theta = phi_g;
    for (std::int64_t a = 0; a < al; ++a) {
        theta.row(a * 2 + 0) *= lam[a];
        theta.row(a * 2 + 1) *= lam[a];
    }
    auto svd = svd_truncate(theta, chi_max, cutoff);
    const std::int64_t k = svd.report.kept;
    const double snorm = svd.s.norm();

    BondUpdateStats stats;
    stats.discarded = svd.report.discarded_weight;
    stats.cap_hit = svd.report.chi_cap_hit;
    stats.kept = k;
    stats.kept_norm = snorm;

    // B_{i+1}' = V (right-isometric)
    {
        std::vector<cdouble> vd(static_cast<std::size_t>(k * 2 * ar));
        for (std::int64_t r = 0; r < k; ++r)
            for (std::int64_t c = 0; c < 2 * ar; ++c)
                vd[static_cast<std::size_t>(r * 2 * ar + c)] = svd.v(r, c);
        psi.tensors[static_cast<std::size_t>(i + 1)] = DenseTensor({k, 2, ar}, std::move(vd));
    }
    // B_i' = phi_g V^dagger / ||S_kept||
    {
        MatrixXcd bi = (phi_g * svd.v.adjoint()) / (snorm > 0 ? snorm : 1.0);
        std::vector<cdouble> bd(static_cast<std::size_t>(al * 2 * k));
        for (std::int64_t r = 0; r < al * 2; ++r)
            for (std::int64_t c = 0; c < k; ++c) bd[static_cast<std::size_t>(r * k + c)] = bi(r, c);
        psi.tensors[static_cast<std::size_t>(i)] = DenseTensor({al, 2, k}, std::move(bd));
    }
    psi.lambdas[static_cast<std::size_t>(i + 1)] =
        snorm > 0 ? VectorXd(svd.s / snorm) : VectorXd(svd.s);
    return stats;
}

}  // namespace

TebdStepper::TebdStepper(const SpinHamiltonian& h, const EvolutionConfig& cfg) : cfg_(cfg), n_(h.n_sites) {
    if (!h.nearest_neighbor_only())
        throw unsupported_error("tebd: only nearest-neighbor Hamiltonians are supported");
    if (n_ < 2) throw validation_error("tebd: need at least 2 sites");
    if (!(cfg.dt > 0)) throw validation_error("tebd: dt must be positive");
    if (cfg.t_max < 0) throw validation_error("tebd: t_max must be nonnegative");
    if (cfg.chi_max < 1) throw validation_error("tebd: chi_max must be >= 1");
    if (cfg.trotter_order != 2)
        throw validation_error("tebd: only second-order trotterization is supported");
    if (cfg.sample_stride < 1) throw validation_error("tebd: sample_stride must be >= 1");

    const double steps_f = cfg.t_max / cfg.dt;
    steps_ = static_cast<int>(std::llround(steps_f));
    if (std::abs(steps_f - steps_) > 1e-6)
        throw validation_error("tebd: t_max must be an integer multiple of dt");

    for (int i = 0; i + 1 < n_; ++i) {
        const MatrixXcd hb = bond_hamiltonian(h, i);
        gates_half_.push_back(bond_gate(hb, cfg.dt / 2));
        gates_full_.push_back(bond_gate(hb, cfg.dt));
    }
}

void TebdStepper::apply_parity_pass(MpsState& psi, int parity, const std::vector<MatrixXcd>& gates) {
    std::vector<int> bonds;
    for (int i = parity; i + 1 < n_; i += 2) bonds.push_back(i);
    std::vector<BondUpdateStats> stats(bonds.size());

    if (cfg_.parallel_bonds) {
#pragma omp parallel for schedule(static)
        for (std::size_t b = 0; b < bonds.size(); ++b)
            stats[b] = apply_bond_gate(psi, bonds[b], gates[static_cast<std::size_t>(bonds[b])],
                                       cfg_.chi_max, cfg_.svd_cutoff);
    } else {
        for (std::size_t b = 0; b < bonds.size(); ++b)
            stats[b] = apply_bond_gate(psi, bonds[b], gates[static_cast<std::size_t>(bonds[b])],
                                       cfg_.chi_max, cfg_.svd_cutoff);
    }

    // merge bookkeeping in bond order (deterministic regardless of threads)
    double discard = 0.0;
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        const auto& s = stats[b];
        psi.cumulative_truncation += s.discarded;
        discard += s.discarded;
        max_chi_ = std::max(max_chi_, s.kept);
        norm_factor_ *= s.kept_norm;
        if (s.cap_hit && s.discarded > cfg_.warn_discard && warnings_.size() < 64) {
            std::ostringstream os;
            os << "step " << steps_done_ + 1 << " bond " << bonds[b] << ": chi cap "
               << cfg_.chi_max << " hit, discarded weight " << s.discarded;
            warnings_.push_back(os.str());
        }
    }
    max_step_discard_ = std::max(max_step_discard_, discard);
}

void TebdStepper::step(MpsState& psi) {
    if (psi.n() != n_) throw validation_error("tebd: state length mismatch");
    apply_parity_pass(psi, 0, gates_half_);
    apply_parity_pass(psi, 1, gates_full_);
    apply_parity_pass(psi, 0, gates_half_);
    ++steps_done_;
    if (cfg_.recanonicalize_every > 0 && steps_done_ % cfg_.recanonicalize_every == 0)
        canonicalize(psi, cfg_.chi_max, 1e-15);
}

Trajectory tebd_evolve(const MpsState& psi0, const SpinHamiltonian& h, const EvolutionConfig& cfg,
                       const MpsState* overlap_ref, const TebdObserver& observer) {
    TebdStepper stepper(h, cfg);
    Trajectory traj;
    MpsState psi = psi0;

    auto sample = [&](int step) {
        TrajectorySample s;
        s.step = step;
        s.t = step * cfg.dt;
        s.norm_factor = stepper.norm_factor();
        s.cumulative_truncation = psi.cumulative_truncation;
        if (overlap_ref != nullptr) s.overlap_with_ref = overlap(*overlap_ref, psi);
        traj.samples.push_back(s);
        if (observer) observer(step, s.t, psi);
    };

    sample(0);
    for (int step = 1; step <= stepper.steps_total(); ++step) {
        stepper.step(psi);
        if (step % cfg.sample_stride == 0 || step == stepper.steps_total()) sample(step);
    }

    canonicalize(psi, cfg.chi_max, 1e-15);
    traj.final_state = std::move(psi);
    traj.warnings = stepper.warnings();
    traj.max_chi = stepper.max_chi();
    traj.max_step_discard = stepper.max_step_discard();
    traj.norm_factor = stepper.norm_factor();
    return traj;
}

}  // namespace qlg
