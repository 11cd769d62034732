#include "qlg/ed.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qlg/lanczos.hpp"

namespace qlg {

namespace {

constexpr int kDensePathMax = 10;
constexpr int kEdMax = 14;

void check_ed_size(int n) {
    if (n > kEdMax) throw resource_error("ed-oracle: exact treatment limited to n_sites <= 14");
}

double degeneracy_tol(double e0) { return 1e-10 * std::max(1.0, std::abs(e0)); }

VectorXcd sigma_apply(const SpinHamiltonian& h, int k, Axis mu, const VectorXcd& v) {
    SpinHamiltonian op;
    op.n_sites = h.n_sites;
    op.fields[{static_cast<int>(mu), k}] = 1.0;
    const CompiledHamiltonian cop = compile_terms(op);
    VectorXcd out(v.size());
    apply_hamiltonian(cop, v.data(), out.data());
    return out;
}

}  // namespace

EdSolution ed_solve(const SpinHamiltonian& h) {
    if (h.n_sites > kDensePathMax)
        throw resource_error("ed_solve: full eigendecomposition limited to n_sites <= 10");
    EdSolution sol;
    sol.n_sites = h.n_sites;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(to_dense(h));
    if (es.info() != Eigen::Success)
        throw numerical_error("ed_solve: eigendecomposition failed", 0, 0.0);
    sol.evals = es.eigenvalues();
    sol.evecs = es.eigenvectors();
    return sol;
}

EdGroundState ground_from_solution(const EdSolution& sol) {
    EdGroundState gs;
    gs.e0 = sol.evals[0];
    const std::int64_t dim = sol.evecs.rows();
    // a degenerate manifold gets the deterministic |up...up> projection
    const double tol = degeneracy_tol(gs.e0);
    std::int64_t deg = 1;
    while (deg < sol.evals.size() && sol.evals[deg] - gs.e0 < tol) ++deg;
    if (deg > 1) {
        VectorXcd proj = VectorXcd::Zero(dim);
        for (std::int64_t d = 0; d < deg; ++d)
            proj += sol.evecs.col(d) * std::conj(sol.evecs(0, d));  // basis state 0 = |up...up>
        if (proj.norm() > 1e-6) {
            gs.psi0 = proj / proj.norm();
        } else {
            gs.psi0 = sol.evecs.col(0);
        }
    } else {
        gs.psi0 = sol.evecs.col(0);
    }
    gs.degeneracy_gap = sol.evals.size() > 1 ? sol.evals[1] - gs.e0 : 0.0;
    return gs;
}

EdGroundState ed_ground(const SpinHamiltonian& h) {
    check_ed_size(h.n_sites);
    if (h.n_sites <= kDensePathMax) {
        const EdSolution sol = ed_solve(h);
        EdGroundState gs = ground_from_solution(sol);
        const CompiledHamiltonian ch = compile_terms(h);
        VectorXcd hv(gs.psi0.size());
        apply_hamiltonian(ch, gs.psi0.data(), hv.data());
        gs.residual = (hv - gs.e0 * gs.psi0).norm();
        return gs;
    }

    const std::int64_t dim = std::int64_t{1} << h.n_sites;
    const CompiledHamiltonian ch = compile_terms(h);
    LanczosOptions opt;
    opt.tol = 1e-11;
    opt.max_iter = 600;
    auto apply = [&ch](const cdouble* in, cdouble* out) { apply_hamiltonian(ch, in, out); };
    LanczosResult r0 = lanczos_lowest(apply, dim, opt);

    // second eigenvalue through deflation: project the found vector out of
    // every operator application
    const VectorXcd v0 = r0.v0;
    auto apply_deflated = [&](const cdouble* in, cdouble* out) {
        Eigen::Map<const VectorXcd> vin(in, dim);
        VectorXcd tmp = vin - v0 * v0.dot(vin);
        VectorXcd hv(dim);
        apply_hamiltonian(ch, tmp.data(), hv.data());
        hv -= v0 * v0.dot(hv);
        Eigen::Map<VectorXcd>(out, dim) = hv;
    };
    LanczosOptions opt1 = opt;
    opt1.tol = 1e-9;
    opt1.seed += 17;
    LanczosResult r1 = lanczos_lowest(apply_deflated, dim, opt1);

    EdGroundState gs;
    gs.e0 = r0.e0;
    gs.psi0 = r0.v0;
    gs.degeneracy_gap = r1.e0 - r0.e0;
    gs.residual = r0.residual;

    if (gs.degeneracy_gap < degeneracy_tol(gs.e0)) {
        // rotate inside span{v0, v1} toward |up...up>
        VectorXcd v1 = r1.v0;
        v1 -= v0 * v0.dot(v1);
        if (v1.norm() > 1e-8) {
            v1.normalize();
            const cdouble a = std::conj(v0[0]), b = std::conj(v1[0]);
            const double nrm = std::sqrt(std::norm(a) + std::norm(b));
            if (nrm > 1e-6) {
                gs.psi0 = (a * v0 + b * v1) / nrm;
                VectorXcd hv(dim);
                apply_hamiltonian(ch, gs.psi0.data(), hv.data());
                gs.e0 = std::real(gs.psi0.dot(hv));
                gs.residual = (hv - gs.e0 * gs.psi0).norm();
            }
        }
    }
    return gs;
}

namespace {

SeriesMeta make_meta(const SpinHamiltonian& h, int k, Axis mu) {
    SeriesMeta m;
    m.model = h.info.family.empty() ? "general" : h.info.family;
    m.lambda_name = h.info.lambda_name();
    m.lambda = h.info.lambda().value_or(0.0);
    m.n_sites = h.n_sites;
    m.site = k;
    m.alpha = axis_name(mu);
    m.engine = "ed";
    return m;
}

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw validation_error("ed_correlation: empty time grid");
    if (times.front() < 0) throw validation_error("ed_correlation: times must be nonnegative");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw validation_error("ed_correlation: times must be strictly increasing");
}

}  // namespace

CorrelationSeries ed_correlation(const EdSolution& sol, const SpinHamiltonian& h, int k, Axis mu,
                                 const std::vector<double>& times) {
    if (k < 0 || k >= h.n_sites) throw validation_error("ed_correlation: probe site out of range");
    check_times(times);
    const EdGroundState gs = ground_from_solution(sol);
    const VectorXcd phi = sigma_apply(h, k, mu, gs.psi0);
    const VectorXcd w = sol.evecs.adjoint() * phi;  // components in the eigenbasis
    VectorXd w2(w.size());
    for (std::int64_t m = 0; m < w.size(); ++m) w2[m] = std::norm(w[m]);

    CorrelationSeries out;
    out.meta = make_meta(h, k, mu);
    out.times = times;
    out.values.reserve(times.size());
    double residue = 0.0;
    for (double t : times) {
        // forward and backward branches accumulated separately; their mean is
        // the literal symmetrized form and its imaginary part is pure noise
        cdouble fwd{0, 0}, bwd{0, 0};
        for (std::int64_t m = 0; m < w.size(); ++m) {
            const double ph = (sol.evals[m] - gs.e0) * t;
            fwd += w2[m] * cdouble(std::cos(ph), -std::sin(ph));
            bwd += w2[m] * cdouble(std::cos(ph), std::sin(ph));
        }
        const cdouble sym = 0.5 * (fwd + bwd);
        residue = std::max(residue, std::abs(sym.imag()));
        out.values.push_back(sym.real());
    }
    out.max_imag_residue = residue;
    return out;
}

CorrelationSeries ed_correlation(const SpinHamiltonian& h, int k, Axis mu,
                                 const std::vector<double>& times) {
    check_ed_size(h.n_sites);
    if (h.n_sites <= kDensePathMax) return ed_correlation(ed_solve(h), h, k, mu, times);

    // Krylov stepping for 11..14 sites
    if (k < 0 || k >= h.n_sites) throw validation_error("ed_correlation: probe site out of range");
    check_times(times);
    const EdGroundState gs = ed_ground(h);
    const CompiledHamiltonian ch = compile_terms(h);
    const VectorXcd phi = sigma_apply(h, k, mu, gs.psi0);

    CorrelationSeries out;
    out.meta = make_meta(h, k, mu);
    out.times = times;
    out.values.reserve(times.size());
    VectorXcd cur = phi;
    double t_cur = 0.0;
    for (double t : times) {
        if (t > t_cur) {
            cur = krylov_evolve(ch, cur, t - t_cur);
            t_cur = t;
        }
        const cdouble z = std::polar(1.0, gs.e0 * t) * phi.dot(cur);
        out.values.push_back(z.real());
    }
    out.max_imag_residue = 0.0;
    return out;
}

VectorXcd krylov_evolve(const CompiledHamiltonian& h, const VectorXcd& v, double dt) {
    const std::int64_t dim = v.size();
    const double nrm = v.norm();
    if (nrm == 0.0) return v;
    constexpr int kMaxKrylov = 60;

    MatrixXcd basis(dim, kMaxKrylov + 1);
    basis.col(0) = v / nrm;
    std::vector<double> alpha, beta;
    VectorXcd w(dim);
    int m = 0;
    for (int j = 0; j < kMaxKrylov; ++j) {
        apply_hamiltonian(h, basis.col(j).data(), w.data());
        const double a = std::real(basis.col(j).dot(w));
        alpha.push_back(a);
        w -= a * basis.col(j);
        if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
        for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
        const double b = w.norm();
        m = j + 1;
        // the propagated vector is converged once the subspace stops growing
        // or the last-mode weight is negligible
        if (b < 1e-13) break;
        if (j >= 8) {
            // cheap tail estimate: (|H| dt)^m / m! style decay via beta chain
            double tail = 1.0;
            for (int i = 1; i <= j; ++i) tail *= beta[static_cast<std::size_t>(i - 1)] * dt / i;
            if (std::abs(tail) < 1e-14) break;
        }
        if (j == kMaxKrylov - 1) break;
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    VectorXcd coef(m);
    for (int i = 0; i < m; ++i) {
        cdouble c{0, 0};
        for (int l = 0; l < m; ++l)
            c += es.eigenvectors()(i, l) * std::polar(1.0, -es.eigenvalues()[l] * dt) *
                 es.eigenvectors()(0, l);
        coef[i] = c;
    }
    return nrm * (basis.leftCols(m) * coef);
}

double stationarity_check(const SpinHamiltonian& h, int k, Axis mu, double t1, double t2) {
    if (t1 > t2) throw validation_error("stationarity_check: requires t1 <= t2");
    if (h.n_sites > kDensePathMax)
        throw resource_error("stationarity_check: spectral path limited to n_sites <= 10");
    const EdSolution sol = ed_solve(h);
    const EdGroundState gs = ground_from_solution(sol);
    const VectorXcd w = sol.evecs.adjoint() * sigma_apply(h, k, mu, gs.psi0);

    // C(ta,tb) = Re sum_m |w_m|^2 e^{i (E_m - E0)(tb - ta)}
    auto two_time = [&](double ta, double tb) {
        cdouble acc{0, 0};
        for (std::int64_t m = 0; m < w.size(); ++m)
            acc += std::norm(w[m]) * std::polar(1.0, (sol.evals[m] - gs.e0) * (tb - ta));
        return acc.real();
    };
    return std::abs(two_time(t1, t2) - two_time(0.0, t2 - t1));
}

double conjugation_identity_check(const SpinHamiltonian& h, int k, Axis mu) {
    if (h.n_sites > kDensePathMax)
        throw resource_error("conjugation_identity_check: limited to n_sites <= 10");
    SpinHamiltonian sig;
    sig.n_sites = h.n_sites;
    sig.fields[{static_cast<int>(mu), k}] = 1.0;
    const MatrixXcd s = to_dense(sig);
    const MatrixXcd hd = to_dense(h);
    const MatrixXcd fd = to_dense(build_fk(h, k, mu));
    return (s * hd * s - (hd - fd)).cwiseAbs().maxCoeff();
}

double expectation_value(const SpinHamiltonian& op, const VectorXcd& psi) {
    const CompiledHamiltonian c = compile_terms(op);
    VectorXcd out(psi.size());
    apply_hamiltonian(c, psi.data(), out.data());
    return std::real(psi.dot(out));
}

HfResult hellmann_feynman_check(const std::function<SpinHamiltonian(double)>& family,
                                const SpinHamiltonian& dh, double lambda, double dlambda) {
    if (!(dlambda > 0)) throw validation_error("hellmann_feynman_check: dlambda must be positive");
    const SpinHamiltonian h0 = family(lambda);
    const EdGroundState gs = ed_ground(h0);

    HfResult r;
    r.gap = gs.degeneracy_gap;
    r.degenerate = gs.degeneracy_gap < 1e-8 * std::max(1.0, std::abs(gs.e0));
    r.expectation = expectation_value(dh, gs.psi0);
    auto fd = [&](double d) {
        const double ep = ed_ground(family(lambda + d)).e0;
        const double em = ed_ground(family(lambda - d)).e0;
        return (ep - em) / (2.0 * d);
    };
    r.finite_difference = fd(dlambda);
    r.residual = std::abs(r.expectation - r.finite_difference);
    r.residual_2x = std::abs(r.expectation - fd(2.0 * dlambda));
    return r;
}

double fk_expectation_direct(const SpinHamiltonian& h, int k, Axis mu) {
    const EdGroundState gs = ed_ground(h);
    return expectation_value(build_fk(h, k, mu), gs.psi0);
}

double fk_expectation_hellmann_feynman(const SpinHamiltonian& h, int k, Axis mu, double dlambda) {
    // 2 sum_{alpha != mu} ( sum_j J_alpha^{j,k} dE0/dJ_alpha^{j,k}
    //                       + B_alpha^k dE0/dB_alpha^k )
    double acc = 0.0;
    auto e0_with = [&](const SpinHamiltonian& hh) { return ed_ground(hh).e0; };
    for (const auto& [key, val] : h.couplings) {
        const auto& [a, i, j] = key;
        if (a == static_cast<int>(mu) || (i != k && j != k)) continue;
        SpinHamiltonian hp = h, hm = h;
        hp.couplings[key] = val + dlambda;
        hm.couplings[key] = val - dlambda;
        acc += 2.0 * val * (e0_with(hp) - e0_with(hm)) / (2.0 * dlambda);
    }
    for (const auto& [key, val] : h.fields) {
        const auto& [a, i] = key;
        if (a == static_cast<int>(mu) || i != k) continue;
        SpinHamiltonian hp = h, hm = h;
        hp.fields[key] = val + dlambda;
        hm.fields[key] = val - dlambda;
        acc += 2.0 * val * (e0_with(hp) - e0_with(hm)) / (2.0 * dlambda);
    }
    return acc;
}

double first_order_approx(const SpinHamiltonian& h, int k, Axis mu, double t,
                          bool hellmann_feynman_route) {
    const EdGroundState gs = ed_ground(h);
    const double fexp = hellmann_feynman_route ? fk_expectation_hellmann_feynman(h, k, mu)
                                               : expectation_value(build_fk(h, k, mu), gs.psi0);
    return std::cos(gs.e0 * t) + std::sin(gs.e0 * t) * (gs.e0 * t - t * fexp);
}

double second_order_correction(const SpinHamiltonian& h, int k, Axis mu, double t) {
    if (h.n_sites > kDensePathMax)
        throw resource_error("second_order_correction: limited to n_sites <= 10");
    const EdGroundState gs = ed_ground(h);
    const SpinHamiltonian f = build_fk(h, k, mu);
    const CompiledHamiltonian cf = compile_terms(f);
    VectorXcd fv(gs.psi0.size());
    apply_hamiltonian(cf, gs.psi0.data(), fv.data());
    const double fexp = std::real(gs.psi0.dot(fv));
    const double f2exp = fv.squaredNorm();
    return -(t * t / 2.0) * std::cos(gs.e0 * t) *
           (gs.e0 * gs.e0 - 2.0 * gs.e0 * fexp + f2exp);
}

}  // namespace qlg
