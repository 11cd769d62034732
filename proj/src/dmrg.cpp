#include "qlg/dmrg.hpp"

#include <cmath>

#include "qlg/lanczos.hpp"

namespace qlg {

namespace {

// Environments are tensors with axes (bra bond, mpo bond, ket bond).
DenseTensor left_edge_env() {
    DenseTensor e({1, 1, 1});
    e.at({0, 0, 0}) = 1.0;
    return e;
}

DenseTensor grow_left(const DenseTensor& env, const DenseTensor& t, const DenseTensor& w) {
    // env(a,b,c) conj(T)(a,s,a') W(b,b',s,s') T(c,s',c') -> (a',b',c')
    DenseTensor x = contract(env, t.conj(), {{0, 0}});      // (b,c,s,a')
    DenseTensor y = contract(x, w, {{0, 0}, {2, 2}});       // (c,a',b',s')
    return contract(y, t, {{0, 0}, {3, 1}});                // (a',b',c')
}

DenseTensor grow_right(const DenseTensor& env, const DenseTensor& t, const DenseTensor& w) {
    // env(a,b,c) conj(T)(a',s,a) W(b',b,s,s') T(c',s',c) -> (a',b',c')
    DenseTensor x = contract(t.conj(), env, {{2, 0}});      // (a',s,b,c)
    DenseTensor y = contract(x, w, {{1, 2}, {2, 1}});       // (a',c,b',s')
    return contract(y, t, {{1, 2}, {3, 1}});                // (a',b',c')
}

// Effective two-site operator applied to theta(al, s1, s2, ar).
DenseTensor apply_heff(const DenseTensor& lenv, const DenseTensor& w1, const DenseTensor& w2,
                       const DenseTensor& renv, const DenseTensor& theta) {
    // lenv(a,b,c) theta(c,s1,s2,ar) -> (a,b,s1,s2,ar)
    DenseTensor x = contract(lenv, theta, {{2, 0}});
    // x(a,b,s1,s2,ar) w1(b,b',t1,s1) -> (a,s2,ar,b',t1)
    DenseTensor y = contract(x, w1, {{1, 0}, {2, 3}});
    // y(a,s2,ar,b',t1) w2(b',b'',t2,s2) -> (a,ar,t1,b'',t2)
    DenseTensor z = contract(y, w2, {{3, 0}, {1, 3}});
    // z(a,ar,t1,b'',t2) renv(a'',b'',ar) -> (a,t1,t2,a'')
    return contract(z, renv, {{1, 2}, {3, 1}});
}

}  // namespace

DmrgResult dmrg_ground(const Mpo& mpo, const DmrgOptions& opt) {
    const int n = mpo.n_sites;
    if (n < 2) throw validation_error("dmrg_ground: need at least 2 sites");
    if (opt.chi_max < 2) throw validation_error("dmrg_ground: chi_max must be >= 2");

    const Mpo work = opt.bias_field != 0.0 ? add_onsite(mpo, Axis::Z, opt.bias_field) : mpo;

    DmrgResult res;
    res.state = random_mps(n, std::min<std::int64_t>(8, opt.chi_max), opt.seed);
    MpsState& psi = res.state;

    // right environments for sites n-1 .. 1 (state enters right-canonical)
    std::vector<DenseTensor> renv(static_cast<std::size_t>(n) + 1);
    renv[static_cast<std::size_t>(n)] = left_edge_env();
    for (int i = n - 1; i >= 1; --i)
        renv[static_cast<std::size_t>(i)] =
            grow_right(renv[static_cast<std::size_t>(i + 1)], psi.tensors[static_cast<std::size_t>(i)],
                       work.w[static_cast<std::size_t>(i)]);
    std::vector<DenseTensor> lenv(static_cast<std::size_t>(n) + 1);
    lenv[0] = left_edge_env();

    double e_prev = std::numeric_limits<double>::infinity();
    double e_cur = 0.0;

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        const std::int64_t chi_sweep =
            std::min<std::int64_t>(opt.chi_max, std::int64_t{16} << std::min(sweep, 20));

        auto update_bond = [&](int i, bool left_to_right) {
            const DenseTensor& t1 = psi.tensors[static_cast<std::size_t>(i)];
            const DenseTensor& t2 = psi.tensors[static_cast<std::size_t>(i + 1)];
            DenseTensor theta = contract(t1, t2, {{2, 0}});  // (al,s1,s2,ar)
            const std::int64_t al = theta.dim(0), ar = theta.dim(3);
            const std::int64_t dim = al * 2 * 2 * ar;

            const DenseTensor& le = lenv[static_cast<std::size_t>(i)];
            const DenseTensor& re = renv[static_cast<std::size_t>(i + 2)];
            const DenseTensor& w1 = work.w[static_cast<std::size_t>(i)];
            const DenseTensor& w2 = work.w[static_cast<std::size_t>(i + 1)];

            auto apply = [&](const cdouble* in, cdouble* out) {
                DenseTensor th({al, 2, 2, ar},
                               std::vector<cdouble>(in, in + dim));
                DenseTensor hv = apply_heff(le, w1, w2, re, th);
                std::copy(hv.values().begin(), hv.values().end(), out);
            };

            VectorXcd v0(dim);
            std::copy(theta.values().begin(), theta.values().end(), v0.data());
            LanczosOptions lopt;
            lopt.tol = opt.lanczos_tol;
            lopt.max_iter = opt.lanczos_max_iter;
            lopt.throw_on_maxiter = false;
            lopt.initial = &v0;
            lopt.seed = opt.seed + static_cast<std::uint64_t>(i) * 7919u;
            const LanczosResult lr = lanczos_lowest(apply, dim, lopt);
            e_cur = lr.e0;

            DenseTensor opt_theta({al, 2, 2, ar},
                                  std::vector<cdouble>(lr.v0.data(), lr.v0.data() + dim));
            const MatrixXcd m = opt_theta.matricize(2);  // (al*2) x (2*ar)
            auto r = svd_truncate(m, chi_sweep, opt.svd_cutoff);
            psi.cumulative_truncation += r.report.discarded_weight;
            const std::int64_t k = r.report.kept;
            const double snorm = r.s.norm();

            if (left_to_right) {
                // left tensor takes U (left-isometric), center moves right
                std::vector<cdouble> ud(static_cast<std::size_t>(al * 2 * k));
                for (std::int64_t rr = 0; rr < al * 2; ++rr)
                    for (std::int64_t cc = 0; cc < k; ++cc)
                        ud[static_cast<std::size_t>(rr * k + cc)] = r.u(rr, cc);
                psi.tensors[static_cast<std::size_t>(i)] = DenseTensor({al, 2, k}, std::move(ud));
                MatrixXcd sv = (r.s / snorm).asDiagonal() * r.v;
                std::vector<cdouble> vd(static_cast<std::size_t>(k * 2 * ar));
                for (std::int64_t rr = 0; rr < k; ++rr)
                    for (std::int64_t cc = 0; cc < 2 * ar; ++cc)
                        vd[static_cast<std::size_t>(rr * 2 * ar + cc)] = sv(rr, cc);
                psi.tensors[static_cast<std::size_t>(i + 1)] = DenseTensor({k, 2, ar}, std::move(vd));
                lenv[static_cast<std::size_t>(i + 1)] =
                    grow_left(lenv[static_cast<std::size_t>(i)], psi.tensors[static_cast<std::size_t>(i)],
                              w1);
                psi.center = i + 1;
            } else {
                // right tensor takes V (right-isometric), center moves left
                MatrixXcd us = r.u * (r.s / snorm).asDiagonal();
                std::vector<cdouble> ud(static_cast<std::size_t>(al * 2 * k));
                for (std::int64_t rr = 0; rr < al * 2; ++rr)
                    for (std::int64_t cc = 0; cc < k; ++cc)
                        ud[static_cast<std::size_t>(rr * k + cc)] = us(rr, cc);
                psi.tensors[static_cast<std::size_t>(i)] = DenseTensor({al, 2, k}, std::move(ud));
                std::vector<cdouble> vd(static_cast<std::size_t>(k * 2 * ar));
                for (std::int64_t rr = 0; rr < k; ++rr)
                    for (std::int64_t cc = 0; cc < 2 * ar; ++cc)
                        vd[static_cast<std::size_t>(rr * 2 * ar + cc)] = r.v(rr, cc);
                psi.tensors[static_cast<std::size_t>(i + 1)] = DenseTensor({k, 2, ar}, std::move(vd));
                renv[static_cast<std::size_t>(i + 1)] =
                    grow_right(renv[static_cast<std::size_t>(i + 2)],
                               psi.tensors[static_cast<std::size_t>(i + 1)], w2);
                psi.center = i;
            }
        };

        for (int i = 0; i + 1 < n; ++i) update_bond(i, true);
        for (int i = n - 2; i >= 0; --i) update_bond(i, false);

        res.sweep_energies.push_back(e_cur);
        if (chi_sweep == opt.chi_max && std::abs(e_cur - e_prev) < opt.energy_tol) {
            res.converged = true;
            break;
        }
        e_prev = e_cur;
    }

    canonicalize(psi);
    res.e0 = mpo_expectation(mpo, psi).real();
    return res;
}

}  // namespace qlg
