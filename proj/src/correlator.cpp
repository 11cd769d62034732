#include "qlg/correlator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qlg/dmrg.hpp"
#include "qlg/ed.hpp"
#include "qlg/tebd.hpp"

namespace qlg {

std::vector<double> make_time_grid(double t_max, double step) {
    if (!(step > 0)) throw validation_error("time grid: step must be positive");
    if (t_max < 0) throw validation_error("time grid: t_max must be nonnegative");
    std::vector<double> g;
    const int n = static_cast<int>(std::llround(t_max / step));
    for (int i = 0; i <= n; ++i) g.push_back(i * step);
    return g;
}

namespace {

// returns the uniform step, throwing when the grid is not uniform from zero
double uniform_step(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw validation_error(std::string(who) + ": empty grid");
    if (std::abs(grid[0]) > 1e-12)
        throw validation_error(std::string(who) + ": grid must start at t = 0");
    if (grid.size() == 1) return 0.0;
    const double step = grid[1] - grid[0];
    if (!(step > 0)) throw validation_error(std::string(who) + ": grid must be increasing");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(grid[i] - static_cast<double>(i) * step) > 1e-9)
            throw validation_error(std::string(who) + ": grid must be uniform");
    }
    return step;
}

StcResult stc_ed(const SpinHamiltonian& h, int k, Axis mu, const std::vector<double>& grid) {
    StcResult r;
    r.series = ed_correlation(h, k, mu, grid);
    r.e0 = ed_ground(h).e0;
    return r;
}

StcResult stc_mps(const SpinHamiltonian& h, int k, Axis mu, const std::vector<double>& grid,
                  const StcOptions& opt) {
    const double step = uniform_step(grid, "stc");
    int stride = 1;
    if (grid.size() > 1) {
        const double ratio = step / opt.dt;
        stride = static_cast<int>(std::llround(ratio));
        if (stride < 1 || std::abs(ratio - stride) > 1e-6) {
            std::ostringstream os;
            const double nearest = std::max(1.0, std::round(step / opt.dt)) * opt.dt;
            os << "stc: grid step " << step << " is not a multiple of the engine dt " << opt.dt
               << "; nearest valid grid has step " << nearest << " (t_max "
               << std::floor(grid.back() / nearest) * nearest << ")";
            throw validation_error(os.str());
        }
    }

    double bias = opt.bias_field;
    if (std::isnan(bias)) {
        // ferromagnetic XXZ: break the degenerate manifold toward |up...up>
        bias = (h.info.family == "xxz" && h.info.delta.value_or(0.0) < -1.0 + 1e-12)
                   ? -1e-8 * h.info.j
                   : 0.0;
    }

    DmrgOptions dopt;
    dopt.chi_max = opt.chi_max;
    dopt.energy_tol = opt.energy_tol;
    dopt.max_sweeps = opt.max_sweeps;
    dopt.svd_cutoff = opt.svd_cutoff;
    dopt.bias_field = bias;
    dopt.seed = opt.seed;
    const Mpo mpo = to_mpo(h);
    DmrgResult ground = dmrg_ground(mpo, dopt);

    EvolutionConfig cfg;
    cfg.dt = opt.dt;
    cfg.t_max = grid.back();
    cfg.chi_max = opt.chi_max;
    cfg.svd_cutoff = opt.svd_cutoff;
    cfg.sample_stride = stride;
    cfg.recanonicalize_every = opt.recanonicalize_every;
    cfg.parallel_bonds = opt.parallel_bonds;

    StcResult r;
    r.e0 = ground.e0;
    r.ground_converged = ground.converged;
    r.series.times = grid;
    r.series.meta.model = h.info.family.empty() ? "general" : h.info.family;
    r.series.meta.lambda_name = h.info.lambda_name();
    r.series.meta.lambda = h.info.lambda().value_or(0.0);
    r.series.meta.n_sites = h.n_sites;
    r.series.meta.site = k;
    r.series.meta.alpha = axis_name(mu);
    r.series.meta.engine = "mps";
    r.series.meta.chi = static_cast<int>(opt.chi_max);
    r.series.meta.dt = opt.dt;

    const MpsState phi0 = apply_site_op(ground.state, k, mu);

    if (opt.two_branch) {
        // C(t) = Re <psi0(t)| sigma_k^mu |phi(t)>: both branches share the
        // same Trotter propagator, cancelling most of the coherent phase error
        TebdStepper stepper(h, cfg);
        MpsState bra = ground.state;
        MpsState ket = phi0;
        auto measure = [&]() {
            return overlap(apply_site_op(bra, k, mu), ket).real();
        };
        r.series.values.push_back(measure());
        for (int step_i = 1; step_i <= stepper.steps_total(); ++step_i) {
            stepper.step(bra);
            stepper.step(ket);
            if (step_i % stride == 0) r.series.values.push_back(measure());
        }
        r.max_chi = stepper.max_chi();
        r.cumulative_truncation = bra.cumulative_truncation + ket.cumulative_truncation;
        for (const auto& w : stepper.warnings()) r.warnings.push_back(w);
    } else {
        // single evolved branch with the explicit ground-state phase factor
        Trajectory traj = tebd_evolve(phi0, h, cfg, &phi0);
        for (const auto& s : traj.samples) {
            const cdouble z = std::polar(1.0, ground.e0 * s.t) * s.overlap_with_ref;
            r.series.values.push_back(z.real());
        }
        r.max_chi = traj.max_chi;
        r.cumulative_truncation = traj.final_state.cumulative_truncation;
        r.warnings = traj.warnings;
    }
    if (!ground.converged) r.warnings.push_back("dmrg did not reach energy_tol");
    return r;
}

}  // namespace

StcResult stc(const SpinHamiltonian& h, int k, Axis mu, const std::vector<double>& grid,
              const StcOptions& opt) {
    if (k < 0 || k >= h.n_sites) throw validation_error("stc: probe site out of range");
    uniform_step(grid, "stc");
    if (opt.engine == "ed") return stc_ed(h, k, mu, grid);
    if (opt.engine == "mps") return stc_mps(h, k, mu, grid, opt);
    if (opt.engine == "auto")
        return h.n_sites <= opt.ed_site_cap ? stc_ed(h, k, mu, grid) : stc_mps(h, k, mu, grid, opt);
    throw validation_error("stc: unknown engine '" + opt.engine + "'");
}

LgSeries lg_function(const CorrelationSeries& c) {
    const double step = uniform_step(c.times, "lg_function");
    (void)step;
    LgSeries k;
    k.meta = c.meta;
    const std::size_t half = (c.times.size() - 1) / 2;
    for (std::size_t i = 0; i <= half; ++i) {
        k.taus.push_back(c.times[i]);
        const double kv = c.values[2 * i] - 2.0 * c.values[i];
        k.k_values.push_back(kv);
        k.violation_mask.push_back(kv < -1.0);
    }
    return k;
}

LgViolationSummary lg_max_violation(const LgSeries& k) {
    if (k.k_values.empty()) throw validation_error("lg_max_violation: empty series");
    LgViolationSummary s;
    std::size_t m = 0;
    for (std::size_t i = 1; i < k.k_values.size(); ++i)
        if (k.k_values[i] < k.k_values[m]) m = i;
    s.l_max = k.k_values[m];
    s.argmin_tau = k.taus[m];
    s.violated = s.l_max < -1.0;
    s.boundary_min = (m == 0 || m + 1 == k.k_values.size());
    s.l_max_refined = s.l_max;
    s.argmin_tau_refined = s.argmin_tau;
    if (!s.boundary_min) {
        // parabola through the minimum and its neighbors
        const double ym = k.k_values[m - 1], y0 = k.k_values[m], yp = k.k_values[m + 1];
        const double h = k.taus[m + 1] - k.taus[m];
        const double denom = ym - 2.0 * y0 + yp;
        if (denom > 1e-300) {
            const double delta = 0.5 * (ym - yp) / denom;
            s.argmin_tau_refined = k.taus[m] + delta * h;
            s.l_max_refined = y0 - 0.25 * (ym - yp) * delta;
        }
    }
    return s;
}

LgTotal lg_total_max(const std::map<std::string, LgViolationSummary>& per_alpha, bool literal_max) {
    if (per_alpha.empty()) throw validation_error("lg_total_max: no directions given");
    LgTotal t;
    bool first = true;
    for (const auto& [alpha, s] : per_alpha) {  // std::map: deterministic order
        const bool better = first || (literal_max ? s.l_max > t.l_max_total : s.l_max < t.l_max_total);
        if (better) {
            t.l_max_total = s.l_max;
            t.alpha = alpha;
            first = false;
        }
    }
    return t;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_series_csv_header(std::ostream& os) {
    os << "model,N,chi,lambda_name,lambda,alpha,t_or_tau,value,kind,engine\n";
}

namespace {

void write_rows(std::ostream& os, const SeriesMeta& m, const std::vector<double>& xs,
                const std::vector<double>& ys, const char* kind) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << m.model << ',' << m.n_sites << ',' << m.chi << ',' << m.lambda_name << ','
           << csv_num(m.lambda) << ',' << m.alpha << ',' << csv_num(xs[i]) << ','
           << csv_num(ys[i]) << ',' << kind << ',' << m.engine << '\n';
    }
}

}  // namespace

void write_correlation_csv(std::ostream& os, const CorrelationSeries& c) {
    write_rows(os, c.meta, c.times, c.values, "C");
}

void write_lg_csv(std::ostream& os, const LgSeries& k) {
    write_rows(os, k.meta, k.taus, k.k_values, "K");
}

}  // namespace qlg
