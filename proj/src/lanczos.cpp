#include "qlg/lanczos.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace qlg {

namespace {

// Deterministic standard-normal vector (Box-Muller over mt19937_64 draws).
VectorXcd seeded_random_vector(std::int64_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    };
    VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        v[i] = cdouble(r * std::cos(t), r * std::sin(t));
    }
    return v;
}

}  // namespace

LanczosResult lanczos_lowest(const ApplyFn& apply, std::int64_t dim, const LanczosOptions& opt) {
    if (dim < 1) throw validation_error("lanczos_lowest: dim must be >= 1");

    if (dim == 1) {
        cdouble in{1.0, 0.0}, out{0.0, 0.0};
        apply(&in, &out);
        LanczosResult r;
        r.e0 = out.real();
        r.v0 = VectorXcd::Constant(1, cdouble{1.0, 0.0});
        r.iterations = 1;
        r.residual = std::abs(out.imag());
        r.converged = true;
        return r;
    }

    const int max_iter = std::min<std::int64_t>(opt.max_iter, dim);
    double best_residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= 3; ++restart) {
        VectorXcd start;
        if (restart == 0 && opt.initial != nullptr && opt.initial->size() == dim &&
            opt.initial->norm() > 1e-14) {
            start = *opt.initial;
        } else {
            start = seeded_random_vector(dim, opt.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart + 1));
        }
        start.normalize();

        MatrixXcd basis(dim, max_iter + 1);
        basis.col(0) = start;
        std::vector<double> alpha, beta;
        VectorXcd w(dim);

        for (int j = 0; j < max_iter; ++j) {
            apply(basis.col(j).data(), w.data());
            const double a = std::real(basis.col(j).dot(w));
            alpha.push_back(a);
            w -= a * basis.col(j);
            if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
            // full reorthogonalization, two passes
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);

            const int m = j + 1;
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
            for (int i = 0; i + 1 < m; ++i)
                tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
            const double theta = es.eigenvalues()[0];
            const Eigen::VectorXd y = es.eigenvectors().col(0);

            const double b = w.norm();
            const double res_est = b * std::abs(y[m - 1]);
            const bool breakdown = b < 1e-14 * std::max(1.0, std::abs(theta));

            if (res_est <= opt.tol * std::max(1.0, std::abs(theta)) || breakdown || j == max_iter - 1) {
                VectorXcd v0 = basis.leftCols(m) * y.cast<cdouble>();
                v0.normalize();
                VectorXcd hv(dim);
                apply(v0.data(), hv.data());
                const double e0 = std::real(v0.dot(hv));
                const double res = (hv - e0 * v0).norm();
                best_residual = std::min(best_residual, res);
                if (res <= opt.tol * std::max(1.0, std::abs(e0))) {
                    return {e0, std::move(v0), m, res, true};
                }
                if (breakdown) break;  // invariant subspace without convergence: restart
                if (j == max_iter - 1) {
                    if (opt.throw_on_maxiter)
                        throw numerical_error("lanczos_lowest: max_iter exceeded", m, res);
                    return {e0, std::move(v0), m, res, false};
                }
            }
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }
    throw numerical_error("lanczos_lowest: breakdown persisted after 3 restarts", opt.max_iter,
                          best_residual);
}

}  // namespace qlg
