#include "qlg/svd.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <lapacke.h>

namespace qlg {

SvdResult svd_truncate(const MatrixXcd& m, std::int64_t chi_max, double cutoff) {
    if (chi_max < 1) throw validation_error("svd_truncate: chi_max must be >= 1");
    if (!(cutoff >= 0.0 && cutoff < 1.0)) throw validation_error("svd_truncate: cutoff must be in [0, 1)");
    if (!m.allFinite()) throw validation_error("svd_truncate: non-finite input matrix");

    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    const lapack_int k = std::min(rows, cols);
    if (k == 0) throw validation_error("svd_truncate: empty matrix");

    // zgesdd destroys its input; work on a column-major copy.
    MatrixXcd a = m;
    MatrixXcd u_full(rows, k);
    MatrixXcd vt_full(k, cols);
    VectorXd s_full(k);

    lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'S', rows, cols,
        reinterpret_cast<lapack_complex_double*>(a.data()), rows, s_full.data(),
        reinterpret_cast<lapack_complex_double*>(u_full.data()), rows,
        reinterpret_cast<lapack_complex_double*>(vt_full.data()), k);
    if (info != 0)
        throw numerical_error("svd_truncate: zgesdd did not converge", static_cast<int>(info), 0.0);

    double total = 0.0;
    for (lapack_int i = 0; i < k; ++i) total += s_full[i] * s_full[i];

    // Smallest kept count whose discarded tail weight is within the cutoff.
    std::int64_t kept_needed = k;
    if (total > 0.0) {
        double tail = 0.0;
        while (kept_needed > 1) {
            const double s2 = s_full[kept_needed - 1] * s_full[kept_needed - 1];
            if ((tail + s2) / total > cutoff) break;
            tail += s2;
            --kept_needed;
        }
    } else {
        kept_needed = 1;  // zero matrix: keep a single null mode
    }

    SvdResult out;
    out.report.chi_cap_hit = kept_needed > chi_max;
    const std::int64_t kept = std::min<std::int64_t>(chi_max, kept_needed);
    out.report.kept = kept;
    double discarded = 0.0;
    for (std::int64_t i = kept; i < k; ++i) discarded += s_full[i] * s_full[i];
    out.report.discarded_weight = total > 0.0 ? discarded / total : 0.0;

    out.u = u_full.leftCols(kept);
    out.s = s_full.head(kept);
    out.v = vt_full.topRows(kept);

    // Phase convention: largest-|.| entry of each left singular vector made
    // real-positive; the compensating phase goes into the matching row of v.
    for (std::int64_t c = 0; c < kept; ++c) {
        std::int64_t imax = 0;
        double amax = -1.0;
        for (std::int64_t r = 0; r < out.u.rows(); ++r) {
            const double av = std::abs(out.u(r, c));
            if (av > amax) {
                amax = av;
                imax = r;
            }
        }
        if (amax <= 0.0) continue;
        const cdouble phase = out.u(imax, c) / amax;
        out.u.col(c) *= std::conj(phase);
        out.v.row(c) *= phase;
    }
    return out;
}

}  // namespace qlg
