#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qlg {

// Provenance shared by correlation and Leggett-Garg series.
struct SeriesMeta {
    std::string model;        // "xxz", "xy", ...
    std::string lambda_name;  // "delta" / "nu"
    double lambda = 0.0;
    int n_sites = 0;
    int site = 0;             // probe site k
    std::string alpha;        // direction of A(0)
    std::string engine;       // "ed" or "mps"
    int chi = 0;              // 0 for the ED engine
    double dt = 0.0;          // engine time step (0 for ED)
};

// Real symmetrized two-time correlation C(t) on a time grid (units 1/J).
// values[0] corresponds to t = 0 and equals 1 up to numerical noise.
struct CorrelationSeries {
    std::vector<double> times;
    std::vector<double> values;
    SeriesMeta meta;
    // largest |Im| left over when assembling the symmetrized form
    double max_imag_residue = 0.0;
};

// Leggett-Garg function K_-(tau) = C(2 tau) - 2 C(tau) on the half grid.
struct LgSeries {
    std::vector<double> taus;
    std::vector<double> k_values;
    std::vector<bool> violation_mask;  // K < -1, strict
    SeriesMeta meta;
};

// min_tau K_-(tau) plus a parabolic refinement through the grid minimum.
struct LgViolationSummary {
    double l_max = 0.0;          // grid minimum (authoritative for `violated`)
    double argmin_tau = 0.0;
    double l_max_refined = 0.0;  // parabola through the minimum and neighbors
    double argmin_tau_refined = 0.0;
    bool violated = false;       // l_max < -1
    bool boundary_min = false;   // grid minimum sits on the first/last point
};

}  // namespace qlg
