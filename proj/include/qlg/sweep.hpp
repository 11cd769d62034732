#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qlg/correlator.hpp"

namespace qlg {

struct SweepConfig {
    std::string family = "xxz";  // xxz (lambda = delta) | xy (lambda = nu = bz/j)
    double j = 1.0;
    double gamma = 1.0;  // xy only
    int n = 40;
    int site = -1;       // probe site, default n/2
    double lambda_min = -1.5, lambda_max = 1.5, lambda_step = 0.05;
    std::vector<double> probe_times{1.0, 2.0};
    std::vector<Axis> directions{Axis::Z, Axis::X};
    bool with_lgi = true;     // also evaluate K and the L_max summaries
    double t_max = 3.0;       // correlation window; tau grid spans half of it
    double grid_step = 0.01;  // C(t) grid step
    StcOptions engine;
    int workers = 0;  // 0 = library default
};

struct SweepRecord {
    double lambda = 0.0;
    bool ok = false;
    std::string error;  // set when the point failed; sweep continues
    double e0 = 0.0;
    // alpha -> probe time -> C value
    std::map<std::string, std::map<double, double>> c_at;
    std::map<std::string, LgViolationSummary> lg;
    double l_max_total = 0.0;
    std::string total_alpha;
    std::uint64_t series_hash = 0;  // FNV over all C series bytes, provenance
    std::int64_t max_chi = 0;
    double cumulative_truncation = 0.0;
};

struct SweepResult {
    std::string family;
    std::string lambda_name;
    int n = 0;
    std::vector<double> probe_times;
    std::vector<std::string> directions;
    bool with_lgi = false;
    std::vector<SweepRecord> records;  // ascending lambda
};

SweepResult sweep(const SweepConfig& cfg);

// Central differences in the interior, one-sided at the edges; order 2 is the
// repeated first difference. Needs at least 3 points.
std::vector<double> finite_diff(const std::vector<double>& xs, const std::vector<double>& ys,
                                int order);

struct DetectorConfig {
    double jump_threshold = 10.0;  // x median adjacent |difference|
    double jump_min_range_fraction = 0.05;
    double peak_threshold = 2.0;   // x median |derivative|
    double kink_threshold = 5.0;   // x median |second difference|
};

struct Candidate {
    std::string kind;  // jump | derivative-peak | kink
    double lambda_star = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    double magnitude = 0.0;
    std::string source;  // column the detector ran on
};

// Jump and derivative-peak detectors on every C column, kink detector on the
// total-violation column. Candidates are interior by construction and sorted
// by kind then descending magnitude.
std::vector<Candidate> detect_critical_points(const SweepResult& sweep, const DetectorConfig& det);

struct RefinedSweep {
    SweepResult result;              // coarse + refined points merged
    std::vector<Candidate> candidates;
    std::vector<Candidate> coarse_candidates;
};

// Two-pass protocol: coarse grid, detect, re-run a fine grid around each
// candidate, merge, detect again.
RefinedSweep sweep_with_refinement(const SweepConfig& cfg, const DetectorConfig& det,
                                   double window = 0.1, double fine_step = 0.01);

struct PeakScalingPoint {
    int n = 0;
    double peak = 0.0;       // max interior |d L_max^z / d lambda|
    double lambda_at = 0.0;
    bool tainted = false;    // some sweep point failed for this size
};

// Fig.-9-style finite-size scaling of the total-violation derivative.
std::vector<PeakScalingPoint> peak_scaling(const SweepConfig& base, const std::vector<int>& n_list);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_candidates_report(std::ostream& os, const std::vector<Candidate>& cands);

}  // namespace qlg
