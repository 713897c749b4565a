#pragma once

#include <string>
#include <vector>

#include "stirred/pde.hpp"

namespace stirred::critical {

/// Mesh and run-length settings for one survival probe.
struct SearchGrid {
    double dx = 0.2;
    double half_width = 240.0;   ///< simulate [0, half_width] with mirror symmetry at 0
    double dt = 0.0;             ///< 0 selects the explicit stability limit
    double horizon = 200.0;
    int max_extensions = 6;      ///< horizon doubles at most this many times
    double sample_dt = 1.0;
    double bump_L = 5.0;
    double bump_l = 1.0;
    double extinction_threshold = 1e-3;
    double escape_fraction = 0.75;  ///< front past this fraction of the domain counts as survival
    /// 0 tracks a planar front on a line; k >= 2 tracks a radially
    /// symmetric bump in k dimensions (x is then the radius).
    int radial_dim = 0;

    void validate() const;
};

enum class Verdict { Survives, Dies, Undecided };
const char* to_string(Verdict v);

struct SurvivalVerdict {
    Verdict verdict = Verdict::Undecided;
    std::vector<double> times;
    std::vector<double> front_positions;  ///< -1 when nothing exceeds the threshold
    double t_used = 0.0;
    double threshold = 0.0;
    double sup_norm = 0.0;  ///< sup of the monitored component at t_used
    double lambda = 0.0;
};

/// Index of the monitored component and its threshold for a spec.
struct Monitor {
    int component = 0;
    double threshold = 0.5;
};
Monitor monitor_for(const pde::ReactionSpec& spec);

/// Initial bump f0 blended between the empty state and 0.9 of the occupied
/// equilibrium; returned as one vector per component on the probe mesh.
std::vector<std::vector<double>> bump_initial_data(const pde::ReactionSpec& spec, const SearchGrid& grid);

/// Rightmost interpolated position where `values` crosses `threshold`
/// (sampled at x_i = i dx), or -1 if no value reaches it.
double front_position(const std::vector<double>& values, double dx, double threshold);

/// Solve from the bump at spec.lambda and track the front. Dies when the
/// monitored sup-norm drops below the extinction threshold; Survives when
/// the front escapes or is strictly increasing over the last half of the
/// run having moved at least two cells; otherwise the run is continued to
/// double its length until max_extensions, then Undecided.
SurvivalVerdict classify_survival(const pde::ReactionSpec& spec, const SearchGrid& grid);

struct BisectionStep {
    int iteration = 0;
    double lambda = 0.0;
    Verdict verdict = Verdict::Undecided;
    double lo = 0.0;
    double hi = 0.0;
    double t_used = 0.0;
};

struct LambdaBracket {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double midpoint() const { return lo + 0.5 * (hi - lo); }
    bool converged = false;
    SurvivalVerdict lo_verdict;  ///< Dies
    SurvivalVerdict hi_verdict;  ///< Survives
    std::vector<BisectionStep> transcript;
    std::vector<SurvivalVerdict> probes;  ///< every classification in order
};

/// Bisection on lambda (all other fields of spec fixed). Throws
/// BracketInvalid unless lo0 dies and hi0 survives. Stops when the width is
/// at most target_width, or early (converged = false) on an Undecided probe.
LambdaBracket bisect_lambda_c(const pde::ReactionSpec& spec, double lo0, double hi0, double target_width,
                              const SearchGrid& grid = {});

}  // namespace stirred::critical
