#pragma once

#include <utility>
#include <vector>

namespace stirred::cstar {

/// Smoothed step: 0 below -l, quadratic up to 1/2 at 0, quadratic up to 1
/// at l, then 1. C^1 with |h''| = 1/l^2 on (-l, l).
double bump_h(double x, double l);

/// Smoothed indicator of [-L, L] with transition regions [+-L - l, +-L + l].
double bump_f0(double x, double L, double l);

/// bump_f0 with both transition regions moved outward by `shift`.
double bump_fs(double x, double L, double l, double shift);

/// Exact heat semigroup e^{s Laplacian} f0 at x, obtained by integrating each
/// quadratic piece of f0 against the Gaussian kernel of variance 2s.
double heat_f0_exact(double x, double s, double L, double l);

/// Discrete convolution with the heat kernel of variance 2s, truncated at
/// 8 standard deviations and renormalised to unit mass. Samples beyond the
/// ends repeat the edge value. Requires dx <= sqrt(s)/10 (ConfigError).
std::vector<double> heat_step(const std::vector<double>& samples, double s, double dx);

struct ShoulderGainReport {
    bool pass = true;
    double worst_margin = 0.0;  ///< min of e^{s Laplacian} f0 - f0 - s/(5 l^2)
    double worst_x = 0.0;
    double worst_s = 0.0;
    long points = 0;
};

/// Check the shoulder gain e^{s Laplacian} f0 >= f0 + s/(5 l^2) at every
/// grid point x = k dx inside (L + l/200, L + l + s) and its mirror image,
/// for each s in `s_values`. Uses the exact Gaussian integral.
ShoulderGainReport check_shoulder_gain(double L, double l, const std::vector<double>& s_values, double dx);

/// Same check driven by heat_step on a sampled profile (cross-check; every
/// s must satisfy the heat_step resolution requirement).
ShoulderGainReport check_shoulder_gain_discrete(double L, double l, const std::vector<double>& s_values, double dx);

/// Largest s (to relative 1e-6) such that the shoulder gain holds at every
/// zone grid point for all s' in a fine sweep of (0, s]. Searched in (0, s_cap].
double shoulder_gain_largest_s(double L, double l, double dx, double s_cap);

struct LiftedDominanceReport {
    bool pass = true;
    double worst_margin = 0.0;  ///< min of fhat - (1 + delta2 s) f_s
    double worst_x = 0.0;
    long points = 0;
};

/// Check fhat(x) >= (1 + delta2 s) f_s(x) on the grid x = k dx covering
/// [-(L + l + s) - 2l, L + l + s + 2l], where fhat = f0 + m s on
/// (-L - l - s, L + l + s) and 0 outside, and f_s shifts by delta1 s.
LiftedDominanceReport check_lifted_dominance(double m, double s, double L, double l, double delta1, double delta2, double dx);

/// Constants fixed by the shoulder width l and the flow constants K1, K2.
struct ProfileConstants {
    double l = 0.0;
    double m = 0.0;       ///< max of the two lower bounds on m
    double m_bound_gain = 0.0;   ///< K1/2 (199/200)^2 - 2.01/l^2
    double m_bound_shoulder = 0.0;  ///< 1/(5 l^2) - 1.01 K2
    double delta1 = 0.0;
    double delta2 = 0.0;
    double l_min = 0.0;  ///< K1 > (200/199)^2 4.02 / l^2 needs l > l_min
    double l_max = 0.0;  ///< K2 < 1/(5.05 l^2) needs l < l_max
};

/// l defaults to the midpoint of the admissible interval rounded to 0.31.
/// delta1 = m l / 4 and delta2 = m / 2.
ProfileConstants derive_profile_constants(double K1, double K2, double l);

/// Admissible interval (l_min, l_max) for the shoulder width.
std::pair<double, double> shoulder_width_interval(double K1, double K2);

}  // namespace stirred::cstar
