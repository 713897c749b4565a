#pragma once

#include <string>
#include <vector>

#include "stirred/flow_geometry.hpp"

namespace stirred::cstar {

struct FlowConditionSample {
    double theta = 0.0;
    double alpha = 0.0;
    double s = 0.0;
    Point start;    ///< (a0, b0) on gamma_theta
    Point flowed;   ///< flow of xi from alpha (a0, b0)
    Point phi;      ///< (a_s, b_s)
    bool strong = false;  ///< alpha b0 >= eps, so the (1 + K1 s) bound applies
    double margin = 0.0;  ///< min over both coordinates of flowed - bound
};

struct FlowConditionCertificate {
    bool pass = true;
    long samples = 0;
    long strong_samples = 0;
    double worst_margin = 0.0;
    FlowConditionSample witness;
};

/// For every theta, alpha, s and every one of `positions` equally spaced
/// arc-length points (a0, b0) on gamma_theta, check
///   flow_xi(s, alpha (a0, b0)) >= (1 + K1 s) alpha (a_s, b_s)  if alpha b0 >= eps,
///   flow_xi(s, alpha (a0, b0)) >= (1 - K2 s) alpha (a_s, b_s)  otherwise,
/// with (a_s, b_s) = phi_theta(s, (a0, b0)). Passes iff every margin is
/// >= -1e-12.
FlowConditionCertificate check_flow_condition(const std::vector<double>& thetas, const std::vector<double>& alphas,
                                           const std::vector<double>& s_values, int positions, double c,
                                           const FlowGeometry& g = {});

/// Default sample sets: n thetas on [0, theta_hi] (theta_hi <= 0 selects g.theta0()), alphas k/n for k = 1..n,
/// n values of s on [0, s0].
FlowConditionCertificate check_flow_condition_grid(int n, int positions, double c, const FlowGeometry& g = {},
                                                double theta_hi = 0.0);

struct TrotterResult {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> v;
};

/// (e^{(t/n) Laplacian} o F_eta^{t/n})^n applied to (u0, v0) sampled on the
/// uniform grid x. The pointwise flow uses adaptive Dormand-Prince with
/// relative tolerance 1e-9; the heat part is heat_step.
TrotterResult trotter_run_fields(std::vector<double> x, std::vector<double> u0, std::vector<double> v0, double c,
                                 double t, int n);

/// Same, starting from (a0 f0, b0 f0) on [-half_width, half_width] with spacing dx.
TrotterResult trotter_run(double a0, double b0, double L, double l, double c, double t, int n, double dx,
                          double half_width);

enum class StarVerdict { Pass, Fail, Inconclusive };
const char* to_string(StarVerdict v);

struct ConditionStarParams {
    double c = 8800.0;
    double D1 = 0.5;
    double d1 = 0.52;   ///< must stay below (1 + theta0) min v on gamma
    double d2 = 0.0;      ///< 0 selects the midpoint of (1 - 1/c, 1)
    double D2 = 0.0;      ///< 0 selects the midpoint of (d2, 1)
    double M = 0.5;
    double T = 0.0;       ///< 0 selects the first sampled time the lower check holds
    double dx = 0.0;      ///< 0 selects min(0.05, 0.1/sqrt(c))
    double t_max = 10.0;  ///< give up on the lower check after this time
    double upper_window = 10.0;
};

struct ConditionStarCertificate {
    StarVerdict verdict = StarVerdict::Inconclusive;
    bool lower_ok = false;
    bool upper_ok = false;
    double c = 0.0;
    double D1 = 0.0, d1 = 0.0, d2 = 0.0, D2 = 0.0, M = 0.0;
    double T = 0.0;
    double T_lower = 0.0;       ///< first time min v on [-3M, 3M] exceeded d1
    double T_upper = 0.0;       ///< first time the spatially constant run fell below d2
    double min_v_lower = 0.0;   ///< min of v_T on [-3M, 3M] from the lower data
    double max_v_upper = 0.0;   ///< max of v on [T, T + window] from u = v = 1
    double v_plus = 0.0;        ///< v-coordinate of P+ (0 if absent)
    double dx = 0.0;
    std::string note;
};

/// Lower check: solve the lily-pad PDE from u0 = v0 = D1 f0 with the
/// transition regions inside [-M, M] (a lower bound for any admissible
/// data) and require v_T > d1 on [-3M, 3M]. Upper check: from u = v = 1
/// (an upper bound for any data) require v_t < d2 on [T, T + window].
/// Fail when the lower solution decays below D1 everywhere; Inconclusive
/// when t_max is reached first.
ConditionStarCertificate condition_star_check(const ConditionStarParams& params);

}  // namespace stirred::cstar
