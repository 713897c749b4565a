#pragma once

#include <cstdint>
#include <vector>

namespace stirred::perc {

struct OpConfig {
    double gamma = 1e-3;  ///< site closure probability bound
    int M = 0;            ///< dependence range, 0 or 1
    double p = 0.5;       ///< initial wet density on even sites
    int n_levels = 200;   ///< levels 0 .. 2n
    int half_width = 0;   ///< sites |x| <= half_width are simulated; 0 selects 2n

    int width() const { return half_width > 0 ? half_width : 2 * n_levels; }
    void validate() const;
};

/// Uniform variates attached to lattice points, identical for every
/// configuration sharing the seed (this is what makes the monotone couplings
/// exact).
double site_uniform(std::uint64_t seed, std::uint64_t tag, long x, long n);

/// Open/closed state of (x, n). M = 0: closed iff U(x, n) < gamma. M = 1:
/// closed iff U(x, n) < gamma/2 or V(b) < gamma/2, where the block b pairs
/// (x, n) and (x + 1, n + 1) for even n, so sites at sup-distance > 1 share
/// no randomness and the closure probability is 1 - (1 - gamma/2)^2 <= gamma.
bool site_open(const OpConfig& cfg, std::uint64_t seed, long x, long n);

struct OpTrajectory {
    std::vector<std::vector<long>> wet;  ///< sorted wet sites per level 0 .. 2n
    std::vector<long> wet_count;
    bool origin_wet_at_end = false;
};

/// (x, n+1) is wet iff it is open and (x-1, n) or (x+1, n) is wet. Sites
/// beyond the simulated window count as dry.
OpTrajectory simulate_op(const OpConfig& cfg, std::uint64_t seed);

/// Whether 0 is wet at level 2n, restricted to its backward light cone.
bool origin_survives(const OpConfig& cfg, std::uint64_t seed);

struct SurvivalEstimate {
    long replicas = 0;
    long survived = 0;
    double frequency = 0.0;
    double ci_lo = 0.0;  ///< 95% Wilson interval
    double ci_hi = 0.0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
SurvivalEstimate wilson(long k, long n, double z = 1.959963984540054);

/// Replica r uses seed mix_seed(seed, r).
SurvivalEstimate survival_frequency(const OpConfig& cfg, long replicas, std::uint64_t seed, int threads = 1);

/// No death among six unit-rate nest clocks before T and all four rate-lambda
/// birth clocks ring before T: e^{-6T} (1 - e^{-lambda T})^4.
double good_event_bound(double lambda, double T);

struct GoodEventChoice {
    double lambda = 0.0;
    double T = 0.0;
    double bound = 0.0;
};

/// T = gamma/12 and the smallest lambda with (1 - e^{-lambda T})^4 >= 1 - gamma/2,
/// so the bound exceeds 1 - gamma.
GoodEventChoice solve_good_event(double gamma);

struct GoodEventEstimate {
    long replicas = 0;
    long hits = 0;
    double frequency = 0.0;
    double sigma = 0.0;  ///< binomial standard error from the closed form
};

/// Simulate the six death clocks and four birth clocks directly.
GoodEventEstimate mc_good_event(double lambda, double T, long replicas, std::uint64_t seed);

}  // namespace stirred::perc
