#include "stirred/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "stirred/errors.hpp"
#include "stirred/rng.hpp"

namespace stirred::perc {

namespace {

constexpr std::uint64_t kOpenTag = 0x0b;
constexpr std::uint64_t kBlockTag = 0xb1;
constexpr std::uint64_t kInitTag = 0x1a;

std::uint64_t zigzag(long v) {
    return v >= 0 ? 2 * static_cast<std::uint64_t>(v) : 2 * static_cast<std::uint64_t>(-(v + 1)) + 1;
}

}  // namespace

void OpConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    if (M < 0 || M > 1) throw ConfigError("only M = 0 and M = 1 are implemented");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
    if (n_levels < 0) throw ConfigError("n_levels must be >= 0");
    if (half_width < 0) throw ConfigError("half_width must be >= 0");
}

double site_uniform(std::uint64_t seed, std::uint64_t tag, long x, long n) {
    const std::uint64_t h = mix_seed(mix_seed(mix_seed(seed, tag), zigzag(x)), zigzag(n));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

bool site_open(const OpConfig& cfg, std::uint64_t seed, long x, long n) {
    if (cfg.M == 0) return !(site_uniform(seed, kOpenTag, x, n) < cfg.gamma);
    const double half = cfg.gamma / 2.0;
    if (site_uniform(seed, kOpenTag, x, n) < half) return false;
    // Block anchor: the even-level member of the diagonal pair.
    const long bx = (n % 2 == 0) ? x : x - 1;
    const long bn = (n % 2 == 0) ? n : n - 1;
    return !(site_uniform(seed, kBlockTag, bx, bn) < half);
}

namespace {

bool initially_wet(const OpConfig& cfg, std::uint64_t seed, long x) {
    return site_uniform(seed, kInitTag, x, 0) < cfg.p;
}

}  // namespace

OpTrajectory simulate_op(const OpConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const long W = cfg.width();
    const long levels = 2L * cfg.n_levels;
    // wet[x + W] for the current level.
    std::vector<char> cur(2 * W + 1, 0), next(2 * W + 1, 0);
    OpTrajectory out;
    auto record = [&] {
        std::vector<long> sites;
        for (long x = -W; x <= W; ++x)
            if (cur[x + W]) sites.push_back(x);
        out.wet_count.push_back(static_cast<long>(sites.size()));
        out.wet.push_back(std::move(sites));
    };
    for (long x = -W; x <= W; ++x)
        if ((x & 1) == 0) cur[x + W] = initially_wet(cfg, seed, x);
    record();
    for (long n = 0; n < levels; ++n) {
        std::fill(next.begin(), next.end(), 0);
        for (long x = -W; x <= W; ++x) {
            if (((x + n + 1) & 1) != 0) continue;
            const bool parent = (x - 1 >= -W && cur[x - 1 + W]) || (x + 1 <= W && cur[x + 1 + W]);
            if (parent && site_open(cfg, seed, x, n + 1)) next[x + W] = 1;
        }
        std::swap(cur, next);
        record();
    }
    out.origin_wet_at_end = W >= 0 && cur[W] != 0;
    return out;
}

bool origin_survives(const OpConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const long levels = 2L * cfg.n_levels;
    const long W = std::min<long>(cfg.width(), levels);
    // Only sites with |x| <= levels - n can reach the origin at the final level.
    std::vector<char> cur(2 * W + 1, 0), next(2 * W + 1, 0);
    for (long x = -W; x <= W; ++x)
        if ((x & 1) == 0) cur[x + W] = initially_wet(cfg, seed, x);
    for (long n = 0; n < levels; ++n) {
        const long reach = std::min(W, levels - n - 1);
        std::fill(next.begin(), next.end(), 0);
        bool any = false;
        for (long x = -reach; x <= reach; ++x) {
            if (((x + n + 1) & 1) != 0) continue;
            const bool parent = (x - 1 >= -W && cur[x - 1 + W]) || (x + 1 <= W && cur[x + 1 + W]);
            if (parent && site_open(cfg, seed, x, n + 1)) {
                next[x + W] = 1;
                any = true;
            }
        }
        std::swap(cur, next);
        if (!any) return false;
    }
    return cur[W] != 0;
}

SurvivalEstimate wilson(long k, long n, double z) {
    SurvivalEstimate e;
    e.replicas = n;
    e.survived = k;
    if (n <= 0) return e;
    const double ph = static_cast<double>(k) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (ph + z2 / (2.0 * n)) / denom;
    const double rad = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
    e.frequency = ph;
    e.ci_lo = std::max(0.0, centre - rad);
    e.ci_hi = std::min(1.0, centre + rad);
    return e;
}

SurvivalEstimate survival_frequency(const OpConfig& cfg, long replicas, std::uint64_t seed, int threads) {
    cfg.validate();
    if (replicas < 100) throw ConfigError("survival_frequency needs at least 100 replicas");
    threads = std::max(1, threads);
    std::vector<char> hit(replicas, 0);
    auto work = [&](int w) {
        for (long r = w; r < replicas; r += threads) hit[r] = origin_survives(cfg, mix_seed(seed, r));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    long k = 0;
    for (char h : hit) k += h;
    return wilson(k, replicas);
}

double good_event_bound(double lambda, double T) {
    if (!(lambda >= 0.0) || !(T >= 0.0)) throw ConfigError("lambda and T must be >= 0");
    return std::exp(-6.0 * T) * std::pow(-std::expm1(-lambda * T), 4);
}

GoodEventChoice solve_good_event(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    GoodEventChoice g;
    g.T = gamma / 12.0;
    const double need = std::pow(1.0 - gamma / 2.0, 0.25);  // 1 - e^{-lambda T} >= need
    g.lambda = -std::log1p(-need) / g.T;
    g.bound = good_event_bound(g.lambda, g.T);
    return g;
}

GoodEventEstimate mc_good_event(double lambda, double T, long replicas, std::uint64_t seed) {
    if (!(lambda >= 0.0) || !(T >= 0.0)) throw ConfigError("lambda and T must be >= 0");
    if (replicas < 1) throw ConfigError("need at least one replica");
    GoodEventEstimate e;
    e.replicas = replicas;
    for (long r = 0; r < replicas; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        bool good = true;
        for (int k = 0; k < 6; ++k)
            if (rng.exponential(1.0) < T) good = false;
        for (int k = 0; k < 4; ++k)
            if (!(rng.exponential(lambda) < T)) good = false;
        if (good) ++e.hits;
    }
    e.frequency = static_cast<double>(e.hits) / replicas;
    const double p = good_event_bound(lambda, T);
    e.sigma = std::sqrt(p * (1.0 - p) / replicas);
    return e;
}

}  // namespace stirred::perc
