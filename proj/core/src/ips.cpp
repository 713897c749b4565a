#include "stirred/ips.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "stirred/errors.hpp"

namespace stirred::ips {

void IpsParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a finite number >= 0");
    if (stirring != Stirring::None && !(eps > 0.0)) throw ConfigError("eps must be > 0 when stirring is on");
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    if (torus_side < 1) throw ConfigError("torus_side must be >= 1");
}

const char* to_string(BirthRule r) {
    switch (r) {
        case BirthRule::G1: return "g1";
        case BirthRule::G2: return "g2";
        case BirthRule::Decoupled: return "decoupled";
    }
    return "?";
}

const char* to_string(Stirring s) {
    switch (s) {
        case Stirring::None: return "none";
        case Stirring::LilyPad: return "lily-pad";
        case Stirring::Individual: return "individual";
    }
    return "?";
}

int count_sex(const Torus& torus, const Config& config, int x, int m) {
    int n = 0;
    for (int y : torus.neighbourhood(x)) n += nest(config[y], m);
    return n;
}

int count_pairs(const Torus& torus, const Config& config, int x) {
    int n = 0;
    for (int y : torus.neighbourhood(x)) n += config[y] == kBoth;
    return n;
}

double birth_rate_g1(const Torus& torus, const Config& config, int x, int m, double lambda) {
    if (nest(config[x], m)) return 0.0;
    return lambda * count_sex(torus, config, x, 1) * count_sex(torus, config, x, 2);
}

double birth_rate_g2(const Torus& torus, const Config& config, int x, int m, double lambda) {
    if (nest(config[x], m)) return 0.0;
    return lambda * count_pairs(torus, config, x);
}

double decoupled_contact_rates(const Torus& torus, const Config& config, int x, int m, double lambda) {
    if (nest(config[x], m)) return 0.0;
    const auto hood = torus.neighbourhood(x);
    return lambda * static_cast<double>(hood.size()) * count_sex(torus, config, x, m);
}

double birth_rate(BirthRule rule, const Torus& torus, const Config& config, int x, int m, double lambda) {
    switch (rule) {
        case BirthRule::G1: return birth_rate_g1(torus, config, x, m, lambda);
        case BirthRule::G2: return birth_rate_g2(torus, config, x, m, lambda);
        case BirthRule::Decoupled: return decoupled_contact_rates(torus, config, x, m, lambda);
    }
    return 0.0;
}

double max_nest_rate(BirthRule rule, double lambda, int hood_size) {
    const double n = hood_size;
    double b = 0.0;
    switch (rule) {
        case BirthRule::G1: b = lambda * n * n; break;
        case BirthRule::G2: b = lambda * n; break;
        case BirthRule::Decoupled: b = lambda * n * n; break;
    }
    return std::max(IpsParams::delta, b);
}

ZetaRates zeta_rates(const Torus& torus, const std::vector<std::uint8_t>& zeta, int x, double lambda) {
    int n2 = 0;
    for (int y : torus.neighbourhood(x)) n2 += zeta[y] == 2;
    ZetaRates r;
    switch (zeta[x]) {
        case 0: r.zero_to_one = 2.0 * lambda * n2; break;
        case 1:
            r.one_to_zero = 1.0;
            r.one_to_two = lambda * n2;
            break;
        case 2: r.two_to_one = 2.0; break;
        default: throw ConfigError("zeta values must lie in {0,1,2}");
    }
    return r;
}

void apply_transition(Config& config, const Transition& t) {
    switch (t.kind) {
        case Transition::Kind::Death:
            config[t.x] = static_cast<std::uint8_t>(config[t.x] & ~(1u << (t.m - 1)));
            break;
        case Transition::Kind::Birth:
            config[t.x] = static_cast<std::uint8_t>(config[t.x] | (1u << (t.m - 1)));
            break;
        case Transition::Kind::LilyPadSwap:
            std::swap(config[t.x], config[t.y]);
            break;
        case Transition::Kind::IndividualSwap: {
            const std::uint8_t bit = static_cast<std::uint8_t>(1u << (t.m - 1));
            const std::uint8_t a = config[t.x] & bit;
            const std::uint8_t b = config[t.y] & bit;
            config[t.x] = static_cast<std::uint8_t>((config[t.x] & ~bit) | b);
            config[t.y] = static_cast<std::uint8_t>((config[t.y] & ~bit) | a);
            break;
        }
    }
}

namespace {

// Transitions owned by site x: its deaths, births into its empty nests and
// swaps along the bonds starting at x. Visiting order is fixed so that event
// selection is reproducible.
template <class Visit>
void for_each_site_transition(const IpsParams& p, const Torus& torus, const Config& config, int x,
                              Visit&& visit) {
    const std::uint8_t s = config[x];
    for (int m = 1; m <= 2; ++m) {
        if (nest(s, m)) {
            visit(Transition{Transition::Kind::Death, x, -1, m, IpsParams::delta});
        } else {
            const double r = birth_rate(p.rule, torus, config, x, m, p.lambda);
            if (r > 0.0) visit(Transition{Transition::Kind::Birth, x, -1, m, r});
        }
    }
    if (p.stirring == Stirring::None) return;
    const double sr = p.stir_rate();
    for (int b : torus.bonds_from(x)) {
        const int y = torus.bonds()[b].b;
        if (p.stirring == Stirring::LilyPad) {
            if (config[y] != s) visit(Transition{Transition::Kind::LilyPadSwap, x, y, 0, sr});
        } else {
            for (int m = 1; m <= 2; ++m) {
                if (nest(s, m) != nest(config[y], m))
                    visit(Transition{Transition::Kind::IndividualSwap, x, y, m, sr});
            }
        }
    }
}

double site_total(const IpsParams& p, const Torus& torus, const Config& config, int x) {
    double total = 0.0;
    for_each_site_transition(p, torus, config, x, [&](const Transition& t) { total += t.rate; });
    return total;
}

}  // namespace

void enumerate_transitions(const IpsParams& params, const Torus& torus, const Config& config,
                           std::vector<Transition>& out) {
    out.clear();
    for (int x = 0; x < torus.sites(); ++x)
        for_each_site_transition(params, torus, config, x, [&](const Transition& t) { out.push_back(t); });
}

Simulator::Simulator(IpsParams params, Config initial, std::uint64_t seed, std::uint64_t stream)
    : params_(params), torus_((params.validate(), params.dim), params.torus_side) {
    while (leaves_ < static_cast<std::size_t>(torus_.sites())) leaves_ *= 2;
    tree_.assign(2 * leaves_, 0.0);
    reset(std::move(initial), seed, stream);
}

void Simulator::reset(Config initial, std::uint64_t seed, std::uint64_t stream) {
    if (initial.size() != static_cast<std::size_t>(torus_.sites()))
        throw ConfigError("initial configuration does not match the torus size");
    for (auto c : initial)
        if (c > kBoth) throw ConfigError("site codes must lie in 0..3");
    state_.config = std::move(initial);
    state_.time = 0.0;
    state_.rng_seed = seed;
    state_.event_count = 0;
    rng_ = Rng(seed, stream);
    last_.reset();
    rebuild();
}

void Simulator::rebuild() {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (int x = 0; x < torus_.sites(); ++x) tree_[leaves_ + x] = site_total(params_, torus_, state_.config, x);
    for (std::size_t i = leaves_ - 1; i >= 1; --i) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

void Simulator::refresh_site(int x) {
    std::size_t i = leaves_ + static_cast<std::size_t>(x);
    tree_[i] = site_total(params_, torus_, state_.config, x);
    for (i /= 2; i >= 1; i /= 2) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

void Simulator::refresh_around(int x) {
    // Birth rates depend on N_z for z in N_x, and bonds into x are owned by
    // neighbours of x, so N_x covers every rate that can change.
    for (int z : torus_.neighbourhood(x)) refresh_site(z);
}

double Simulator::site_rate(int x) const { return tree_[leaves_ + static_cast<std::size_t>(x)]; }

double Simulator::recomputed_total_rate() const {
    double total = 0.0;
    for (int x = 0; x < torus_.sites(); ++x) total += site_total(params_, torus_, state_.config, x);
    return total;
}

int Simulator::sample_site(double& target) const {
    std::size_t i = 1;
    while (i < leaves_) {
        const double left = tree_[2 * i];
        if (target < left || tree_[2 * i + 1] <= 0.0) {
            i = 2 * i;
        } else {
            target -= left;
            i = 2 * i + 1;
        }
    }
    return static_cast<int>(i - leaves_);
}

Transition Simulator::pick_event(int x, double target) const {
    std::optional<Transition> chosen;
    std::optional<Transition> last;
    for_each_site_transition(params_, torus_, state_.config, x, [&](const Transition& t) {
        if (chosen) return;
        last = t;
        if (target < t.rate) chosen = t;
        else target -= t.rate;
    });
    // Rounding can leave target marginally above the site total.
    if (!chosen && !last) throw InvariantViolation("selected a site with no active transition");
    return chosen ? *chosen : *last;
}

Simulator::StepResult Simulator::step(double horizon) {
    const double total = total_rate();
    if (!(total > 0.0)) {
        state_.time = std::max(state_.time, horizon);
        return StepResult::Absorbed;
    }
    const double dt = rng_.exponential(total);
    if (state_.time + dt > horizon) {
        state_.time = horizon;
        return StepResult::Horizon;
    }
    state_.time += dt;
    double target = rng_.uniform() * total;
    const int x = sample_site(target);
    const Transition t = pick_event(x, target);
    apply_transition(state_.config, t);
    ++state_.event_count;
    last_ = t;
    refresh_around(t.x);
    if (t.y >= 0) refresh_around(t.y);
    return StepResult::Event;
}

std::vector<DensitySample> Simulator::run_until(double t_end, int samples) {
    if (t_end < state_.time) throw ConfigError("t_end must not precede the current time");
    if (samples < 1) throw ConfigError("need at least one sample time");
    const double t0 = state_.time;
    std::vector<DensitySample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double ts = samples == 1 ? t_end : t0 + (t_end - t0) * k / (samples - 1);
        while (step(ts) == StepResult::Event) {
        }
        out.push_back({ts, density_any(state_.config), density_both(state_.config)});
    }
    return out;
}

Config random_config(const Torus& torus, const std::vector<double>& male_density,
                     const std::vector<double>& female_density, Rng& rng) {
    const auto n = static_cast<std::size_t>(torus.sites());
    if (male_density.size() != n || female_density.size() != n)
        throw ConfigError("density profile length does not match the torus");
    Config c(n);
    for (std::size_t x = 0; x < n; ++x) {
        const bool m = rng.bernoulli(male_density[x]);
        const bool f = rng.bernoulli(female_density[x]);
        c[x] = static_cast<std::uint8_t>((m ? kMale : 0) | (f ? kFemale : 0));
    }
    return c;
}

Config full_config(const Torus& torus) { return Config(static_cast<std::size_t>(torus.sites()), kBoth); }

std::vector<DecayPoint> upper_invariant_decay(const IpsParams& params, const std::vector<double>& t_grid,
                                              int replicas, std::uint64_t seed, int threads) {
    params.validate();
    if (replicas < 2) throw ConfigError("upper_invariant_decay needs at least 2 replicas");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
            throw ConfigError("time grid must be nonnegative and nondecreasing");
    }
    const Torus torus(params.dim, params.torus_side);
    const std::size_t nt = t_grid.size();
    std::vector<double> frac(static_cast<std::size_t>(replicas) * nt);

    auto run_replica = [&](int r) {
        Simulator sim(params, full_config(torus), seed, static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < nt; ++i) {
            while (sim.step(t_grid[i]) == Simulator::StepResult::Event) {
            }
            int empty = 0;
            for (auto c : sim.config()) empty += nest(c, 1) == 0;
            frac[static_cast<std::size_t>(r) * nt + i] = static_cast<double>(empty) / torus.sites();
        }
    };

    const int nthreads = std::max(1, std::min(threads, replicas));
    if (nthreads == 1) {
        for (int r = 0; r < replicas; ++r) run_replica(r);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int r = t; r < replicas; r += nthreads) run_replica(r);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<DecayPoint> out;
    for (std::size_t i = 0; i < nt; ++i) {
        double mean = 0.0;
        for (int r = 0; r < replicas; ++r) mean += frac[static_cast<std::size_t>(r) * nt + i];
        mean /= replicas;
        double var = 0.0;
        for (int r = 0; r < replicas; ++r) {
            const double d = frac[static_cast<std::size_t>(r) * nt + i] - mean;
            var += d * d;
        }
        var /= (replicas - 1);
        out.push_back({t_grid[i], mean, std::sqrt(var / replicas)});
    }
    return out;
}

std::vector<double> mean_male_occupation(const IpsParams& params, const std::vector<double>& male,
                                         const std::vector<double>& female, double t, int replicas,
                                         std::uint64_t seed, int threads) {
    params.validate();
    const Torus torus(params.dim, params.torus_side);
    const auto n = static_cast<std::size_t>(torus.sites());
    if (male.size() != n || female.size() != n) throw ConfigError("density profiles must have one entry per site");
    if (replicas < 1) throw ConfigError("need at least one replica");
    std::vector<std::vector<long>> counts(static_cast<std::size_t>(std::max(1, threads)), std::vector<long>(n, 0));
    auto work = [&](int w, int stride) {
        auto& local = counts[static_cast<std::size_t>(w)];
        for (int r = w; r < replicas; r += stride) {
            Rng init(mix_seed(seed, 0x1d), static_cast<std::uint64_t>(r));
            Simulator sim(params, random_config(torus, male, female, init), seed, static_cast<std::uint64_t>(r));
            while (sim.step(t) == Simulator::StepResult::Event) {
            }
            for (std::size_t x = 0; x < n; ++x) local[x] += nest(sim.config()[x], 1);
        }
    };
    const int nthreads = std::max(1, std::min(threads, replicas));
    if (nthreads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(work, w, nthreads);
        for (auto& th : pool) th.join();
    }
    std::vector<double> out(n, 0.0);
    for (const auto& local : counts)
        for (std::size_t x = 0; x < n; ++x) out[x] += static_cast<double>(local[x]);
    for (auto& v : out) v /= replicas;
    return out;
}

}  // namespace stirred::ips
