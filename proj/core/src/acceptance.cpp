#include "stirred/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <exception>
#include <limits>
#include <numbers>

#include "stirred/condition_star.hpp"
#include "stirred/coupling.hpp"
#include "stirred/critical.hpp"
#include "stirred/ctmc.hpp"
#include "stirred/errors.hpp"
#include "stirred/flow_geometry.hpp"
#include "stirred/percolation.hpp"
#include "stirred/profile.hpp"

namespace stirred::accept {

namespace {

// Tolerances.
constexpr double kG2IndividualTarget = 1.125, kG2IndividualTol = 0.005;
constexpr double kG1IndividualTarget = 0.225, kG1IndividualTol = 0.002;
constexpr double kWaveRootTarget = 4.5, kWaveRootTol = 1e-6;
constexpr double kG2LilyPadTarget = 1.1145, kG2LilyPadTol = 0.01;
constexpr double kG1LilyPadLo = 0.271, kG1LilyPadHi = 0.272;
constexpr double kTvTol = 0.02;
constexpr double kSurvivalFloor = 0.9;
constexpr double kShoulderSMax = 1e-3;

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

pde::ReactionSpec spec_for(pde::System sys, double beta_coeff = 0.0) {
    pde::ReactionSpec s;
    s.system = sys;
    s.dim_d = 2;
    s.beta_coeff = beta_coeff;
    return s;
}

Outcome critical_lambda_individual(const Options&) {
    const critical::SearchGrid grid;
    const auto g2 = critical::bisect_lambda_c(spec_for(pde::System::Sys11, 4.0), 1.0, 1.3, 0.002, grid);
    const auto g1 = critical::bisect_lambda_c(spec_for(pde::System::Sys11, 20.0), 0.2, 0.25, 0.0005, grid);
    const double root = pde::wave_integral_root();
    const bool ok2 = g2.converged && std::abs(g2.midpoint() - kG2IndividualTarget) <= kG2IndividualTol;
    const bool ok1 = g1.converged && std::abs(g1.midpoint() - kG1IndividualTarget) <= kG1IndividualTol;
    const bool okr = std::abs(root - kWaveRootTarget) <= kWaveRootTol;
    return {ok1 && ok2 && okr,
            format("beta=4 lambda: [%.5f, %.5f] mid %.5f; beta=20 lambda: [%.5f, %.5f] mid %.5f; "
                   "wave integral root %.9f",
                   g2.lo, g2.hi, g2.midpoint(), g1.lo, g1.hi, g1.midpoint(), root)};
}

Outcome critical_lambda_lily_pad(const Options&) {
    critical::SearchGrid radial;
    radial.radial_dim = 2;
    const auto g2 = critical::bisect_lambda_c(spec_for(pde::System::Sys10), 1.0, 1.3, 0.001, radial);
    const auto g1 = critical::bisect_lambda_c(spec_for(pde::System::Sys12WithDeaths), 0.25, 0.3, 0.001, radial);
    const auto planar = critical::bisect_lambda_c(spec_for(pde::System::Sys10), 1.0, 1.3, 0.001, {});
    const bool ok2 = g2.converged && std::abs(g2.midpoint() - kG2LilyPadTarget) <= kG2LilyPadTol;
    const double gap = g1.midpoint() < kG1LilyPadLo   ? g1.midpoint() - kG1LilyPadLo
                       : g1.midpoint() > kG1LilyPadHi ? g1.midpoint() - kG1LilyPadHi
                                                      : 0.0;
    return {ok2 && g1.converged,
            format("radial d=2 bump: sys10 [%.5f, %.5f] mid %.5f; sys12 with deaths [%.5f, %.5f] "
                   "(gap to [0.271, 0.272]: %+.4f); planar sys10 front [%.5f, %.5f]",
                   g2.lo, g2.hi, g2.midpoint(), g1.lo, g1.hi, gap, planar.lo, planar.hi)};
}

Outcome condition_star_end_to_end(const Options&) {
    cstar::ConditionStarParams big;
    big.c = 8800.0;
    const auto hi = cstar::condition_star_check(big);
    cstar::ConditionStarParams small;
    small.c = 1.0;
    const auto lo = cstar::condition_star_check(small);
    return {hi.verdict == cstar::StarVerdict::Pass && lo.verdict == cstar::StarVerdict::Fail,
            format("c=8800: %s (T=%.4f, min v on [-3M,3M]=%.4f > d1=%.2f, max v upper=%.6f < d2=%.6f); "
                   "c=1: %s (%s)",
                   cstar::to_string(hi.verdict), hi.T, hi.min_v_lower, hi.d1, hi.max_v_upper, hi.d2,
                   cstar::to_string(lo.verdict), lo.note.c_str())};
}

Outcome constant_certificates(const Options&) {
    const cstar::FlowGeometry g;
    const bool ratio = cstar::ratio_condition_holds(g);
    const double growth = cstar::growth_bound_margin(g);
    const auto dom = cstar::verify_domination(8800.0, 2000, g);
    const bool s0_ok = g.s0() == std::log(12.0 / 11.0) / 75.0;
    const auto a41 = cstar::check_flow_condition_grid(12, 48, 8800.0, g);
    const auto wide = cstar::check_flow_condition_grid(12, 48, 8800.0, g, g.theta_max);
    return {ratio && growth >= 0.0 && dom.pass && s0_ok && a41.pass,
            format("K1/K2 ratio %s; growth margin %.4f; domination worst %.3g at (%.4f, %.4f) "
                   "(%ld evaluations); s0=%.6g; flow condition on theta in [0, %.5f]: worst %.3g over %ld "
                   "samples (theta up to 0.2: worst %.3g)",
                   ratio ? "holds" : "fails", growth, dom.worst_margin, dom.witness.u, dom.witness.v,
                   dom.evaluations, g.s0(), g.theta0(), a41.worst_margin, a41.samples, wide.worst_margin)};
}

Outcome ctmc_equivalence(const Options& opt) {
    double worst = 0.0;
    std::string where;
    int configs = 0;
    for (int side : {2, 3})
        for (auto st : {ips::Stirring::LilyPad, ips::Stirring::Individual})
            for (auto rule : {ips::BirthRule::G1, ips::BirthRule::G2}) {
                ips::IpsParams p;
                p.lambda = 1.0;
                p.rule = rule;
                p.stirring = st;
                p.eps = 0.5;
                p.dim = 1;
                p.torus_side = side;
                const ips::Torus torus(1, side);
                const auto start = ips::full_config(torus);
                const auto exact = ips::transition_distribution(ips::exact_generator_matrix(p),
                                                                ips::state_index(start), 1.0);
                const auto mc = ips::mc_distribution(p, start, 1.0, 100000, mix_seed(opt.seed, ++configs),
                                                     opt.threads);
                const double tv = ips::total_variation(mc, exact);
                if (tv > worst) {
                    worst = tv;
                    where = format("%d sites, %s, %s", side, ips::to_string(st), ips::to_string(rule));
                }
            }
    return {worst <= kTvTol, format("%d configurations, worst TV %.4f (%s)", configs, worst, where.c_str())};
}

Outcome monotonicity(const Options& opt) {
    const ips::Stirring modes[] = {ips::Stirring::None, ips::Stirring::LilyPad, ips::Stirring::Individual};
    long violations = 0;
    long runs[3] = {0, 0, 0};
    Rng rng(opt.seed, 0x6a);
    auto params = [&](int k, ips::BirthRule rule, double lambda) {
        ips::IpsParams p;
        p.lambda = lambda;
        p.rule = rule;
        p.stirring = modes[k % 3];
        p.eps = 0.5;
        p.dim = 1;
        p.torus_side = 8;
        return p;
    };
    auto random_cfg = [&] {
        ips::Config c(8);
        for (auto& s : c) s = static_cast<std::uint8_t>(rng.below(4));
        return c;
    };
    auto check = [&](int kind, ips::Config lower, ips::Config upper, const ips::IpsParams& lo,
                     const ips::IpsParams& hi) {
        ips::CoupledPair pair{std::move(lower), std::move(upper), 0.0, rng.engine()(), 0};
        try {
            const auto out = ips::run_coupled(pair, lo, hi, 10.0);
            if (!ips::ordered(out.lower, out.upper)) ++violations;
        } catch (const CouplingViolation&) {
            ++violations;
        }
        ++runs[kind];
    };
    for (int k = 0; k < 1000; ++k) {
        const auto rule = k % 2 ? ips::BirthRule::G1 : ips::BirthRule::G2;
        // Initial-condition order.
        const auto lower = random_cfg();
        auto upper = lower;
        for (auto& s : upper) s = static_cast<std::uint8_t>(s | rng.below(4));
        check(0, lower, upper, params(k, rule, 2.0), params(k, rule, 2.0));
        // Order in lambda.
        const auto start = random_cfg();
        check(1, start, start, params(k, rule, 1.0), params(k, rule, 2.0));
        // Domination by the decoupled contact rates.
        check(2, start, start, params(k, rule, 2.0), params(k, ips::BirthRule::Decoupled, 2.0));
    }
    return {violations == 0, format("initial order %ld runs, lambda order %ld runs, domination %ld runs; "
                                    "%ld violations",
                                    runs[0], runs[1], runs[2], violations)};
}

Outcome extinction(const Options& opt) {
    ips::IpsParams p;
    p.lambda = 0.1 / 9.0;
    p.rule = ips::BirthRule::G1;
    p.dim = 1;
    p.torus_side = 64;
    const ips::Torus torus(1, 64);
    int extinct = 0;
    double latest = 0.0;
    for (int r = 0; r < 100; ++r) {
        ips::Simulator sim(p, ips::full_config(torus), opt.seed, static_cast<std::uint64_t>(r));
        double t_last = 0.0;
        ips::Simulator::StepResult res;
        while ((res = sim.step(200.0)) == ips::Simulator::StepResult::Event) t_last = sim.time();
        bool empty = true;
        for (auto c : sim.config()) empty = empty && c == ips::kEmpty;
        if (empty) {
            ++extinct;
            latest = std::max(latest, t_last);
        }
    }
    return {extinct == 100, format("%d/100 replicas extinct by t=200 (|N|=%d, lambda |N|^2=%.2f, "
                                   "latest extinction time %.2f)",
                                   extinct, torus.neighbourhood_size(), p.lambda * 9.0, latest)};
}

Outcome oriented_percolation(const Options& opt) {
    perc::OpConfig cfg;
    cfg.gamma = 1e-3;
    cfg.M = 0;
    cfg.p = 0.5;
    cfg.n_levels = 200;
    const auto est = perc::survival_frequency(cfg, 1000, opt.seed, opt.threads);
    long violations = 0;
    long pairs = 0;
    for (int M : {0, 1}) {
        for (std::uint64_t r = 0; r < 100; ++r) {
            const std::uint64_t seed = mix_seed(opt.seed ^ 0x9e, r);
            perc::OpConfig a{0.05, M, 0.5, 25, 0};
            perc::OpConfig b = a;
            b.gamma = 1e-3;
            perc::OpConfig c = a;
            c.p = 0.3;
            perc::OpConfig d = a;
            d.p = 0.7;
            const auto wa = perc::simulate_op(a, seed), wb = perc::simulate_op(b, seed);
            const auto wc = perc::simulate_op(c, seed), wd = perc::simulate_op(d, seed);
            auto subset = [](const std::vector<long>& small, const std::vector<long>& big) {
                return std::includes(big.begin(), big.end(), small.begin(), small.end());
            };
            for (std::size_t n = 0; n < wa.wet.size(); ++n) {
                pairs += 2;
                violations += !subset(wa.wet[n], wb.wet[n]);
                violations += !subset(wc.wet[n], wd.wet[n]);
            }
        }
    }
    return {est.frequency >= kSurvivalFloor && violations == 0,
            format("P(0 wet at level 400) = %.3f, 95%% Wilson [%.3f, %.3f]; %ld coupled wet-set comparisons "
                   "in gamma and p, %ld violations",
                   est.frequency, est.ci_lo, est.ci_hi, pairs, violations)};
}

Outcome hydrodynamics(const Options& opt) {
    const double period = 10.0, lambda = 3.0, t = 1.0;
    const int bins = 10;
    auto g = [&](double x) { return 0.5 + 0.3 * std::sin(2.0 * std::numbers::pi * x / period); };
    pde::ReactionSpec spec;
    spec.system = pde::System::Sys11;
    spec.lambda = lambda;
    spec.dim_d = 1;
    pde::Grid grid;
    grid.dim = 1;
    grid.nx = 1000;
    grid.dx = period / grid.nx;
    grid.bc = pde::Boundary::Periodic;
    auto field = pde::make_field(spec, grid);
    for (int i = 0; i < grid.nx; ++i) field.data[0][i] = g(grid.x(i));
    pde::RdStepper(spec, grid, pde::stability_limit(grid.dx, 1)).advance(field, t);
    std::vector<double> target(bins, 0.0);
    for (int i = 0; i < grid.nx; ++i) target[i * bins / grid.nx] += field.data[0][i] * bins / grid.nx;

    std::vector<double> dist;
    std::string detail = "sup distance to the PDE over 10 bins:";
    for (double eps : {0.2, 0.1, 0.05}) {
        ips::IpsParams p;
        p.lambda = lambda;
        p.rule = ips::BirthRule::G2;
        p.stirring = ips::Stirring::Individual;
        p.eps = eps;
        p.dim = 1;
        p.torus_side = static_cast<int>(std::lround(period / eps));
        std::vector<double> dens(p.torus_side);
        for (int i = 0; i < p.torus_side; ++i) dens[i] = g(i * eps);
        // equal samples per bin: sites per bin scale as 1/eps
        const int replicas = static_cast<int>(std::lround(8000.0 * eps));
        const auto occ = ips::mean_male_occupation(p, dens, dens, t, replicas, opt.seed, opt.threads);
        std::vector<double> b(bins, 0.0);
        for (int i = 0; i < p.torus_side; ++i) b[i * bins / p.torus_side] += occ[i] * bins / p.torus_side;
        double sup = 0.0;
        for (int k = 0; k < bins; ++k) sup = std::max(sup, std::abs(b[k] - target[k]));
        dist.push_back(sup);
        detail += format(" eps=%.2f: %.4f (%d replicas);", eps, sup, replicas);
    }
    const bool decreasing = dist[1] < dist[0] && dist[2] < dist[1];
    return {decreasing, detail};
}

Outcome heat_flow_checks(const Options&) {
    const double l = 0.31, L = 1.0, dx = l / 500.0;
    const auto pc = cstar::derive_profile_constants(44.0, 2.0, l);
    std::vector<double> s_values;
    for (int k = 1; k <= 20; ++k) s_values.push_back(kShoulderSMax * k / 20.0);
    const auto l44 = cstar::check_shoulder_gain(L, l, s_values, dx);
    const double largest = cstar::shoulder_gain_largest_s(L, l, dx, kShoulderSMax);
    bool l45 = true;
    double l45_worst = std::numeric_limits<double>::infinity();
    for (double s : s_values) {
        const auto r = cstar::check_lifted_dominance(pc.m, s, L, l, pc.delta1, pc.delta2, dx);
        l45 = l45 && r.pass;
        l45_worst = std::min(l45_worst, r.worst_margin);
    }
    return {l44.pass && l45,
            format("l=%.2f m=%.4f delta1=%.4f delta2=%.4f; shoulder gain: worst %.3g at x=%.5f s=%.2g, holds "
                   "for s <= %.3g only; dominance f-hat >= (1+delta2 s) f_s: %s (worst %.3g)",
                   l, pc.m, pc.delta1, pc.delta2, l44.worst_margin, l44.worst_x, l44.worst_s, largest,
                   l45 ? "holds" : "fails", l45_worst)};
}

struct Entry {
    const char* title;
    Outcome (*run)(const Options&);
};

const Entry kEntries[] = {
    {"critical lambda, individual stirring", critical_lambda_individual},
    {"critical lambda, lily-pad stirring", critical_lambda_lily_pad},
    {"condition (*) end to end", condition_star_end_to_end},
    {"comparison-field constant certificates", constant_certificates},
    {"simulator vs matrix exponential", ctmc_equivalence},
    {"coupled monotonicity", monotonicity},
    {"extinction below 1/|N|^2", extinction},
    {"oriented percolation substitute", oriented_percolation},
    {"hydrodynamic trend, individual stirring", hydrodynamics},
    {"heat-flow shoulder and dominance checks", heat_flow_checks},
};

}  // namespace

std::vector<int> criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::string criterion_title(int id) {
    if (id < 1 || id > 10) throw ConfigError("no acceptance criterion " + std::to_string(id));
    return kEntries[id - 1].title;
}

CriterionResult run_criterion(int id, const Options& opt) {
    CriterionResult r;
    r.id = id;
    r.title = criterion_title(id);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Outcome o = kEntries[id - 1].run(opt);
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string format_line(const CriterionResult& r) {
    return format("%s %2d  %s: ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str()) + r.detail +
           format(" (%.1f s)", r.seconds);
}

}  // namespace stirred::accept
