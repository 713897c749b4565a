#include "stirred/critical.hpp"

#include <algorithm>
#include <cmath>

#include "stirred/errors.hpp"
#include "stirred/profile.hpp"

namespace stirred::critical {

void SearchGrid::validate() const {
    if (!(dx > 0.0) || !(half_width > 0.0)) throw ConfigError("dx and half_width must be positive");
    if (half_width < 2.0 * (bump_L + bump_l)) throw ConfigError("domain too small for the bump");
    if (!(horizon > 0.0) || !(sample_dt > 0.0)) throw ConfigError("horizon and sample_dt must be positive");
    if (max_extensions < 0) throw ConfigError("max_extensions must be >= 0");
    if (radial_dim != 0 && (radial_dim < 2 || radial_dim > 3)) throw ConfigError("radial dimension must be 2 or 3");
    if (dt < 0.0 || dt > pde::stability_limit(dx, radial_dim > 0 ? radial_dim : 1))
        throw ConfigError("dt exceeds the stability limit");
    if (!(bump_l > 0.0) || !(bump_L > 0.0)) throw ConfigError("bump sizes must be positive");
    if (!(extinction_threshold > 0.0)) throw ConfigError("extinction threshold must be positive");
    if (!(escape_fraction > 0.0 && escape_fraction <= 1.0)) throw ConfigError("escape fraction must lie in (0, 1]");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Survives: return "survives";
        case Verdict::Dies: return "dies";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

namespace {

bool four_state(pde::System s) {
    return s == pde::System::Sys9 || s == pde::System::Sys12 || s == pde::System::Sys12WithDeaths;
}

}  // namespace

Monitor monitor_for(const pde::ReactionSpec& spec) {
    using pde::System;
    spec.validate();
    Monitor m;
    switch (spec.system) {
        case System::Sys11: {
            if (spec.beta() >= 4.0) {
                const auto [r1, r0] = pde::sys11_roots(spec.beta());
                m.threshold = 0.5 * (r1 + r0);
            } else {
                m.threshold = 0.45;
            }
            return m;
        }
        case System::Sys10: {
            m.component = 1;
            const auto fps = pde::sys10_fixed_points(spec.c());
            m.threshold = fps.size() == 2 ? 0.5 * (fps[0].second + fps[1].second) : 0.25;
            return m;
        }
        case System::Heat: m.threshold = 0.45; return m;
        default: break;
    }
    if (four_state(spec.system)) m.component = 3;
    const auto eq = pde::occupied_equilibrium(spec);
    m.threshold = eq ? 0.5 * (*eq)[m.component] : 0.45;
    return m;
}

std::vector<std::vector<double>> bump_initial_data(const pde::ReactionSpec& spec, const SearchGrid& grid) {
    grid.validate();
    const int n = spec.components();
    const auto nx = static_cast<std::size_t>(std::floor(grid.half_width / grid.dx + 1e-9)) + 1;
    std::vector<double> top(n, 0.0);
    std::vector<double> base(n, 0.0);
    if (four_state(spec.system)) base[0] = 1.0;
    std::optional<std::vector<double>> eq;
    if (spec.system == pde::System::Sys10) {
        const auto fps = pde::sys10_fixed_points(spec.c());
        if (fps.size() == 2) eq = std::vector<double>{fps[1].first, fps[1].second};
    } else if (spec.system != pde::System::Heat) {
        eq = pde::occupied_equilibrium(spec);
    }
    if (eq) {
        top = *eq;
    } else if (four_state(spec.system)) {
        top = {0.0, 0.0, 0.0, 1.0};
    } else {
        std::fill(top.begin(), top.end(), 1.0);
    }
    std::vector<std::vector<double>> data(n, std::vector<double>(nx, 0.0));
    for (std::size_t i = 0; i < nx; ++i) {
        const double f = cstar::bump_f0(i * grid.dx, grid.bump_L, grid.bump_l);
        for (int k = 0; k < n; ++k) data[k][i] = f * 0.9 * top[k] + (1.0 - 0.9 * f) * base[k];
    }
    return data;
}

double front_position(const std::vector<double>& values, double dx, double threshold) {
    for (std::size_t i = values.size(); i-- > 0;) {
        if (values[i] >= threshold) {
            if (i + 1 == values.size()) return i * dx;
            const double a = values[i];
            const double b = values[i + 1];
            return (i + (a - threshold) / (a - b)) * dx;
        }
    }
    return -1.0;
}

SurvivalVerdict classify_survival(const pde::ReactionSpec& spec, const SearchGrid& grid) {
    grid.validate();
    spec.validate();
    const Monitor mon = monitor_for(spec);
    pde::Grid mesh;
    mesh.dim = 1;
    mesh.dx = grid.dx;
    mesh.bc = pde::Boundary::Neumann;
    mesh.radial_dim = grid.radial_dim;
    auto init = bump_initial_data(spec, grid);
    mesh.nx = static_cast<int>(init[0].size());
    pde::PdeField field = pde::make_field(spec, mesh);
    field.data = std::move(init);

    const double dt_max = grid.dt > 0.0 ? grid.dt : pde::stability_limit(grid.dx, mesh.stencil_dim());
    const auto sub = static_cast<long>(std::ceil(grid.sample_dt / dt_max - 1e-9));
    pde::RdStepper stepper(spec, mesh, grid.sample_dt / sub);
    const double escape = grid.escape_fraction * (mesh.nx - 1) * grid.dx;

    SurvivalVerdict out;
    out.lambda = spec.lambda;
    out.threshold = mon.threshold;
    const auto& watched = field.data[mon.component];
    auto sup = [&] { return *std::max_element(watched.begin(), watched.end()); };
    out.times.push_back(0.0);
    out.front_positions.push_back(front_position(watched, grid.dx, mon.threshold));

    long sample = 0;
    double checkpoint = grid.horizon;
    int extensions = 0;
    for (;;) {
        for (long k = 0; k < sub; ++k) stepper.step(field);
        ++sample;
        const double t = sample * grid.sample_dt;
        const double front = front_position(watched, grid.dx, mon.threshold);
        out.times.push_back(t);
        out.front_positions.push_back(front);
        out.t_used = t;
        out.sup_norm = sup();
        if (out.sup_norm < grid.extinction_threshold) {
            out.verdict = Verdict::Dies;
            return out;
        }
        if (front >= escape) {
            out.verdict = Verdict::Survives;
            return out;
        }
        if (t + 1e-9 < checkpoint) continue;

        const std::size_t half = out.front_positions.size() / 2;
        bool increasing = true;
        for (std::size_t i = half + 1; i < out.front_positions.size(); ++i)
            if (!(out.front_positions[i] > out.front_positions[i - 1])) increasing = false;
        const double moved = out.front_positions.back() - out.front_positions[half];
        if (increasing && moved >= 2.0 * grid.dx) {
            out.verdict = Verdict::Survives;
            return out;
        }
        if (extensions == grid.max_extensions) {
            out.verdict = Verdict::Undecided;
            return out;
        }
        ++extensions;
        checkpoint *= 2.0;
    }
}

LambdaBracket bisect_lambda_c(const pde::ReactionSpec& spec, double lo0, double hi0, double target_width,
                              const SearchGrid& grid) {
    if (!(lo0 < hi0)) throw ConfigError("bisection needs lo < hi");
    if (!(target_width > 0.0)) throw ConfigError("target width must be positive");
    LambdaBracket br;
    auto probe = [&](double lambda) {
        pde::ReactionSpec s = spec;
        s.lambda = lambda;
        br.probes.push_back(classify_survival(s, grid));
        return br.probes.back();
    };
    br.lo_verdict = probe(lo0);
    br.hi_verdict = probe(hi0);
    br.lo = lo0;
    br.hi = hi0;
    br.transcript.push_back({0, lo0, br.lo_verdict.verdict, lo0, hi0, br.lo_verdict.t_used});
    br.transcript.push_back({0, hi0, br.hi_verdict.verdict, lo0, hi0, br.hi_verdict.t_used});
    if (br.lo_verdict.verdict != Verdict::Dies || br.hi_verdict.verdict != Verdict::Survives)
        throw BracketInvalid("initial bracket verdicts are " + std::string(to_string(br.lo_verdict.verdict)) +
                             " at lo and " + to_string(br.hi_verdict.verdict) + " at hi");
    int iteration = 0;
    while (br.width() > target_width) {
        ++iteration;
        const double mid = br.lo + (br.hi - br.lo) / 2.0;
        const SurvivalVerdict v = probe(mid);
        if (v.verdict == Verdict::Undecided) {
            br.transcript.push_back({iteration, mid, v.verdict, br.lo, br.hi, v.t_used});
            return br;
        }
        if (v.verdict == Verdict::Survives) {
            br.hi = mid;
            br.hi_verdict = v;
        } else {
            br.lo = mid;
            br.lo_verdict = v;
        }
        br.transcript.push_back({iteration, mid, v.verdict, br.lo, br.hi, v.t_used});
    }
    br.converged = true;
    return br;
}

}  // namespace stirred::critical
