#include "stirred/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stirred/errors.hpp"

namespace stirred::cstar {

double bump_h(double x, double l) {
    if (x < -l) return 0.0;
    if (x <= 0.0) {
        const double t = (x + l) / l;
        return 0.5 * t * t;
    }
    if (x <= l) {
        const double t = (l - x) / l;
        return 1.0 - 0.5 * t * t;
    }
    return 1.0;
}

double bump_f0(double x, double L, double l) { return x < 0.0 ? bump_h(x + L, l) : bump_h(L - x, l); }

double bump_fs(double x, double L, double l, double shift) { return bump_f0(x, L + shift, l); }

namespace {

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct Piece {
    double a, b;       // support
    double p;          // expansion centre
    double c0, c1, c2; // value = c0 + c1 (X - p) + c2 (X - p)^2
};

}  // namespace

double heat_f0_exact(double x, double s, double L, double l) {
    if (!(s > 0.0)) return bump_f0(x, L, l);
    const double g = 0.5 / (l * l);
    const Piece pieces[] = {
        {-L - l, -L, -L - l, 0.0, 0.0, g},
        {-L, -L + l, -L + l, 1.0, 0.0, -g},
        {-L + l, L - l, 0.0, 1.0, 0.0, 0.0},
        {L - l, L, L - l, 1.0, 0.0, -g},
        {L, L + l, L + l, 0.0, 0.0, g},
    };
    const double sigma = std::sqrt(2.0 * s);
    double total = 0.0;
    for (const auto& pc : pieces) {
        const double za = (pc.a - x) / sigma;
        const double zb = (pc.b - x) / sigma;
        if (za > 40.0 || zb < -40.0) continue;
        const double i0 = big_phi(zb) - big_phi(za);
        const double i1 = phi(za) - phi(zb);
        const double i2 = i0 + za * phi(za) - zb * phi(zb);
        const double d = x - pc.p;
        total += pc.c0 * i0 + pc.c1 * (d * i0 + sigma * i1) +
                 pc.c2 * (d * d * i0 + 2.0 * d * sigma * i1 + sigma * sigma * i2);
    }
    return total;
}

std::vector<double> heat_step(const std::vector<double>& samples, double s, double dx) {
    if (!(s > 0.0)) throw ConfigError("heat_step needs s > 0");
    if (!(dx > 0.0) || dx > std::sqrt(s) / 10.0 * (1.0 + 1e-12))
        throw ConfigError("heat_step needs dx <= sqrt(s)/10");
    const double sigma = std::sqrt(2.0 * s);
    const auto half = static_cast<long>(std::ceil(8.0 * sigma / dx));
    std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
    double mass = 0.0;
    for (long j = -half; j <= half; ++j) {
        const double y = j * dx;
        const double w = std::exp(-y * y / (4.0 * s));
        kernel[static_cast<std::size_t>(j + half)] = w;
        mass += w;
    }
    // Symmetric summation order keeps the kernel exactly even.
    for (auto& w : kernel) w /= mass;

    const long n = static_cast<long>(samples.size());
    std::vector<double> out(samples.size(), 0.0);
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long j = -half; j <= half; ++j) {
            const long k = std::clamp(i - j, 0L, n - 1);
            acc += kernel[static_cast<std::size_t>(j + half)] * samples[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

namespace {

// Grid points k dx strictly inside (lo, hi).
template <class F>
void for_zone_points(double lo, double hi, double dx, F&& f) {
    const auto k0 = static_cast<long>(std::floor(lo / dx)) + 1;
    for (long k = k0; k * dx < hi; ++k)
        if (k * dx > lo) f(k * dx);
}

void note(ShoulderGainReport& r, double margin, double x, double s) {
    ++r.points;
    if (r.points == 1 || margin < r.worst_margin) {
        r.worst_margin = margin;
        r.worst_x = x;
        r.worst_s = s;
    }
    if (margin < 0.0) r.pass = false;
}

}  // namespace

ShoulderGainReport check_shoulder_gain(double L, double l, const std::vector<double>& s_values, double dx) {
    if (!(L > l && l > 0.0)) throw ConfigError("need L > l > 0");
    ShoulderGainReport r;
    for (double s : s_values) {
        if (!(s > 0.0)) throw ConfigError("s values must be positive");
        const double gain = s / (5.0 * l * l);
        auto check = [&](double x) {
            note(r, heat_f0_exact(x, s, L, l) - bump_f0(x, L, l) - gain, x, s);
        };
        for_zone_points(L + l / 200.0, L + l + s, dx, check);
        for_zone_points(-L - l - s, -L - l / 200.0, dx, check);
    }
    return r;
}

ShoulderGainReport check_shoulder_gain_discrete(double L, double l, const std::vector<double>& s_values, double dx) {
    if (!(L > l && l > 0.0)) throw ConfigError("need L > l > 0");
    ShoulderGainReport r;
    for (double s : s_values) {
        const double reach = L + l + 10.0 * std::sqrt(2.0 * s) + 2.0 * l;
        const auto half = static_cast<long>(std::ceil(reach / dx));
        std::vector<double> f(static_cast<std::size_t>(2 * half + 1));
        for (long k = -half; k <= half; ++k) f[static_cast<std::size_t>(k + half)] = bump_f0(k * dx, L, l);
        const auto g = heat_step(f, s, dx);
        const double gain = s / (5.0 * l * l);
        auto check = [&](double x) {
            const long k = std::lround(x / dx);
            const auto idx = static_cast<std::size_t>(k + half);
            note(r, g[idx] - f[idx] - gain, x, s);
        };
        for_zone_points(L + l / 200.0, L + l + s, dx, check);
        for_zone_points(-L - l - s, -L - l / 200.0, dx, check);
    }
    return r;
}

double shoulder_gain_largest_s(double L, double l, double dx, double s_cap) {
    auto holds_up_to = [&](double s) {
        std::vector<double> sweep;
        for (int i = 1; i <= 16; ++i) sweep.push_back(s * i / 16.0);
        return check_shoulder_gain(L, l, sweep, dx).pass;
    };
    if (holds_up_to(s_cap)) return s_cap;
    double lo = 0.0;
    double hi = s_cap;
    while (hi - lo > 1e-6 * hi) {
        const double mid = lo + 0.5 * (hi - lo);
        if (holds_up_to(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

LiftedDominanceReport check_lifted_dominance(double m, double s, double L, double l, double delta1, double delta2, double dx) {
    if (!(L > l && l > 0.0)) throw ConfigError("need L > l > 0");
    if (!(s > 0.0) || !(dx > 0.0)) throw ConfigError("need s > 0 and dx > 0");
    LiftedDominanceReport r;
    const double edge = L + l + s;
    const auto half = static_cast<long>(std::ceil((edge + 2.0 * l) / dx));
    for (long k = -half; k <= half; ++k) {
        const double x = k * dx;
        const double fhat = std::abs(x) < edge ? bump_f0(x, L, l) + m * s : 0.0;
        const double margin = fhat - (1.0 + delta2 * s) * bump_fs(x, L, l, delta1 * s);
        ++r.points;
        if (r.points == 1 || margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_x = x;
        }
        if (margin < 0.0) r.pass = false;
    }
    return r;
}

std::pair<double, double> shoulder_width_interval(double K1, double K2) {
    if (!(K1 > 0.0 && K2 > 0.0)) throw ConfigError("K1 and K2 must be positive");
    const double r = (200.0 / 199.0) * (200.0 / 199.0);
    return {std::sqrt(r * 4.02 / K1), std::sqrt(1.0 / (5.05 * K2))};
}

ProfileConstants derive_profile_constants(double K1, double K2, double l) {
    ProfileConstants pc;
    const auto [lmin, lmax] = shoulder_width_interval(K1, K2);
    pc.l_min = lmin;
    pc.l_max = lmax;
    if (!(lmin < lmax)) throw ConfigError("K1/K2 leaves no admissible shoulder width");
    if (!(l > lmin && l < lmax)) throw ConfigError("shoulder width outside the admissible interval");
    pc.l = l;
    const double q = (199.0 / 200.0) * (199.0 / 200.0);
    pc.m_bound_gain = 0.5 * K1 * q - 2.01 / (l * l);
    pc.m_bound_shoulder = 1.0 / (5.0 * l * l) - 1.01 * K2;
    pc.m = std::max({pc.m_bound_gain, pc.m_bound_shoulder, 0.0});
    if (!(pc.m > 0.0)) throw ConfigError("no positive m satisfies both lower bounds");
    pc.delta1 = pc.m * l / 4.0;
    pc.delta2 = pc.m / 2.0;
    return pc;
}

}  // namespace stirred::cstar
