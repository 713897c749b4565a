#include "stirred/coupling.hpp"

#include <algorithm>
#include <string>

#include "stirred/errors.hpp"
#include "stirred/rng.hpp"

namespace stirred::ips {

namespace {

int rule_rank(BirthRule r) {
    switch (r) {
        case BirthRule::G2: return 0;
        case BirthRule::G1: return 1;
        case BirthRule::Decoupled: return 2;
    }
    return 0;
}

}  // namespace

bool ordered(const Config& lower, const Config& upper) {
    if (lower.size() != upper.size()) return false;
    for (std::size_t x = 0; x < lower.size(); ++x)
        if (!site_leq(lower[x], upper[x])) return false;
    return true;
}

CoupledPair run_coupled(CoupledPair pair, const IpsParams& lo, const IpsParams& hi, double t_end) {
    lo.validate();
    hi.validate();
    if (lo.dim != hi.dim || lo.torus_side != hi.torus_side || lo.stirring != hi.stirring ||
        (lo.stirring != Stirring::None && lo.eps != hi.eps))
        throw ConfigError("coupled runs need identical geometry and stirring");
    if (lo.lambda > hi.lambda || rule_rank(lo.rule) > rule_rank(hi.rule))
        throw ConfigError("upper parameters must dominate the lower ones");

    const Torus torus(lo.dim, lo.torus_side);
    const auto n = static_cast<std::size_t>(torus.sites());
    if (pair.lower.size() != n || pair.upper.size() != n)
        throw ConfigError("coupled configurations do not match the torus size");
    if (!ordered(pair.lower, pair.upper)) throw ConfigError("coupled pair is not ordered initially");
    if (t_end < pair.time) throw ConfigError("t_end must not precede the current time");

    // Deaths read the bottom of the mark range and births the top, so a
    // nest that is empty below and occupied above can never flip in both
    // copies at once. That needs c* >= max birth rate + delta.
    const double cstar = std::max(max_nest_rate(lo.rule, lo.lambda, torus.neighbourhood_size()),
                                  max_nest_rate(hi.rule, hi.lambda, torus.neighbourhood_size())) +
                         IpsParams::delta;
    const double nest_total = 2.0 * static_cast<double>(n) * cstar;
    const int stir_marks = lo.stirring == Stirring::Individual ? 2 : 1;
    const double sr = lo.stir_rate();
    const auto& bonds = torus.bonds();
    const double stir_total = lo.stirring == Stirring::None ? 0.0 : sr * stir_marks * bonds.size();
    const double total = nest_total + stir_total;

    Rng rng(pair.shared_clock_seed, 0xc0u);
    auto check = [&](int x) {
        if (!site_leq(pair.lower[x], pair.upper[x]))
            throw CouplingViolation("coupling order broken at site " + std::to_string(x) + " at time " +
                                    std::to_string(pair.time));
    };

    while (true) {
        const double dt = rng.exponential(total);
        if (pair.time + dt > t_end) break;
        pair.time += dt;
        ++pair.clock_rings;
        const double pick = rng.uniform() * total;
        const double u = rng.uniform_open0();
        if (pick < nest_total) {
            const auto idx = std::min(static_cast<std::size_t>(pick / cstar), 2 * n - 1);
            const int x = static_cast<int>(idx / 2);
            const int m = static_cast<int>(idx % 2) + 1;
            // Both copies read their rates before either is modified.
            const double mark = u * cstar;
            auto flips = [&](const Config& c, const IpsParams& p) {
                if (nest(c[x], m)) return mark <= IpsParams::delta;
                const double r = birth_rate(p.rule, torus, c, x, m, p.lambda);
                return r > 0.0 && mark > cstar - r;
            };
            const bool fl = flips(pair.lower, lo);
            const bool fh = flips(pair.upper, hi);
            const auto bit = static_cast<std::uint8_t>(1u << (m - 1));
            if (fl) pair.lower[x] ^= bit;
            if (fh) pair.upper[x] ^= bit;
            check(x);
        } else {
            const auto k = std::min(static_cast<std::size_t>((pick - nest_total) / sr),
                                    bonds.size() * stir_marks - 1);
            const auto& bond = bonds[k / stir_marks];
            Transition t{lo.stirring == Stirring::LilyPad ? Transition::Kind::LilyPadSwap
                                                          : Transition::Kind::IndividualSwap,
                         bond.a, bond.b, static_cast<int>(k % stir_marks) + 1, sr};
            apply_transition(pair.lower, t);
            apply_transition(pair.upper, t);
            check(bond.a);
            check(bond.b);
        }
    }
    pair.time = t_end;
    if (!ordered(pair.lower, pair.upper)) throw CouplingViolation("coupling order broken at t_end");
    return pair;
}

}  // namespace stirred::ips
