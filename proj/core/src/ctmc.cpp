#include "stirred/ctmc.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "stirred/errors.hpp"

namespace stirred::ips {

std::size_t state_index(const Config& config) {
    std::size_t idx = 0;
    for (std::size_t i = config.size(); i-- > 0;) idx = idx * 4 + config[i];
    return idx;
}

Config state_from_index(std::size_t index, int sites) {
    Config c(static_cast<std::size_t>(sites));
    for (auto& v : c) {
        v = static_cast<std::uint8_t>(index % 4);
        index /= 4;
    }
    return c;
}

namespace {

std::size_t checked_states(std::size_t base, int sites) {
    std::size_t n = 1;
    for (int i = 0; i < sites; ++i) {
        n *= base;
        if (n > kMaxDenseStates)
            throw StateSpaceTooLarge("state space exceeds " + std::to_string(kMaxDenseStates) + " states");
    }
    return n;
}

void fill_diagonal(Eigen::MatrixXd& q) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        q(i, i) = 0.0;
        q(i, i) = -q.row(i).sum();
    }
}

}  // namespace

Eigen::MatrixXd exact_generator_matrix(const IpsParams& params) {
    params.validate();
    const Torus torus(params.dim, params.torus_side);
    const std::size_t n = checked_states(4, torus.sites());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<Transition> ts;
    for (std::size_t a = 0; a < n; ++a) {
        const Config c = state_from_index(a, torus.sites());
        enumerate_transitions(params, torus, c, ts);
        for (const auto& t : ts) {
            Config d = c;
            apply_transition(d, t);
            q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(state_index(d))) += t.rate;
        }
    }
    fill_diagonal(q);
    return q;
}

std::size_t project_zeta(std::size_t index, int sites) {
    std::size_t out = 0;
    std::size_t w = 1;
    for (int i = 0; i < sites; ++i) {
        const auto code = index % 4;
        index /= 4;
        out += w * static_cast<std::size_t>((code & 1u) + ((code >> 1) & 1u));
        w *= 3;
    }
    return out;
}

Eigen::MatrixXd zeta_generator_matrix(const IpsParams& params) {
    params.validate();
    if (params.rule != BirthRule::G2 || params.stirring == Stirring::Individual)
        throw ConfigError("the zeta chain is defined for G2 births with lily-pad or no stirring");
    const Torus torus(params.dim, params.torus_side);
    const int sites = torus.sites();
    const std::size_t n = checked_states(3, sites);
    std::vector<std::size_t> pow3(static_cast<std::size_t>(sites) + 1, 1);
    for (int i = 1; i <= sites; ++i) pow3[i] = pow3[i - 1] * 3;

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::uint8_t> z(static_cast<std::size_t>(sites));
    for (std::size_t a = 0; a < n; ++a) {
        std::size_t r = a;
        for (auto& v : z) {
            v = static_cast<std::uint8_t>(r % 3);
            r /= 3;
        }
        const auto row = static_cast<Eigen::Index>(a);
        for (int x = 0; x < sites; ++x) {
            const ZetaRates zr = zeta_rates(torus, z, x, params.lambda);
            const auto up = static_cast<Eigen::Index>(a + pow3[x]);
            const auto down = static_cast<Eigen::Index>(a - (z[x] > 0 ? pow3[x] : 0));
            if (zr.zero_to_one > 0) q(row, up) += zr.zero_to_one;
            if (zr.one_to_two > 0) q(row, up) += zr.one_to_two;
            if (zr.one_to_zero > 0) q(row, down) += zr.one_to_zero;
            if (zr.two_to_one > 0) q(row, down) += zr.two_to_one;
        }
        if (params.stirring == Stirring::LilyPad) {
            for (const auto& b : torus.bonds()) {
                if (z[b.a] == z[b.b]) continue;
                const std::size_t to = a - z[b.a] * pow3[b.a] - z[b.b] * pow3[b.b] + z[b.b] * pow3[b.a] +
                                       z[b.a] * pow3[b.b];
                q(row, static_cast<Eigen::Index>(to)) += params.stir_rate();
            }
        }
    }
    fill_diagonal(q);
    return q;
}

Eigen::VectorXd transition_distribution(const Eigen::MatrixXd& q, std::size_t start, double t) {
    const Eigen::MatrixXd p = (q * t).exp();
    return p.row(static_cast<Eigen::Index>(start)).transpose();
}

LumpabilityReport zeta_lumpability(const IpsParams& params, double t) {
    const Eigen::MatrixXd q = exact_generator_matrix(params);
    const Eigen::MatrixXd qz = zeta_generator_matrix(params);
    const int sites = params.dim == 1 ? params.torus_side : params.torus_side * params.torus_side;
    const Eigen::MatrixXd p = (q * t).exp();
    const Eigen::MatrixXd pz = (qz * t).exp();

    // Collapse columns by projection; lumpability means each row of the
    // collapsed matrix equals the zeta row of its projected state.
    const Eigen::Index n = q.rows();
    const Eigen::Index nz = qz.rows();
    Eigen::MatrixXd lump = Eigen::MatrixXd::Zero(n, nz);
    for (Eigen::Index b = 0; b < n; ++b)
        lump(b, static_cast<Eigen::Index>(project_zeta(static_cast<std::size_t>(b), sites))) = 1.0;
    const Eigen::MatrixXd qc = q * lump;
    const Eigen::MatrixXd pc = p * lump;

    LumpabilityReport rep;
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto za = static_cast<Eigen::Index>(project_zeta(static_cast<std::size_t>(a), sites));
        rep.generator_max_diff = std::max(rep.generator_max_diff, (qc.row(a) - qz.row(za)).cwiseAbs().maxCoeff());
        rep.expm_max_diff = std::max(rep.expm_max_diff, (pc.row(a) - pz.row(za)).cwiseAbs().maxCoeff());
    }
    return rep;
}

std::vector<double> mc_distribution(const IpsParams& params, const Config& initial, double t, int replicas,
                                    std::uint64_t seed, int threads) {
    params.validate();
    if (replicas < 1) throw ConfigError("replicas must be positive");
    const Torus torus(params.dim, params.torus_side);
    const std::size_t n = checked_states(4, torus.sites());
    std::vector<std::size_t> final_state(static_cast<std::size_t>(replicas));

    auto worker = [&](int first, int stride) {
        Simulator sim(params, initial, seed, static_cast<std::uint64_t>(first));
        for (int r = first; r < replicas; r += stride) {
            sim.reset(initial, seed, static_cast<std::uint64_t>(r));
            while (sim.step(t) == Simulator::StepResult::Event) {
            }
            final_state[static_cast<std::size_t>(r)] = state_index(sim.config());
        }
    };
    const int nthreads = std::max(1, std::min(threads, replicas));
    if (nthreads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker, k, nthreads);
        for (auto& th : pool) th.join();
    }
    std::vector<double> hist(n, 0.0);
    for (auto s : final_state) hist[s] += 1.0;
    for (auto& h : hist) h /= replicas;
    return hist;
}

double total_variation(const std::vector<double>& p, const Eigen::VectorXd& q) {
    if (p.size() != static_cast<std::size_t>(q.size())) throw ConfigError("distribution sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q(static_cast<Eigen::Index>(i)));
    return 0.5 * s;
}

JumpTest jump_frequency_test(const IpsParams& params, const Config& from, int sojourns, std::uint64_t seed) {
    const Eigen::MatrixXd q = exact_generator_matrix(params);
    const auto a = static_cast<Eigen::Index>(state_index(from));
    JumpTest out;
    out.exit_rate = -q(a, a);
    if (!(out.exit_rate > 0.0)) throw ConfigError("state is absorbing; no jumps to test");
    std::vector<long> counts(static_cast<std::size_t>(q.cols()), 0);
    Simulator sim(params, from, seed, 0);
    double hold = 0.0;
    for (int k = 0; k < sojourns; ++k) {
        sim.reset(from, seed, static_cast<std::uint64_t>(k));
        sim.step(std::numeric_limits<double>::infinity());
        hold += sim.time();
        ++counts[state_index(sim.config())];
    }
    out.mean_holding = hold / sojourns;
    for (Eigen::Index b = 0; b < q.cols(); ++b) {
        if (b == a || q(a, b) <= 0.0) {
            if (b != a && counts[static_cast<std::size_t>(b)] > 0)
                throw InvariantViolation("simulator jumped along a zero-rate transition");
            continue;
        }
        const double pexp = q(a, b) / out.exit_rate;
        const double e = pexp * sojourns;
        const double o = static_cast<double>(counts[static_cast<std::size_t>(b)]);
        out.targets.push_back(static_cast<std::size_t>(b));
        out.expected_prob.push_back(pexp);
        out.observed.push_back(counts[static_cast<std::size_t>(b)]);
        out.chi_square += (o - e) * (o - e) / e;
    }
    out.dof = static_cast<int>(out.targets.size()) - 1;
    if (out.dof > 0) {
        boost::math::chi_squared dist(out.dof);
        out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
    }
    return out;
}

}  // namespace stirred::ips
