#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "stirred/acceptance.hpp"
#include "stirred/condition_star.hpp"
#include "stirred/critical.hpp"
#include "stirred/csv.hpp"
#include "stirred/errors.hpp"
#include "stirred/ips.hpp"
#include "stirred/percolation.hpp"
#include "stirred/svg.hpp"

namespace stirred::cli {

namespace {

const char* kVersion = "0.1.0";

using io::ConfigMap;
using io::CsvTable;
using io::fmt;
using io::KeySpec;

/// Files produced by a command, written only after the computation finished.
struct Output {
    std::vector<std::pair<std::string, std::string>> files;  // name, contents
    std::string summary;
    int exit_code = kExitOk;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;
    /// Build parameters and throw ConfigError on bad values; no computation.
    std::function<void(const ConfigMap&)> validate;
    std::function<Output(const ConfigMap&)> run;
};

ips::BirthRule parse_rule(const std::string& s) {
    if (s == "g1") return ips::BirthRule::G1;
    if (s == "g2") return ips::BirthRule::G2;
    if (s == "decoupled") return ips::BirthRule::Decoupled;
    throw ConfigError("rule must be g1, g2 or decoupled, got '" + s + "'");
}

ips::Stirring parse_stirring(const std::string& s) {
    if (s == "none") return ips::Stirring::None;
    if (s == "lily-pad") return ips::Stirring::LilyPad;
    if (s == "individual") return ips::Stirring::Individual;
    throw ConfigError("stirring must be none, lily-pad or individual, got '" + s + "'");
}

ips::IpsParams ips_params(const ConfigMap& c) {
    ips::IpsParams p;
    p.lambda = c.num("lambda");
    p.rule = parse_rule(c.str("rule"));
    p.stirring = parse_stirring(c.str("stirring"));
    p.eps = c.num("eps");
    p.dim = static_cast<int>(c.integer("dim"));
    p.torus_side = static_cast<int>(c.integer("side"));
    p.validate();
    if (c.num("t_end") <= 0.0) throw ConfigError("t_end must be positive");
    if (c.integer("replicas") < 1) throw ConfigError("replicas must be at least 1");
    if (c.integer("samples") < 2) throw ConfigError("samples must be at least 2");
    const double dens = c.num("density");
    if (!(dens >= 0.0 && dens <= 1.0)) throw ConfigError("density must lie in [0, 1]");
    if (c.str("init") != "full" && c.str("init") != "random") throw ConfigError("init must be full or random");
    return p;
}

Output run_simulate_ips(const ConfigMap& c) {
    const auto p = ips_params(c);
    const ips::Torus torus(p.dim, p.torus_side);
    const long replicas = c.integer("replicas");
    const int samples = static_cast<int>(c.integer("samples"));
    const double t_end = c.num("t_end");
    const std::uint64_t seed = c.u64("seed");
    std::vector<double> times, any(samples, 0.0), both(samples, 0.0);
    for (long r = 0; r < replicas; ++r) {
        ips::Config init;
        if (c.str("init") == "full") {
            init = ips::full_config(torus);
        } else {
            Rng rng(mix_seed(seed, 0x1d), static_cast<std::uint64_t>(r));
            const std::vector<double> dens(torus.sites(), c.num("density"));
            init = ips::random_config(torus, dens, dens, rng);
        }
        ips::Simulator sim(p, std::move(init), seed, static_cast<std::uint64_t>(r));
        const auto trace = sim.run_until(t_end, samples);
        if (times.empty())
            for (const auto& s : trace) times.push_back(s.time);
        for (int k = 0; k < samples; ++k) {
            any[k] += trace[k].density_any / replicas;
            both[k] += trace[k].density_both / replicas;
        }
    }
    CsvTable t{{"time", "density_any", "density_both"}, {}};
    for (int k = 0; k < samples; ++k) t.add({fmt(times[k]), fmt(any[k]), fmt(both[k])});
    const auto svg = io::svg_line_plot({{"occupied sites", times, any}, {"sites with both sexes", times, both}},
                                       "mean densities over " + std::to_string(replicas) + " replicas", "time",
                                       "density");
    return {{{"ips_density.csv", t.str()}, {"ips_density.svg", svg}},
            "final density_any " + fmt(any.back()) + ", density_both " + fmt(both.back()),
            kExitOk};
}

/// Rate multiplier for Sys11 / Contact: "default", "g-i" (2d),
/// "g-tilde-i" (2d(2d+1)) or a number.
double parse_coeff(const std::string& s, int d) {
    if (s == "default" || s == "g-i") return 2.0 * d;
    if (s == "g-tilde-i") return 2.0 * d * (2.0 * d + 1.0);
    std::istringstream in(s);
    double v = 0.0;
    if (!(in >> v) || !in.eof() || !(v > 0.0)) throw ConfigError("coeff must be g-i, g-tilde-i or a positive number");
    return v;
}

pde::ReactionSpec reaction_spec(const ConfigMap& c) {
    pde::ReactionSpec s;
    s.system = pde::parse_system(c.str("system"));
    s.dim_d = static_cast<int>(c.integer("d"));
    s.beta_coeff = parse_coeff(c.str("coeff"), s.dim_d);
    if (c.has("lambda")) s.lambda = c.num("lambda");
    s.validate();
    return s;
}

critical::SearchGrid search_grid(const ConfigMap& c, const pde::ReactionSpec& spec) {
    critical::SearchGrid g;
    g.dx = c.num("dx");
    g.half_width = c.num("half_width");
    g.horizon = c.num("horizon");
    g.bump_L = c.num("bump_L");
    g.bump_l = c.num("bump_l");
    const std::string radial = c.str("radial_dim");
    if (radial == "auto") {
        const bool lily = spec.system == pde::System::Sys10 || spec.system == pde::System::Sys9 ||
                          spec.system == pde::System::Sys12 || spec.system == pde::System::Sys12WithDeaths;
        g.radial_dim = lily ? spec.dim_d : 0;
        if (g.radial_dim == 1) g.radial_dim = 0;
    } else {
        g.radial_dim = static_cast<int>(c.integer("radial_dim"));
    }
    g.validate();
    return g;
}

std::vector<KeySpec> grid_keys() {
    return {{"dx", "0.2", false, "mesh spacing"},
            {"half_width", "240", false, "simulated half-line length"},
            {"horizon", "200", false, "initial run length per probe"},
            {"bump_L", "5", false, "bump plateau half-width"},
            {"bump_l", "1", false, "bump shoulder width"},
            {"radial_dim", "auto", false, "0 planar, 2 or 3 radial; auto picks d for lily-pad systems"}};
}

Output run_solve_pde(const ConfigMap& c) {
    const auto spec = reaction_spec(c);
    const auto sg = search_grid(c, spec);
    const double t_end = c.num("t_end");
    const int snapshots = static_cast<int>(c.integer("snapshots"));
    pde::Grid grid;
    grid.dim = 1;
    grid.dx = sg.dx;
    grid.nx = static_cast<int>(std::lround(sg.half_width / sg.dx)) + 1;
    grid.radial_dim = sg.radial_dim;
    auto field = pde::make_field(spec, grid);
    field.data = critical::bump_initial_data(spec, sg);
    pde::RdStepper stepper(spec, grid, pde::stability_limit(grid.dx, grid.stencil_dim()));
    const auto monitor = critical::monitor_for(spec);
    std::vector<double> xs(grid.nx);
    for (int i = 0; i < grid.nx; ++i) xs[i] = grid.x(i);
    std::vector<io::Series> profiles;
    CsvTable fronts{{"time", "sup", "front"}, {}};
    auto record = [&](double t) {
        const auto& u = field.data[monitor.component];
        fronts.add({fmt(t), fmt(*std::max_element(u.begin(), u.end())),
                    fmt(critical::front_position(u, grid.dx, monitor.threshold))});
        profiles.push_back({"t=" + fmt(t), xs, u});
    };
    record(0.0);
    for (int k = 1; k <= snapshots; ++k) {
        stepper.advance(field, t_end / snapshots);
        record(t_end * k / snapshots);
    }
    std::vector<std::string> header{"x"};
    for (const auto& n : field.names) header.push_back(n);
    CsvTable prof{header, {}};
    for (int i = 0; i < grid.nx; ++i) {
        std::vector<std::string> row{fmt(xs[i])};
        for (const auto& comp : field.data) row.push_back(fmt(comp[i]));
        prof.add(std::move(row));
    }
    const auto svg = io::svg_line_plot(profiles,
                                       std::string(pde::to_string(spec.system)) + " at lambda " + fmt(spec.lambda),
                                       sg.radial_dim ? "radius" : "x", field.names[monitor.component]);
    return {{{"pde_profile.csv", prof.str()}, {"pde_fronts.csv", fronts.str()}, {"pde_profiles.svg", svg}},
            "front at t=" + fmt(t_end) + ": " + fronts.rows.back()[2],
            kExitOk};
}

/// Default bracket for the systems with a known critical value.
std::pair<double, double> default_bracket(const pde::ReactionSpec& spec) {
    switch (spec.system) {
        case pde::System::Sys11: {
            const double bc = 4.5;
            const double centre = bc / spec.beta_coeff;
            return {centre * 0.89, centre * 1.15};
        }
        case pde::System::Sys10: return {1.0, 1.3};
        case pde::System::Sys12WithDeaths: return {0.25, 0.3};
        case pde::System::Contact: return {0.5 / spec.beta_coeff, 2.0 / spec.beta_coeff};
        default: throw ConfigError("no default bracket for " + std::string(pde::to_string(spec.system)) +
                                   "; set lo and hi");
    }
}

struct LambdaSearch {
    pde::ReactionSpec spec;
    critical::SearchGrid grid;
    double lo, hi, width;
};

LambdaSearch lambda_search(const ConfigMap& c) {
    LambdaSearch s{reaction_spec(c), {}, 0, 0, c.num("width")};
    s.grid = search_grid(c, s.spec);
    if (c.str("lo") == "auto" || c.str("hi") == "auto") {
        const auto [lo, hi] = default_bracket(s.spec);
        s.lo = lo;
        s.hi = hi;
    }
    if (c.str("lo") != "auto") s.lo = c.num("lo");
    if (c.str("hi") != "auto") s.hi = c.num("hi");
    if (!(s.lo > 0.0 && s.lo < s.hi)) throw ConfigError("need 0 < lo < hi");
    if (!(s.width > 0.0)) throw ConfigError("width must be positive");
    return s;
}

Output run_find_lambda_c(const ConfigMap& c) {
    const auto s = lambda_search(c);
    const auto b = critical::bisect_lambda_c(s.spec, s.lo, s.hi, s.width, s.grid);
    CsvTable t{{"iteration", "lambda", "verdict", "lo", "hi", "t_used"}, {}};
    for (const auto& st : b.transcript)
        t.add({fmt(st.iteration), fmt(st.lambda), critical::to_string(st.verdict), fmt(st.lo), fmt(st.hi),
               fmt(st.t_used)});
    std::vector<io::Series> fronts;
    for (const auto& p : b.probes) {
        io::Series ser{"lambda=" + fmt(p.lambda) + " " + critical::to_string(p.verdict), {}, {}};
        for (std::size_t k = 0; k < p.times.size(); ++k) {
            if (p.front_positions[k] < 0.0) continue;
            ser.x.push_back(p.times[k]);
            ser.y.push_back(p.front_positions[k]);
        }
        fronts.push_back(std::move(ser));
    }
    const auto svg = io::svg_line_plot(fronts, "front position per probe", "time",
                                       s.grid.radial_dim ? "front radius" : "front position");
    std::string summary = "lambda_c in [" + fmt(b.lo) + ", " + fmt(b.hi) + "]";
    if (!b.converged) summary += " (stopped early on an undecided probe)";
    return {{{"lambda_c_transcript.csv", t.str()}, {"lambda_c_fronts.svg", svg}}, summary,
            b.converged ? kExitOk : kExitFailed};
}

cstar::ConditionStarParams star_params(const ConfigMap& c) {
    cstar::ConditionStarParams p;
    p.c = c.num("c");
    p.D1 = c.num("D1");
    p.d1 = c.num("d1");
    p.d2 = c.num("d2");
    p.D2 = c.num("D2");
    p.M = c.num("M");
    p.T = c.num("T");
    p.dx = c.num("dx");
    p.t_max = c.num("t_max");
    p.upper_window = c.num("upper_window");
    if (!(p.c > 0.0)) throw ConfigError("c must be positive");
    if (!(p.D1 > 0.0 && p.D1 < 1.0 && p.M > 0.0 && p.t_max > 0.0)) throw ConfigError("need 0 < D1 < 1, M > 0, t_max > 0");
    if (c.integer("domination_grid") < 0) throw ConfigError("domination_grid must be >= 0");
    return p;
}

Output run_verify_condition_star(const ConfigMap& c) {
    const auto p = star_params(c);
    const auto cert = cstar::condition_star_check(p);
    CsvTable t{{"key", "value"}, {}};
    t.add({"verdict", cstar::to_string(cert.verdict)});
    for (const auto& [k, v] : std::vector<std::pair<const char*, double>>{
             {"c", cert.c}, {"D1", cert.D1}, {"d1", cert.d1}, {"d2", cert.d2}, {"D2", cert.D2}, {"M", cert.M},
             {"T", cert.T}, {"T_lower", cert.T_lower}, {"T_upper", cert.T_upper},
             {"min_v_lower", cert.min_v_lower}, {"max_v_upper", cert.max_v_upper}, {"v_plus", cert.v_plus},
             {"dx", cert.dx}})
        t.add({k, fmt(v)});
    t.add({"note", cert.note});
    bool ok = cert.verdict == cstar::StarVerdict::Pass;
    if (const long n = c.integer("domination_grid"); n > 0) {
        const auto dom = cstar::verify_domination(p.c, static_cast<int>(n));
        t.add({"domination_pass", dom.pass ? "true" : "false"});
        t.add({"domination_worst_margin", fmt(dom.worst_margin)});
        ok = ok && dom.pass;
    }
    std::vector<std::pair<std::string, std::string>> files{{"condition_star.csv", t.str()}};
    if (c.flag("portrait")) files.emplace_back("phase_portrait.svg", io::svg_phase_portrait(p.c));
    return {files, std::string("condition (*) at c=") + fmt(p.c) + ": " + cstar::to_string(cert.verdict),
            ok ? kExitOk : kExitFailed};
}

perc::OpConfig op_config(const ConfigMap& c) {
    perc::OpConfig o;
    o.gamma = c.num("gamma");
    o.M = static_cast<int>(c.integer("M"));
    o.p = c.num("p");
    o.n_levels = static_cast<int>(c.integer("n"));
    o.half_width = static_cast<int>(c.integer("half_width"));
    o.validate();
    if (c.integer("replicas") < 1) throw ConfigError("replicas must be at least 1");
    return o;
}

Output run_simulate_op(const ConfigMap& c) {
    const auto o = op_config(c);
    const auto est = perc::survival_frequency(o, c.integer("replicas"), c.u64("seed"),
                                              static_cast<int>(c.integer("threads")));
    CsvTable t{{"gamma", "M", "p", "n", "replicas", "survived", "frequency", "ci_lo", "ci_hi"}, {}};
    t.add({fmt(o.gamma), fmt(o.M), fmt(o.p), fmt(o.n_levels), fmt(est.replicas), fmt(est.survived),
           fmt(est.frequency), fmt(est.ci_lo), fmt(est.ci_hi)});
    const auto traj = perc::simulate_op(o, mix_seed(c.u64("seed"), 0));
    CsvTable w{{"level", "wet_count"}, {}};
    io::Series ser{"replica 0", {}, {}};
    for (std::size_t n = 0; n < traj.wet_count.size(); ++n) {
        w.add({fmt(static_cast<long>(n)), fmt(traj.wet_count[n])});
        ser.x.push_back(static_cast<double>(n));
        ser.y.push_back(static_cast<double>(traj.wet_count[n]));
    }
    return {{{"op_survival.csv", t.str()},
             {"op_wet_counts.csv", w.str()},
             {"op_wet_counts.svg", io::svg_line_plot({ser}, "wet sites per level", "level", "wet sites")}},
            "survival frequency " + fmt(est.frequency) + " [" + fmt(est.ci_lo) + ", " + fmt(est.ci_hi) + "]",
            kExitOk};
}

Output run_good_event(const ConfigMap& c) {
    const double gamma = c.num("gamma");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    const auto choice = perc::solve_good_event(gamma);
    const auto mc = perc::mc_good_event(choice.lambda, choice.T, c.integer("replicas"), c.u64("seed"));
    CsvTable t{{"gamma", "T", "lambda", "bound", "replicas", "mc_frequency", "sigma"}, {}};
    t.add({fmt(gamma), fmt(choice.T), fmt(choice.lambda), fmt(choice.bound), fmt(mc.replicas), fmt(mc.frequency),
           fmt(mc.sigma)});
    return {{{"good_event.csv", t.str()}},
            "lambda " + fmt(choice.lambda) + ", T " + fmt(choice.T) + ", P(good) >= " + fmt(choice.bound),
            kExitOk};
}

std::vector<int> accept_ids(const ConfigMap& c) {
    if (c.str("suite") != "primary") throw ConfigError("unknown suite '" + c.str("suite") + "' (only primary)");
    if (c.str("only") == "all") return accept::criterion_ids();
    std::vector<int> ids;
    for (double v : io::parse_list(c.str("only"))) {
        const int id = static_cast<int>(v);
        if (id != v) throw ConfigError("only: criterion ids are integers");
        accept::criterion_title(id);
        ids.push_back(id);
    }
    return ids;
}

Output run_accept(const ConfigMap& c, std::ostream& out) {
    accept::Options opt;
    opt.seed = c.u64("seed");
    opt.threads = static_cast<int>(c.integer("threads"));
    CsvTable t{{"id", "title", "pass", "detail"}, {}};
    int failed = 0;
    for (int id : accept_ids(c)) {
        const auto r = accept::run_criterion(id, opt);
        out << accept::format_line(r) << std::endl;
        t.add({fmt(r.id), r.title, r.pass ? "PASS" : "FAIL", r.detail});
        failed += !r.pass;
    }
    return {{{"acceptance.csv", t.str()}}, std::to_string(failed) + " criteria failed",
            failed ? kExitFailed : kExitOk};
}

const std::vector<Command>& commands() {
    static const std::vector<Command> cmds = [] {
        std::vector<Command> v;
        v.push_back({"simulate-ips",
                     "simulate the two-sex particle system and write mean densities",
                     {{"lambda", "", true, "birth rate"},
                      {"rule", "g2", false, "g1, g2 or decoupled"},
                      {"stirring", "none", false, "none, lily-pad or individual"},
                      {"eps", "1", false, "stirring scale; rate eps^-2 per edge"},
                      {"dim", "1", false, "lattice dimension (1 or 2)"},
                      {"side", "64", false, "torus side"},
                      {"t_end", "10", false, "final time"},
                      {"samples", "101", false, "sample times in [0, t_end]"},
                      {"replicas", "10", false, "independent runs"},
                      {"init", "full", false, "full or random"},
                      {"density", "0.5", false, "per-nest density for init = random"}},
                     [](const ConfigMap& c) { ips_params(c); },
                     run_simulate_ips});
        std::vector<KeySpec> pde_keys{{"system", "", true, "sys9, sys10, sys11, sys12, sys12-deaths, contact, individual2, heat"},
                                      {"lambda", "", true, "birth rate"},
                                      {"d", "2", false, "lattice dimension in the rate coefficients"},
                                      {"coeff", "default", false, "Sys11/contact multiplier: g-i, g-tilde-i or a number"},
                                      {"t_end", "50", false, "final time"},
                                      {"snapshots", "5", false, "profiles written between 0 and t_end"}};
        for (auto& k : grid_keys()) pde_keys.push_back(k);
        v.push_back({"solve-pde", "solve a mean-field system from a bump", pde_keys,
                     [](const ConfigMap& c) {
                         search_grid(c, reaction_spec(c));
                         if (c.num("t_end") <= 0.0 || c.integer("snapshots") < 1)
                             throw ConfigError("need t_end > 0 and snapshots >= 1");
                     },
                     run_solve_pde});
        std::vector<KeySpec> crit_keys{{"system", "", true, "sys10, sys11, sys12-deaths, contact, ..."},
                                       {"d", "2", false, "lattice dimension in the rate coefficients"},
                                       {"coeff", "default", false, "Sys11/contact multiplier: g-i, g-tilde-i or a number"},
                                       {"lo", "auto", false, "lambda where the bump dies"},
                                       {"hi", "auto", false, "lambda where the bump survives"},
                                       {"width", "0.002", false, "target bracket width"}};
        for (auto& k : grid_keys()) crit_keys.push_back(k);
        v.push_back({"find-lambda-c", "bisect the critical birth rate of a mean-field system", crit_keys,
                     [](const ConfigMap& c) { lambda_search(c); }, run_find_lambda_c});
        v.push_back({"verify-condition-star",
                     "check the expansion condition for the lily-pad system",
                     {{"c", "8800", false, "reaction constant 2 lambda d"},
                      {"D1", "0.5", false, "lower data level"},
                      {"d1", "0.52", false, "required lower level on [-3M, 3M]"},
                      {"d2", "0", false, "upper level; 0 picks the midpoint of (1 - 1/c, 1)"},
                      {"D2", "0", false, "0 picks the midpoint of (d2, 1)"},
                      {"M", "0.5", false, "half-width of the initial support"},
                      {"T", "0", false, "check time; 0 picks the first time both checks hold"},
                      {"dx", "0", false, "mesh spacing; 0 picks min(0.05, 0.1/sqrt(c))"},
                      {"t_max", "10", false, "give up after this time"},
                      {"upper_window", "10", false, "length of the upper check window"},
                      {"domination_grid", "0", false, "also verify xi <= eta on an n x n grid (0 skips)"},
                      {"portrait", "true", false, "write the phase portrait"}},
                     [](const ConfigMap& c) {
                         star_params(c);
                         c.flag("portrait");
                     },
                     run_verify_condition_star});
        v.push_back({"simulate-op",
                     "oriented site percolation with M-dependent closures",
                     {{"gamma", "0.001", false, "closure probability bound"},
                      {"M", "0", false, "dependence range (0 or 1)"},
                      {"p", "0.5", false, "initial wet density"},
                      {"n", "200", false, "run to level 2n"},
                      {"half_width", "0", false, "window half-width; 0 picks 2n"},
                      {"replicas", "1000", false, "independent lattices"}},
                     [](const ConfigMap& c) { op_config(c); },
                     run_simulate_op});
        v.push_back({"good-event",
                     "choose (lambda, T) for the block good event and check it by simulation",
                     {{"gamma", "", true, "allowed failure probability"},
                      {"replicas", "1000000", false, "Monte Carlo replicas"}},
                     [](const ConfigMap& c) {
                         const double g = c.num("gamma");
                         if (!(g > 0.0 && g < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
                         c.integer("replicas");
                     },
                     run_good_event});
        v.push_back({"accept",
                     "run the acceptance suite",
                     {{"suite", "primary", false, "suite name"},
                      {"only", "all", false, "comma-separated criterion ids, or all"}},
                     [](const ConfigMap& c) { accept_ids(c); },
                     nullptr});
        return v;
    }();
    return cmds;
}

const Command& find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw ConfigError("unknown subcommand '" + name + "'");
}

/// Turn leftover "--key value" / "--key=value" tokens into config entries.
void apply_overrides(const std::vector<std::string>& extra, ConfigMap& cfg) {
    for (std::size_t i = 0; i < extra.size(); ++i) {
        const std::string& tok = extra[i];
        if (tok.rfind("--", 0) != 0 || tok.size() == 2) throw ConfigError("unexpected argument '" + tok + "'");
        std::string key = tok.substr(2), value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.resize(eq);
        } else {
            if (i + 1 >= extra.size()) throw ConfigError("option --" + key + " needs a value");
            value = extra[++i];
        }
        std::replace(key.begin(), key.end(), '-', '_');
        cfg.set(key, value);
    }
}

std::string run_meta(const std::string& name, const ConfigMap& cfg, double seconds) {
    std::ostringstream m;
    m << "command = " << name << "\nversion = " << kVersion << "\nconfig_hash = " << cfg.hash()
      << "\nwall_seconds = " << fmt(seconds) << "\n";
    for (const auto& [k, v] : cfg.values()) m << "config." << k << " = " << v << "\n";
    return m.str();
}

}  // namespace

std::vector<std::string> subcommands() {
    std::vector<std::string> v;
    for (const auto& c : commands()) v.push_back(c.name);
    return v;
}

std::vector<io::KeySpec> schema(const std::string& subcommand) { return find_command(subcommand).keys; }

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"stirred: two-sex particle systems with stirring and their mean-field limits", "stirred"};
    app.require_subcommand(1);
    std::string config_path;
    bool dry_run = false;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", config_path, "key = value file");
        sub->add_flag("--dry-run", dry_run, "validate the configuration and exit");
        sub->allow_extras();
        std::string keys = "Keys (pass as --key value):";
        for (const auto& k : c.keys)
            keys += "\n  " + k.name + (k.required ? " (required)" : " [" + k.default_value + "]") + "  " + k.doc;
        keys += "\n  seed [1], output_dir [.], threads [1]";
        sub->footer(keys);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const Command& cmd = find_command(sub->get_name());
    try {
        ConfigMap cfg = config_path.empty() ? ConfigMap{} : ConfigMap::load(config_path);
        apply_overrides(sub->remaining(), cfg);
        if (const char* env = std::getenv("STIRRED_SEED"); env && *env) cfg.set("seed", env);
        cfg.check(cmd.keys);
        cfg.u64("seed");
        if (cfg.integer("threads") < 1) throw ConfigError("threads must be at least 1");
        cmd.validate(cfg);
        if (dry_run) {
            out << cmd.name << ": configuration ok (hash " << cfg.hash() << ")\n";
            return kExitOk;
        }

        const auto t0 = std::chrono::steady_clock::now();
        Output res = cmd.run ? cmd.run(cfg) : run_accept(cfg, out);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const std::filesystem::path dir = cfg.str("output_dir");
        std::filesystem::create_directories(dir);
        for (const auto& [name, text] : res.files) io::write_text((dir / name).string(), text);
        io::write_text((dir / (cmd.name + ".meta")).string(), run_meta(cmd.name, cfg, secs));
        out << cmd.name << ": " << res.summary << "\n";
        return res.exit_code;
    } catch (const ConfigError& e) {
        err << "stirred " << cmd.name << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvariantViolation& e) {
        err << "stirred " << cmd.name << ": invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "stirred " << cmd.name << ": " << e.what() << "\n";
        return kExitFailed;
    }
}

}  // namespace stirred::cli
