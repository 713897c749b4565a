#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cli.hpp"
#include "stirred/config.hpp"
#include "stirred/csv.hpp"
#include "stirred/errors.hpp"
#include "stirred/flow_geometry.hpp"
#include "stirred/svg.hpp"

using namespace stirred;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("stirred_test_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "stirred");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    auto c = io::ConfigMap::parse("# header\n lambda = 1.5  # trailing\n\nrule=g1\n");
    CHECK(c.num("lambda") == 1.5);
    CHECK(c.str("rule") == "g1");
    CHECK_THROWS_AS(io::ConfigMap::parse("[section]\n"), ConfigError);
    CHECK_THROWS_AS(io::ConfigMap::parse("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(io::ConfigMap::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(c.num("rule"), ConfigError);
    CHECK_THROWS_AS(io::ConfigMap::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config schema check") {
    const std::vector<io::KeySpec> schema{{"lambda", "", true, ""}, {"rule", "g2", false, ""}};
    auto c = io::ConfigMap::parse("lambda = 2\n");
    c.check(schema);
    CHECK(c.str("rule") == "g2");
    CHECK(c.str("seed") == "1");
    auto missing = io::ConfigMap::parse("rule = g1\n");
    CHECK_THROWS_AS(missing.check(schema), ConfigError);
    auto unknown = io::ConfigMap::parse("lambda = 2\nlamda = 3\n");
    CHECK_THROWS_AS(unknown.check(schema), ConfigError);
}

TEST_CASE("config hash ignores insertion order") {
    auto a = io::ConfigMap::parse("x = 1\ny = 2\n");
    auto b = io::ConfigMap::parse("y = 2\nx = 1\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.set("x", "3");
    CHECK(a.hash() != b.hash());
    CHECK(io::parse_list("1, 2 3,4") == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5}) CHECK(std::stod(io::fmt(x)) == x);
    CHECK(io::fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::fmt(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(io::fmt(42L) == "42");
}

TEST_CASE("CSV table") {
    io::CsvTable t{{"a", "b"}, {}};
    t.add({"1", "2"});
    CHECK(t.str() == "a,b\n1,2\n");
    CHECK_THROWS(t.add({"1"}));
}

TEST_CASE("SVG output") {
    CHECK(io::svg_line_plot({}, "t", "x", "y").find("no data") != std::string::npos);
    CHECK(io::svg_line_plot({{"empty", {}, {}}}, "t", "x", "y").find("no data") != std::string::npos);
    const io::Series s{"line", {0, 1, 2}, {0, 1, 4}};
    const auto a = io::svg_line_plot({s}, "t", "x", "y");
    CHECK(a == io::svg_line_plot({s}, "t", "x", "y"));
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("line") != std::string::npos);
    CHECK(io::svg_phase_portrait(8800.0) == io::svg_phase_portrait(8800.0));
}

TEST_CASE("nullcline points are zeros of the field") {
    const double c = 8800.0;
    const auto nc = io::lily_pad_nullclines(c, 200);
    REQUIRE(nc.size() == 2);
    CHECK(nc[0].label.find("gamma_1") != std::string::npos);
    CHECK(nc[1].label.find("gamma_2") != std::string::npos);
    for (int k = 0; k < 2; ++k) {
        REQUIRE(!nc[k].x.empty());
        for (std::size_t i = 0; i < nc[k].x.size(); ++i) {
            const auto e = cstar::eta(nc[k].x[i], nc[k].y[i], c);
            // residual relative to the field scale c
            CHECK(std::abs(k == 0 ? e.u : e.v) < 1e-8 * c);
        }
    }
}

TEST_CASE("cli: dry run writes nothing") {
    TempDir dir("dry");
    const auto r = run({"simulate-ips", "--lambda", "2", "--output-dir", dir.str(), "--dry-run"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("configuration ok") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path));
}

TEST_CASE("cli: config errors exit 2 without output") {
    TempDir dir("err");
    CHECK(run({"simulate-ips", "--output-dir", dir.str()}).code == cli::kExitConfig);
    CHECK(run({"simulate-ips", "--lambda", "1", "--lamda", "2", "--output-dir", dir.str()}).code ==
          cli::kExitConfig);
    CHECK(run({"simulate-ips", "--lambda", "-1", "--output-dir", dir.str()}).code == cli::kExitConfig);
    CHECK(run({"accept", "--suite", "secondary", "--output-dir", dir.str()}).code == cli::kExitConfig);
    CHECK(run({"no-such-command"}).code == cli::kExitConfig);
    CHECK_FALSE(fs::exists(dir.path));
    for (const auto& name : cli::subcommands()) CHECK_NOTHROW(cli::schema(name));
}

TEST_CASE("cli: config file plus overrides and seed from the environment") {
    TempDir dir("env");
    fs::create_directories(dir.path);
    const auto cfg = (dir.path / "run.cfg").string();
    io::write_text(cfg, "gamma = 0.05\nreplicas = 2000\nseed = 3\n");
    const auto out = (dir.path / "out").string();
    setenv("STIRRED_SEED", "77", 1);
    const auto r = run({"good-event", "--config", cfg, "--replicas=1000", "--output-dir", out});
    unsetenv("STIRRED_SEED");
    CHECK(r.code == cli::kExitOk);
    const auto meta = slurp(fs::path(out) / "good-event.meta");
    CHECK(meta.find("config.seed = 77") != std::string::npos);
    CHECK(meta.find("config.replicas = 1000") != std::string::npos);
}

TEST_CASE("cli: identical config and seed give identical CSVs") {
    TempDir dir("replay");
    const auto a = (dir.path / "a").string(), b = (dir.path / "b").string();
    for (const auto& o : {a, b})
        REQUIRE(run({"simulate-ips", "--lambda", "2", "--side", "16", "--t-end", "2", "--replicas", "3",
                     "--stirring", "lily-pad", "--seed", "5", "--output-dir", o})
                    .code == cli::kExitOk);
    CHECK(slurp(fs::path(a) / "ips_density.csv") == slurp(fs::path(b) / "ips_density.csv"));
    CHECK(slurp(fs::path(a) / "ips_density.svg") == slurp(fs::path(b) / "ips_density.svg"));
}

TEST_CASE("cli: find-lambda-c brackets the G1 individual value") {
    TempDir dir("lc");
    const auto r =
        run({"find-lambda-c", "--system", "sys11", "--d", "2", "--coeff", "g-tilde-i", "--output-dir", dir.str()});
    CHECK(r.code == cli::kExitOk);
    const auto csv = slurp(dir.path / "lambda_c_transcript.csv");
    CHECK(csv.rfind("iteration,lambda,verdict,lo,hi,t_used\n", 0) == 0);
    CHECK(fs::exists(dir.path / "lambda_c_fronts.svg"));
    // last transcript row holds the final bracket
    const auto last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    std::stringstream ss(last);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 6);
    CHECK(std::stod(cells[3]) <= 0.225);
    CHECK(std::stod(cells[4]) >= 0.225);
}

TEST_CASE("cli: a failed check exits 1") {
    TempDir dir("star");
    const auto r = run({"verify-condition-star", "--c", "1", "--output-dir", dir.str()});
    CHECK(r.code == cli::kExitFailed);
    CHECK(slurp(dir.path / "condition_star.csv").find("verdict,fail") != std::string::npos);
}
