#include <doctest.h>

#include <cmath>

#include "stirred/critical.hpp"
#include "stirred/errors.hpp"

using namespace stirred;
using namespace stirred::critical;

namespace {

pde::ReactionSpec sys11(double beta) {
    pde::ReactionSpec s;
    s.system = pde::System::Sys11;
    s.beta_coeff = 4.0;
    s.lambda = beta / 4.0;
    return s;
}

SearchGrid short_grid() {
    SearchGrid g;
    g.half_width = 120.0;
    g.horizon = 100.0;
    return g;
}

}  // namespace

TEST_CASE("front position interpolates the last crossing") {
    std::vector<double> ramp{1.0, 1.0, 0.8, 0.4, 0.0, 0.0};
    CHECK(front_position(ramp, 0.5, 0.6) == doctest::Approx(1.25));
    CHECK(front_position(ramp, 0.5, 2.0) == -1.0);
    // two crossings: the rightmost one counts
    std::vector<double> twice{1.0, 0.0, 1.0, 0.0};
    CHECK(front_position(twice, 1.0, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("Sys11 verdicts on either side of beta = 4.5") {
    const auto up = classify_survival(sys11(6.0), short_grid());
    CHECK(up.verdict == Verdict::Survives);
    const auto down = classify_survival(sys11(4.2), short_grid());
    CHECK(down.verdict == Verdict::Dies);
    pde::ReactionSpec contact;
    contact.system = pde::System::Contact;
    contact.lambda = 0.5 / 4.0;
    CHECK(classify_survival(contact, short_grid()).verdict == Verdict::Dies);
}

TEST_CASE("measured Sys11 front speed matches the travelling wave") {
    const double beta = 6.0;
    SearchGrid g;
    g.horizon = 120.0;
    const auto v = classify_survival(sys11(beta), g);
    REQUIRE(v.verdict == Verdict::Survives);
    const std::size_t n = v.times.size();
    REQUIRE(n > 40);
    const std::size_t a = n / 2, b = n - 1;
    const double speed = (v.front_positions[b] - v.front_positions[a]) / (v.times[b] - v.times[a]);
    // (1/sqrt 2) sqrt(beta) (rho0 - 2 rho1) for f = -u + beta (1-u) u^2
    const double root = std::sqrt(1.0 - 4.0 / beta);
    const double exact = std::sqrt(beta / 2.0) * ((1 + root) / 2 - (1 - root));
    CHECK(speed == doctest::Approx(exact).epsilon(0.03));
    CHECK(pde::sys11_front_speed(beta) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("verdicts are monotone in lambda") {
    int last = -1;
    for (double beta : {4.2, 4.4, 4.6, 4.8}) {
        const int rank = classify_survival(sys11(beta), short_grid()).verdict == Verdict::Survives ? 1 : 0;
        CHECK(rank >= last);
        last = rank;
    }
}

TEST_CASE("bisection halves the bracket each step") {
    pde::ReactionSpec s = sys11(4.0);
    const auto b = bisect_lambda_c(s, 1.0, 1.3, 0.02, short_grid());
    CHECK(b.converged);
    CHECK(b.width() <= 0.02);
    CHECK(b.lo <= 1.125);
    CHECK(b.hi >= 1.125);
    double width = 0.3;
    for (const auto& st : b.transcript) {
        if (st.iteration == 0) continue;
        CHECK(st.hi - st.lo == doctest::Approx(width / 2));
        width = st.hi - st.lo;
    }
    CHECK(b.lo_verdict.verdict == Verdict::Dies);
    CHECK(b.hi_verdict.verdict == Verdict::Survives);
}

TEST_CASE("an invalid bracket is rejected") {
    CHECK_THROWS_AS(bisect_lambda_c(sys11(4.0), 1.2, 1.3, 0.01, short_grid()), BracketInvalid);
    SearchGrid g;
    g.dx = -1;
    CHECK_THROWS_AS(g.validate(), ConfigError);
}
