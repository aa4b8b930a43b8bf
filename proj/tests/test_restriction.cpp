#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "contract_lab/restriction.hpp"

using namespace contract_lab;

namespace {

Scenario wide_gap() {
  return Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.01));
}

Scenario two_uniforms() {
  return Scenario(1.0, 0.5, CostModel::uniform(0.5, 1.5), CostModel::uniform(0.0, 1.0));
}

}  // namespace

TEST_CASE("r=0 reproduces the concealed equilibrium") {
  for (const auto& s : {wide_gap(), two_uniforms()}) {
    const auto con = solve_concealed(s);
    const auto pt = solve_restricted(s, 0.0);
    CHECK(pt.p0 == doctest::Approx(pt.p1).epsilon(1e-12));
    CHECK(pt.pi_const == doctest::Approx(con.principal_utility).epsilon(1e-9));
    CHECK(pt.v_const == doctest::Approx(con.agent_utility).epsilon(1e-9));
  }
}

TEST_CASE("r at the full gap reproduces the revealed equilibrium") {
  for (const auto& s : {wide_gap(), two_uniforms()}) {
    const auto rev = solve_revealed(s);
    const auto pt = solve_restricted(s, binding_gap(s));
    CHECK(pt.p0 == doctest::Approx(rev.prices[0]).epsilon(1e-8));
    CHECK(pt.p1 == doctest::Approx(rev.prices[1]).epsilon(1e-8));
    CHECK(pt.pi_const == doctest::Approx(rev.principal_utility).epsilon(1e-10));
    CHECK(pt.v_const == doctest::Approx(rev.agent_utility).epsilon(1e-9));
  }
}

TEST_CASE("intermediate gaps are dominated for the agent (wide-gap scenario)") {
  const auto s = wide_gap();
  const auto con = solve_concealed(s);
  const auto rev = solve_revealed(s);
  const double cap = std::max(con.agent_utility, rev.agent_utility);
  const auto pt = solve_restricted(s, 0.5 * binding_gap(s));
  CHECK(pt.v_const <= cap + 1e-9);
}

TEST_CASE("out-of-range gaps are rejected") {
  const auto s = wide_gap();
  CHECK_THROWS_AS(solve_restricted(s, -0.1), RangeError);
  CHECK_THROWS_AS(solve_restricted(s, binding_gap(s) + 0.01), RangeError);
}

TEST_CASE("gap constraint binds exactly") {
  const auto s = wide_gap();
  const double r = 0.1;
  const auto pt = solve_restricted(s, r);
  CHECK(pt.p0 - pt.p1 == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("sweep endpoints and welfare identity") {
  const auto s = two_uniforms();
  const auto con = solve_concealed(s);
  const auto rev = solve_revealed(s);
  const auto sweep = sweep_restriction(s, 11, ExecutionMode::Serial);
  REQUIRE(sweep.size() == 11);
  CHECK(sweep.front().w_const == doctest::Approx(con.welfare).epsilon(1e-9));
  CHECK(sweep.back().w_const == doctest::Approx(rev.welfare).epsilon(1e-9));
  for (const auto& pt : sweep) {
    CHECK(pt.w_const == doctest::Approx(pt.pi_const + pt.v_const).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sweep_restriction(s, 1, ExecutionMode::Serial), std::invalid_argument);
}

TEST_CASE("two-point sweep hits exactly the two regimes") {
  const auto s = wide_gap();
  const auto sweep = sweep_restriction(s, 2, ExecutionMode::Serial);
  CHECK(sweep[0].r == 0.0);
  CHECK(sweep[1].r == doctest::Approx(binding_gap(s)));
}

TEST_CASE("analytic v_const derivative matches finite differences") {
  const auto s = wide_gap();
  const double r_max = binding_gap(s);
  const double h = 1e-4;
  for (int k = 1; k < 20; ++k) {
    const double r = r_max * k / 20.0;
    const double analytic = v_const_derivative(s, r);
    const double fd =
        (solve_restricted(s, r + h).v_const - solve_restricted(s, r - h).v_const) / (2 * h);
    CHECK(std::fabs(analytic - fd) <= 1e-3 * std::max({std::fabs(analytic), std::fabs(fd), 1e-3}));
  }
}

TEST_CASE("v_const derivative near the full gap carries the discriminant sign") {
  const auto s = wide_gap();
  const double r_max = binding_gap(s);
  const auto rev = solve_revealed(s);
  const double w1 = s.f1.cdf(rev.prices[1]) /
                    principal_utility_second_derivative(s.f1, s.b, rev.prices[1]);
  const double w0 = s.f0.cdf(rev.prices[0]) /
                    principal_utility_second_derivative(s.f0, s.b, rev.prices[0]);
  const double discriminant = 0.5 * w1 - 0.5 * w0;
  const double deriv = v_const_derivative(s, r_max);
  CHECK(deriv * discriminant > 0.0);  // same sign
}

TEST_CASE("v_const derivative stationary at r = 0 for identical environments") {
  const Scenario s(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.5));
  CHECK(std::fabs(v_const_derivative(s, 0.0)) <= 1e-9);
}

TEST_CASE("quasiconvexity checker") {
  const auto mk = [](std::vector<double> vs) {
    std::vector<RestrictionPoint> pts(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
      pts[i].r = static_cast<double>(i);
      pts[i].v_const = vs[i];
    }
    return pts;
  };
  CHECK(check_quasiconvexity(mk({5, 4, 3, 2, 1})).holds);          // monotone
  CHECK(check_quasiconvexity(mk({5, 3, 1, 2, 4})).holds);          // V-shaped
  CHECK_FALSE(check_quasiconvexity(mk({1, 2, 5, 2, 1})).holds);    // interior peak
  CHECK_THROWS_AS(check_quasiconvexity(mk({1, 2, 3})), std::invalid_argument);

  const auto sweep = sweep_restriction(wide_gap(), 101, ExecutionMode::Serial);
  CHECK(check_quasiconvexity(sweep).holds);
}

TEST_CASE("decreasing ratio condition") {
  // uniform on (0,1): w(p) = -p/2, strictly decreasing
  const Scenario unif(1.0, 0.5, CostModel::uniform(0.0, 1.0), CostModel::uniform(0.0, 1.0));
  std::vector<double> grid;
  for (int i = 1; i <= 64; ++i) grid.push_back(0.9 * i / 64.0);
  const auto rep = check_drc(unif, grid);
  CHECK(rep.holds);

  // exponential pairs satisfy the DRC on the default grid
  const auto exp_pair = Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.25));
  CHECK(check_drc(exp_pair, default_price_grid(exp_pair)).holds);

  // a flat-density region breaks concavity and is flagged
  const Scenario shifted(1.0, 0.5, CostModel::uniform(0.5, 1.5), CostModel::uniform(0.0, 1.0));
  const auto flagged = check_drc(shifted, default_price_grid(shifted));
  CHECK_FALSE(flagged.holds);
  CHECK(flagged.notes.find("ConcavityFailure") != std::string::npos);
}

TEST_CASE("parallel and serial restriction sweeps agree bitwise") {
  const auto s = wide_gap();
  const auto a = sweep_restriction(s, 21, ExecutionMode::Serial);
  const auto b = sweep_restriction(s, 21, ExecutionMode::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].r == b[i].r);
    CHECK(a[i].p0 == b[i].p0);
    CHECK(a[i].p1 == b[i].p1);
    CHECK(a[i].pi_const == b[i].pi_const);
    CHECK(a[i].v_const == b[i].v_const);
  }
}
