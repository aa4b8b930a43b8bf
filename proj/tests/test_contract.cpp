#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "contract_lab/contract.hpp"
#include "contract_lab/welfare.hpp"

using namespace contract_lab;

namespace {

Scenario two_uniforms() {
  return Scenario(1.0, 0.5, CostModel::uniform(0.5, 1.5), CostModel::uniform(0.0, 1.0));
}

}  // namespace

TEST_CASE("principal utility") {
  CHECK(principal_utility(CostModel::uniform(0.0, 1.0), 1.0, 0.5) == doctest::Approx(0.25));
  CHECK(principal_utility(CostModel::exponential(0.4), 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(principal_utility(CostModel::point_mass(0.0), 1.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("agent utility") {
  CHECK(agent_utility(CostModel::uniform(0.0, 1.0), 0.5) == doctest::Approx(0.125));
  CHECK(agent_utility(CostModel::uniform(0.0, 1.0), 0.0) == 0.0);
  const auto mix = two_uniforms().marginal();
  CHECK(agent_utility(mix, 0.625) == doctest::Approx(0.1015625).epsilon(1e-12));
}

TEST_CASE("two-uniform counterexample: concealed equilibrium") {
  const auto eq = solve_concealed(two_uniforms());
  CHECK(eq.prices.size() == 1);
  CHECK(eq.prices[0] == doctest::Approx(0.625).epsilon(1e-8));
  CHECK(eq.principal_utility == doctest::Approx(0.140625).epsilon(1e-10));
  CHECK(eq.agent_utility == doctest::Approx(0.1015625).epsilon(1e-10));
  CHECK(eq.welfare == doctest::Approx(0.2421875).epsilon(1e-10));
  CHECK(eq.quantity == doctest::Approx(0.375).epsilon(1e-8));
}

TEST_CASE("two-uniform counterexample: revealed equilibrium") {
  const auto eq = solve_revealed(two_uniforms());
  CHECK(eq.prices[0] == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(eq.prices[1] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(eq.principal_utility == doctest::Approx(0.15625).epsilon(1e-10));
  CHECK(eq.agent_utility == doctest::Approx(0.078125).epsilon(1e-10));
  CHECK(eq.welfare == doctest::Approx(0.234375).epsilon(1e-10));
  CHECK(eq.quantity == doctest::Approx(0.375).epsilon(1e-8));
}

TEST_CASE("degenerate scenario: both costs free") {
  const Scenario s(2.0, 0.5, CostModel::point_mass(0.0), CostModel::point_mass(0.0));
  const auto eq = solve_concealed(s);
  CHECK(eq.prices[0] == 0.0);
  CHECK(eq.principal_utility == doctest::Approx(2.0));
  CHECK(eq.agent_utility == 0.0);
  CHECK(eq.quantity == doctest::Approx(1.0));
}

TEST_CASE("anchored exponential: grid optimum matches the marginal FOC root") {
  const Scenario s(1.0, 0.5, CostModel::exponential(0.2), CostModel::point_mass(0.0));
  const auto eq = solve_concealed(s);
  // p* + ((1-theta) F0(p*) + theta) / ((1-theta) f0(p*)) = b
  const auto residual = [&](double p) {
    return p + (0.5 * s.f0.cdf(p) + 0.5) / (0.5 * s.f0.pdf(p)) - 1.0;
  };
  const double root = num::find_root(residual, num::Bracket(1e-6, 1.0));
  CHECK(eq.prices[0] == doctest::Approx(root).epsilon(1e-8));
}

TEST_CASE("identical environments: revelation changes nothing") {
  const Scenario s(1.0, 0.4, CostModel::exponential(0.5), CostModel::exponential(0.5));
  const auto con = solve_concealed(s);
  const auto rev = solve_revealed(s);
  CHECK(rev.prices[0] == doctest::Approx(rev.prices[1]).epsilon(1e-10));
  CHECK(rev.prices[0] == doctest::Approx(con.prices[0]).epsilon(1e-8));
  CHECK(rev.principal_utility == doctest::Approx(con.principal_utility).epsilon(1e-10));
  CHECK(rev.agent_utility == doctest::Approx(con.agent_utility).epsilon(1e-10));
}

TEST_CASE("revealed prices do not depend on theta") {
  const auto f0 = CostModel::exponential(0.5);
  const auto f1 = CostModel::exponential(0.01);
  const auto base = solve_revealed(Scenario(1.0, 0.5, f0, f1));
  for (double theta : {0.1, 0.3, 0.7, 0.9}) {
    const auto eq = solve_revealed(Scenario(1.0, theta, f0, f1));
    CHECK(eq.prices[0] == base.prices[0]);
    CHECK(eq.prices[1] == base.prices[1]);
  }
}

TEST_CASE("foc residual") {
  CHECK(foc_residual(CostModel::uniform(0.0, 1.0), 1.0, 0.5) == doctest::Approx(0.0));
  const auto exp1 = CostModel::exponential(1.0);
  const double root =
      num::find_root([&](double p) { return p + std::exp(p) - 3.0; }, num::Bracket(0.0, 2.0));
  CHECK(foc_residual(exp1, 2.0, root) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(foc_residual(exp1, 1.0, 1.0) > 0.0);  // pricing at value
  CHECK_THROWS_AS(foc_residual(CostModel::uniform(0.5, 1.0), 1.0, 0.2), ZeroDensity);
}

TEST_CASE("foc residual vanishes at interior optima") {
  for (double lambda : {0.2, 0.5, 1.0}) {
    const auto m = CostModel::exponential(lambda);
    const auto best = optimize_price(m, 1.0);
    CHECK(std::fabs(foc_residual(m, 1.0, best.argmax)) <= 1e-6);
  }
}

TEST_CASE("elasticity") {
  CHECK(elasticity(CostModel::uniform(0.0, 1.0), 0.5) == doctest::Approx(1.0));
  // small-price limit for the exponential is 1
  CHECK(elasticity(CostModel::exponential(0.7), 1e-7) == doctest::Approx(1.0).epsilon(1e-6));
  const double expected = 2.0 * std::exp(-1.0) / (1.0 - std::exp(-1.0));
  CHECK(elasticity(CostModel::weibull(1.0, 2.0), 1.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(elasticity(CostModel::uniform(0.5, 1.0), 0.2), ZeroQuantity);
}

TEST_CASE("sigma curvature") {
  CHECK(sigma_curvature(CostModel::uniform(0.0, 1.0), 0.3) == doctest::Approx(0.0));
  const double lambda = 0.8;
  const double p = lambda * std::log(2.0);
  CHECK(sigma_curvature(CostModel::exponential(lambda), p) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  // family degeneracy: shape-1 Weibull is the exponential
  CHECK(sigma_curvature(CostModel::weibull(0.6, 1.0), 0.4) ==
        doctest::Approx(sigma_curvature(CostModel::exponential(0.6), 0.4)).epsilon(1e-12));
}

TEST_CASE("alpha curvature") {
  CHECK(alpha_curvature(CostModel::uniform(0.0, 1.0), 0.6) == doctest::Approx(0.0));
  CHECK(alpha_curvature(CostModel::exponential(0.5), 0.3) ==
        doctest::Approx(0.6).epsilon(1e-12));
  // against a finite difference of log f
  const auto w = CostModel::weibull(1.0, 2.0);
  const double p = 0.5;
  const double dlogf =
      num::finite_difference([&](double x) { return std::log(w.pdf(x)); }, p, 1e-6);
  CHECK(alpha_curvature(w, p) == doctest::Approx(-p * dlogf).epsilon(1e-6));
}

TEST_CASE("lerner index") {
  CHECK(lerner_index(1.0, 0.5) == doctest::Approx(1.0));
  CHECK(lerner_index(0.8, 0.8) == doctest::Approx(0.0));
  CHECK(lerner_index(1.0, 0.625) == doctest::Approx(0.6));
  CHECK_THROWS_AS(lerner_index(1.0, 0.0), ZeroPrice);
}

TEST_CASE("welfare: dual routes agree and match the closed forms") {
  const auto s = two_uniforms();
  const auto con = solve_concealed(s);
  const auto rev = solve_revealed(s);
  CHECK(welfare(s, con.prices[0]) == doctest::Approx(0.2421875).epsilon(1e-9));
  CHECK(welfare(s, rev.prices[0], rev.prices[1]) ==
        doctest::Approx(0.234375).epsilon(1e-9));
  CHECK(welfare(s, 0.0) == 0.0);
  CHECK(efficient_welfare(s) == doctest::Approx(0.3125).epsilon(1e-9));
}

TEST_CASE("welfare integral handles atoms and unbounded densities") {
  const Scenario anchored(1.0, 0.5, CostModel::weibull(0.5, 0.4), CostModel::point_mass(0.0));
  const auto con = solve_concealed(anchored);
  CHECK(welfare(anchored, con.prices[0]) ==
        doctest::Approx(con.welfare).epsilon(1e-8));
  // efficient welfare of a free task is its full value
  const Scenario free_task(0.7, 0.5, CostModel::point_mass(0.0), CostModel::point_mass(0.0));
  CHECK(efficient_welfare(free_task) == doctest::Approx(0.7).epsilon(1e-12));
  // exponential tail: E[(b-C)^+] -> b - lambda for b >> lambda
  const Scenario tail(20.0 * 0.4, 0.5, CostModel::exponential(0.4), CostModel::exponential(0.4));
  CHECK(efficient_welfare(tail) == doctest::Approx(20.0 * 0.4 - 0.4).epsilon(1e-3));
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_WITH_AS(Scenario(1.0, 1.5, CostModel::exponential(1.0), CostModel::exponential(1.0)),
                       "Scenario: theta must lie in (0,1)", std::invalid_argument);
  CHECK_THROWS_AS(Scenario(-1.0, 0.5, CostModel::exponential(1.0), CostModel::exponential(1.0)),
                  std::invalid_argument);
}

TEST_CASE("principal never loses from revelation (spot battery)") {
  const std::vector<Scenario> battery = {
      two_uniforms(),
      Scenario(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.01)),
      Scenario(1.0, 0.5, CostModel::exponential(0.2), CostModel::point_mass(0.0)),
      Scenario(1.0, 0.3, CostModel::weibull(0.8, 2.0), CostModel::weibull(0.3, 2.0)),
  };
  for (const auto& s : battery) {
    const auto con = solve_concealed(s);
    const auto rev = solve_revealed(s);
    CHECK(rev.principal_utility >= con.principal_utility - 1e-9);
    CHECK(rev.quantity >= 0.0);
    CHECK(rev.quantity <= 1.0);
    CHECK(rev.welfare ==
          doctest::Approx(rev.principal_utility + rev.agent_utility).epsilon(1e-12));
  }
}
