#include "contract_lab/contract.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contract_lab {

Scenario::Scenario(double b_, double theta_, CostModel f0_, CostModel f1_)
    : b(b_), theta(theta_), f0(std::move(f0_)), f1(std::move(f1_)) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("Scenario: b must be positive and finite");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("Scenario: theta must lie in (0,1)");
  }
  if (f0.support_lo() < 0.0 || f1.support_lo() < 0.0) {
    throw std::invalid_argument("Scenario: cost supports must lie in [0, inf)");
  }
}

CostModel Scenario::marginal() const {
  return make_mixture({{1.0 - theta, f0}, {theta, f1}});
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Concealed: return "concealed";
    case Regime::Revealed: return "revealed";
    case Regime::Garbled: return "garbled";
    case Regime::Restricted: return "restricted";
  }
  return "unknown";
}

double principal_utility(const CostModel& m, double b, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("principal_utility: need p >= 0");
  return m.cdf(p) * (b - p);
}

double agent_utility(const CostModel& m, double p) { return m.partial_value(p); }

double foc_residual(const CostModel& m, double b, double p) {
  const double f = m.pdf(p);
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "foc_residual: zero density at p = " << p;
    throw ZeroDensity(msg.str());
  }
  return p + m.cdf(p) / f - b;
}

double elasticity(const CostModel& m, double p) {
  const double F = m.cdf(p);
  if (!(F > 0.0)) {
    std::ostringstream msg;
    msg << "elasticity: zero quantity at p = " << p;
    throw ZeroQuantity(msg.str());
  }
  return p * m.pdf(p) / F;
}

double sigma_curvature(const CostModel& m, double p) {
  const double f = m.pdf(p);
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "sigma_curvature: zero density at p = " << p;
    throw ZeroDensity(msg.str());
  }
  return m.cdf(p) * m.pdf_derivative(p) / (f * f);
}

double alpha_curvature(const CostModel& m, double p) {
  const double f = m.pdf(p);
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "alpha_curvature: zero density at p = " << p;
    throw ZeroDensity(msg.str());
  }
  return -p * m.pdf_derivative(p) / f;
}

double lerner_index(double b, double p) {
  if (!(p > 0.0)) throw ZeroPrice("lerner_index: need p > 0");
  return (b - p) / p;
}

double principal_utility_derivative(const CostModel& m, double b, double p) {
  return m.continuous_pdf(p) * (b - p) - m.cdf(p);
}

double principal_utility_second_derivative(const CostModel& m, double b, double p) {
  return -2.0 * m.continuous_pdf(p) + m.pdf_derivative(p) * (b - p);
}

num::ScalarMax optimize_price(const CostModel& m, double b, const num::Tolerance& tol) {
  // Prices above b earn a nonpositive margin and prices above the support
  // ceiling buy no extra quantity, so the search interval is capped at both.
  const double hi = std::min(b, m.support_hi());
  if (hi <= 0.0) {
    return num::ScalarMax{0.0, principal_utility(m, b, 0.0)};
  }
  const auto objective = [&](double p) { return m.cdf(p) * (b - p); };
  return num::maximize_scalar(objective, num::Bracket(0.0, hi), num::kDefaultGridN, tol);
}

Equilibrium solve_concealed(const Scenario& s, const num::Tolerance& tol) {
  const CostModel m = s.marginal();
  const auto best = optimize_price(m, s.b, tol);
  Equilibrium eq;
  eq.regime = Regime::Concealed;
  eq.prices = {best.argmax};
  eq.principal_utility = best.max;
  eq.agent_utility = agent_utility(m, best.argmax);
  eq.welfare = eq.principal_utility + eq.agent_utility;
  eq.quantity = m.cdf(best.argmax);
  return eq;
}

Equilibrium solve_revealed(const Scenario& s, const num::Tolerance& tol) {
  // The objective is separable: each environment price maximizes its own
  // Pi_x, independent of theta.
  const auto best0 = optimize_price(s.f0, s.b, tol);
  const auto best1 = optimize_price(s.f1, s.b, tol);
  Equilibrium eq;
  eq.regime = Regime::Revealed;
  eq.prices = {best0.argmax, best1.argmax};
  eq.principal_utility = (1.0 - s.theta) * best0.max + s.theta * best1.max;
  eq.agent_utility = (1.0 - s.theta) * agent_utility(s.f0, best0.argmax) +
                     s.theta * agent_utility(s.f1, best1.argmax);
  eq.welfare = eq.principal_utility + eq.agent_utility;
  eq.quantity =
      (1.0 - s.theta) * s.f0.cdf(best0.argmax) + s.theta * s.f1.cdf(best1.argmax);
  return eq;
}

double welfare_integral(const CostModel& m, double b, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("welfare_integral: need p >= 0");
  // E[(b - C) 1(C <= p)] = b F(p) - int_0^p c dF(c). The first moment goes
  // through quadrature on the continuous density, a route independent of the
  // closed-form partial value. c * f(c) -> 0 at c = 0 for every family.
  const double lo = std::max(0.0, m.support_lo());
  double first_moment = 0.0;
  if (p > lo) {
    const auto integrand = [&](double c) {
      if (c <= lo) return 0.0;
      return c * m.continuous_pdf(c);
    };
    first_moment = num::integrate_with_breakpoints(integrand, lo, p, m.breakpoints());
  }
  for (const Atom& a : m.atoms()) {
    if (a.location <= p) first_moment += a.mass * a.location;
  }
  return b * m.cdf(p) - first_moment;
}

namespace {

double checked_welfare(const Scenario& s, double sum_form, double integral_form) {
  (void)s;
  if (std::fabs(sum_form - integral_form) > 1e-8) {
    std::ostringstream msg;
    msg << "welfare: utility-sum route " << sum_form << " and integral route "
        << integral_form << " disagree beyond 1e-8";
    throw NonConvergence(msg.str());
  }
  return sum_form;
}

}  // namespace

double welfare(const Scenario& s, double p) {
  const CostModel m = s.marginal();
  const double sum_form = principal_utility(m, s.b, p) + agent_utility(m, p);
  const double integral_form = welfare_integral(m, s.b, p);
  return checked_welfare(s, sum_form, integral_form);
}

double welfare(const Scenario& s, double p0, double p1) {
  const double w = 1.0 - s.theta;
  const double sum_form =
      w * (principal_utility(s.f0, s.b, p0) + agent_utility(s.f0, p0)) +
      s.theta * (principal_utility(s.f1, s.b, p1) + agent_utility(s.f1, p1));
  const double integral_form = w * welfare_integral(s.f0, s.b, p0) +
                               s.theta * welfare_integral(s.f1, s.b, p1);
  return checked_welfare(s, sum_form, integral_form);
}

}  // namespace contract_lab
