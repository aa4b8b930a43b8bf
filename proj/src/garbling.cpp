#include "contract_lab/garbling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contract_lab {

namespace {

constexpr double kEpsFdStep = 1e-4;
constexpr double kBoundaryTol = 1e-9;

struct GarbledSolve {
  Equilibrium eq;
  double prob_y1;
};

GarbledSolve solve_garbled_full(const Scenario& s, double gamma, double eps,
                                const num::Tolerance& tol) {
  const GarbledPair pair = make_garbled_pair(s.f0, s.f1, s.theta, gamma, eps);
  const double py1 = pair.prob_y1;
  const double py0 = 1.0 - py1;
  const auto best0 = optimize_price(pair.g0, s.b, tol);
  const auto best1 = optimize_price(pair.g1, s.b, tol);
  Equilibrium eq;
  eq.regime = Regime::Garbled;
  eq.param = eps;
  eq.prices = {best0.argmax, best1.argmax};
  eq.principal_utility = py0 * best0.max + py1 * best1.max;
  eq.agent_utility = py0 * agent_utility(pair.g0, best0.argmax) +
                     py1 * agent_utility(pair.g1, best1.argmax);
  eq.welfare = eq.principal_utility + eq.agent_utility;
  eq.quantity = py0 * pair.g0.cdf(best0.argmax) + py1 * pair.g1.cdf(best1.argmax);
  return {eq, py1};
}

double v_garb_at(const Scenario& s, double gamma, double eps, const num::Tolerance& tol) {
  return solve_garbled_full(s, gamma, eps, tol).eq.agent_utility;
}

// Finite difference of a function of eps over [0, 1]: central inside,
// second-order one-sided at the ends.
double eps_fd(const std::function<double(double)>& g, double eps, double at0, double h) {
  if (eps - h >= 0.0 && eps + h <= 1.0) {
    return (g(eps + h) - g(eps - h)) / (2.0 * h);
  }
  if (eps + h > 1.0) {
    return (3.0 * at0 - 4.0 * g(eps - h) + g(eps - 2.0 * h)) / (2.0 * h);
  }
  return (-3.0 * at0 + 4.0 * g(eps + h) - g(eps + 2.0 * h)) / (2.0 * h);
}

}  // namespace

Equilibrium solve_garbled(const Scenario& s, double gamma, double eps,
                          const num::Tolerance& tol) {
  return solve_garbled_full(s, gamma, eps, tol).eq;
}

std::pair<double, double> price_derivatives(const Scenario& s, double eps,
                                            const num::Tolerance& tol) {
  if (std::fabs(s.theta - 0.5) > 1e-12) {
    throw std::invalid_argument("price_derivatives: requires theta = 1/2");
  }
  const double gamma = 0.5;
  const auto solved = solve_garbled_full(s, gamma, eps, tol);
  const double p0 = solved.eq.prices[0];
  const double p1 = solved.eq.prices[1];

  const double w_own = 0.5 * (1.0 + eps);
  const double w_other = 0.5 * (1.0 - eps);
  const auto post_deriv_y0 = [&](double p) {
    return w_own * principal_utility_derivative(s.f0, s.b, p) +
           w_other * principal_utility_derivative(s.f1, s.b, p);
  };
  const auto post_deriv_y1 = [&](double p) {
    return w_own * principal_utility_derivative(s.f1, s.b, p) +
           w_other * principal_utility_derivative(s.f0, s.b, p);
  };

  const double cap0 = std::min(s.b, std::max(s.f0.support_hi(), s.f1.support_hi()));
  const auto one_price = [&](double p, const num::Fn& post_deriv, double num) {
    if (p <= kBoundaryTol || p >= cap0 - kBoundaryTol) {
      return 0.0;  // pinned at the interval edge; does not move with eps
    }
    const double second = num::finite_difference(post_deriv, p, 1e-6);
    if (!(second < -1e-12)) {
      std::ostringstream msg;
      msg << "price_derivatives: posterior objective not concave at p = " << p
          << " (second derivative " << second << ")";
      throw NonConcaveAtOptimum(msg.str());
    }
    return num / (-2.0 * second);
  };

  const double num0 = principal_utility_derivative(s.f0, s.b, p0) -
                      principal_utility_derivative(s.f1, s.b, p0);
  const double num1 = principal_utility_derivative(s.f1, s.b, p1) -
                      principal_utility_derivative(s.f0, s.b, p1);
  return {one_price(p0, post_deriv_y0, num0), one_price(p1, post_deriv_y1, num1)};
}

std::vector<GarblingPoint> sweep_garbling(const Scenario& s, double gamma,
                                          const std::vector<double>& eps_grid,
                                          ExecutionMode mode, const num::Tolerance& tol,
                                          bool with_derivatives) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double e = eps_grid[i];
    if (!(e >= 0.0 && e <= 1.0)) {
      throw std::invalid_argument("sweep_garbling: grid values must lie in [0, 1]");
    }
    if (i > 0 && eps_grid[i - 1] > e) {
      throw std::invalid_argument("sweep_garbling: grid must be sorted");
    }
  }
  const bool analytic_ok = with_derivatives && std::fabs(s.theta - 0.5) <= 1e-12 &&
                           std::fabs(gamma - 0.5) <= 1e-12;
  return map_indexed<GarblingPoint>(eps_grid.size(), mode, [&](std::size_t i) {
    const double eps = eps_grid[i];
    const auto solved = solve_garbled_full(s, gamma, eps, tol);
    GarblingPoint pt;
    pt.eps = eps;
    pt.p0 = solved.eq.prices[0];
    pt.p1 = solved.eq.prices[1];
    pt.pi_garb = solved.eq.principal_utility;
    pt.v_garb = solved.eq.agent_utility;
    pt.w_garb = solved.eq.welfare;
    if (analytic_ok) {
      try {
        const auto [d0, d1] = price_derivatives(s, eps, tol);
        pt.p0_prime = d0;
        pt.p1_prime = d1;
      } catch (const EngineError&) {
        // left as NaN; the analytic form needs a concave interior optimum
      }
    }
    if (with_derivatives) {
      pt.v_garb_prime_fd = eps_fd(
          [&](double e) { return v_garb_at(s, gamma, e, tol); }, eps, pt.v_garb,
          kEpsFdStep);
    }
    return pt;
  });
}

Delta agent_utility_dominance(const Scenario& s, double p0, double p1) {
  if (!(p1 >= 0.0 && p0 >= p1)) {
    throw std::invalid_argument("agent_utility_dominance: need p0 >= p1 >= 0");
  }
  const double dv1 = agent_utility(s.f1, p0) - agent_utility(s.f1, p1);
  const double dv0 = agent_utility(s.f0, p0) - agent_utility(s.f0, p1);
  return Delta{dv1 - dv0};
}

double vgarb_prime_at_one(const Scenario& s, const num::Tolerance& tol) {
  const double h = kEpsFdStep;
  return (v_garb_at(s, 0.5, 1.0, tol) - v_garb_at(s, 0.5, 1.0 - h, tol)) / h;
}

ConditionReport check_garbling_zerocost(const Scenario& s, const num::Tolerance& tol) {
  if (!s.f1.is_point_mass_at_zero()) {
    throw WrongAnchoring("check_garbling_zerocost: f1 must be the point mass at zero");
  }
  const double p0_star = optimize_price(s.f0, s.b, tol).argmax;
  const double sigma0 = sigma_curvature(s.f0, p0_star);
  ConditionReport rep;
  rep.name = "garbling_zerocost";
  rep.lhs = (s.b - p0_star) / (2.0 - sigma0);
  rep.rhs = s.f0.restricted_mean(p0_star);
  rep.margin = rep.rhs - rep.lhs;
  rep.holds = rep.margin > 0.0;
  std::ostringstream notes;
  notes << "holds => V_garb maximized at eps* < 1 (sufficiency only); p0*=" << p0_star;
  if (!std::isfinite(s.f0.continuous_pdf(0.0))) {
    notes << "; warning: f0 density unbounded at 0, proposition precondition fails";
  }
  if (std::fabs(s.theta - 0.5) > 1e-12) {
    notes << "; warning: stated for theta = 1/2, scenario has theta = " << s.theta;
  }
  rep.notes = notes.str();
  return rep;
}

ConditionReport check_garbling_general(const Scenario& s, const num::Tolerance& tol) {
  const Equilibrium rev = solve_revealed(s, tol);
  const double p0_star = rev.prices[0];
  const double p1_star = rev.prices[1];

  // A revealed price at the edge of its search interval does not move with
  // eps, so that side contributes nothing to V_garb'(1).
  const auto side_term = [&](const CostModel& own, const CostModel& other,
                             double p_star) {
    const double cap = std::min(s.b, own.support_hi());
    if (p_star <= kBoundaryTol || p_star >= cap - kBoundaryTol) return 0.0;
    const double sigma = sigma_curvature(own, p_star);
    return -principal_utility_derivative(other, s.b, p_star) * (s.b - p_star) /
           (2.0 - sigma);
  };

  ConditionReport rep;
  rep.name = "garbling_general";
  rep.lhs = side_term(s.f0, s.f1, p0_star) + side_term(s.f1, s.f0, p1_star);
  const double lo = std::min(p0_star, p1_star);
  const double hi = std::max(p0_star, p1_star);
  rep.rhs = agent_utility_dominance(s, hi, lo).value;
  if (p0_star < p1_star) rep.rhs = -rep.rhs;
  rep.margin = rep.rhs - rep.lhs;
  rep.holds = rep.margin > 0.0;
  std::ostringstream notes;
  notes << "holds => V_garb maximized at eps* < 1 (sufficiency only); "
        << "fd V_garb'(1)=" << vgarb_prime_at_one(s, tol);
  if (std::fabs(s.theta - 0.5) > 1e-12) {
    notes << "; warning: stated for theta = 1/2, scenario has theta = " << s.theta;
  }
  rep.notes = notes.str();
  return rep;
}

std::vector<GarblingPrimeCell> grid_vgarb_prime_at_one(double b, double theta,
                                                       const std::vector<double>& lambda_grid,
                                                       ExecutionMode mode,
                                                       const num::Tolerance& tol) {
  const std::size_t n = lambda_grid.size();
  return map_indexed<GarblingPrimeCell>(n * n, mode, [&](std::size_t idx) {
    const double l0 = lambda_grid[idx / n];
    const double l1 = lambda_grid[idx % n];
    const Scenario cell(b, theta, CostModel::exponential(l0), CostModel::exponential(l1));
    GarblingPrimeCell out;
    out.lambda0 = l0;
    out.lambda1 = l1;
    out.vgarb_prime_at_one = vgarb_prime_at_one(cell, tol);
    out.prop5_margin = check_garbling_general(cell, tol).margin;
    return out;
  });
}

EpsArgmax agent_optimal_eps(const Scenario& s, double gamma,
                            const std::vector<double>& eps_grid, ExecutionMode mode,
                            const num::Tolerance& tol) {
  if (eps_grid.size() < 2) {
    throw std::invalid_argument("agent_optimal_eps: need at least two grid points");
  }
  const auto values = map_indexed<double>(eps_grid.size(), mode, [&](std::size_t i) {
    return v_garb_at(s, gamma, eps_grid[i], tol);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  EpsArgmax out;
  out.grid_index = best;
  out.interior = best + 1 < eps_grid.size();
  const double lo = eps_grid[best == 0 ? 0 : best - 1];
  const double hi = eps_grid[std::min(best + 1, eps_grid.size() - 1)];
  if (hi - lo < 1e-12) {
    out.eps_refined = eps_grid[best];
    out.v_refined = values[best];
    return out;
  }
  const auto refined = num::maximize_scalar(
      [&](double e) { return v_garb_at(s, gamma, e, tol); }, num::Bracket(lo, hi), 9, tol);
  if (refined.max >= values[best]) {
    out.eps_refined = refined.argmax;
    out.v_refined = refined.max;
  } else {
    out.eps_refined = eps_grid[best];
    out.v_refined = values[best];
  }
  return out;
}

}  // namespace contract_lab
