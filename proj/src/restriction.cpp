#include "contract_lab/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contract_lab {

namespace {

constexpr double kRangeSlack = 1e-12;

RestrictionPoint solve_restricted_impl(const Scenario& s, double r,
                                       const num::Tolerance& tol) {
  const double hi = std::min(s.b, std::max(s.f0.support_hi(), s.f1.support_hi()));
  const double w0 = 1.0 - s.theta;
  const auto objective = [&](double p1) {
    return w0 * principal_utility(s.f0, s.b, p1 + r) +
           s.theta * principal_utility(s.f1, s.b, p1);
  };
  num::ScalarMax best{0.0, objective(0.0)};
  if (hi > 0.0) {
    best = num::maximize_scalar(objective, num::Bracket(0.0, hi), num::kDefaultGridN, tol);
  }
  RestrictionPoint pt;
  pt.r = r;
  pt.p1 = best.argmax;
  pt.p0 = best.argmax + r;
  pt.pi_const = best.max;
  pt.v_const = w0 * agent_utility(s.f0, pt.p0) + s.theta * agent_utility(s.f1, pt.p1);
  pt.w_const = pt.pi_const + pt.v_const;
  return pt;
}

double v_const_derivative_at(const Scenario& s, const RestrictionPoint& pt) {
  const double pp0 = principal_utility_second_derivative(s.f0, s.b, pt.p0);
  const double pp1 = principal_utility_second_derivative(s.f1, s.b, pt.p1);
  if (!(pp0 < -1e-12) || !(pp1 < -1e-12)) {
    std::ostringstream msg;
    msg << "v_const_derivative: objective not strictly concave at (p0, p1) = ("
        << pt.p0 << ", " << pt.p1 << ")";
    throw NonConcaveAtOptimum(msg.str());
  }
  const double w0 = 1.0 - s.theta;
  const double denom = w0 * pp0 + s.theta * pp1;
  const double lead = -s.theta * w0 * pp0 * pp1 / denom;
  const double w_ratio1 = s.f1.cdf(pt.p1) / pp1;
  const double w_ratio0 = s.f0.cdf(pt.p0) / pp0;
  return lead * (w_ratio1 - w_ratio0);
}

}  // namespace

double binding_gap(const Scenario& s, const num::Tolerance& tol) {
  const Equilibrium rev = solve_revealed(s, tol);
  return std::max(0.0, rev.prices[0] - rev.prices[1]);
}

RestrictionPoint solve_restricted(const Scenario& s, double r, const num::Tolerance& tol) {
  const double r_max = binding_gap(s, tol);
  if (!(r >= 0.0) || r > r_max + kRangeSlack) {
    std::ostringstream msg;
    msg << "solve_restricted: r = " << r << " outside the binding range [0, " << r_max
        << "]";
    throw RangeError(msg.str());
  }
  RestrictionPoint pt = solve_restricted_impl(s, std::min(r, r_max), tol);
  try {
    pt.v_const_prime = v_const_derivative_at(s, pt);
  } catch (const EngineError&) {
    // left as NaN when curvature is unavailable (atoms, kinks)
  }
  return pt;
}

double v_const_derivative(const Scenario& s, double r, const num::Tolerance& tol) {
  const double r_max = binding_gap(s, tol);
  if (!(r >= 0.0) || r > r_max + kRangeSlack) {
    std::ostringstream msg;
    msg << "v_const_derivative: r = " << r << " outside the binding range [0, " << r_max
        << "]";
    throw RangeError(msg.str());
  }
  return v_const_derivative_at(s, solve_restricted_impl(s, std::min(r, r_max), tol));
}

std::vector<RestrictionPoint> sweep_restriction(const Scenario& s, int n,
                                                ExecutionMode mode,
                                                const num::Tolerance& tol) {
  if (n < 2) throw std::invalid_argument("sweep_restriction: need n >= 2");
  const double r_max = binding_gap(s, tol);
  return map_indexed<RestrictionPoint>(static_cast<std::size_t>(n), mode,
                                       [&](std::size_t i) {
    const double r = (n == 1) ? 0.0
                              : r_max * static_cast<double>(i) /
                                    static_cast<double>(n - 1);
    RestrictionPoint pt = solve_restricted_impl(s, r, tol);
    try {
      pt.v_const_prime = v_const_derivative_at(s, pt);
    } catch (const EngineError&) {
    }
    return pt;
  });
}

ConditionReport check_quasiconvexity(const std::vector<RestrictionPoint>& points) {
  if (points.size() < 5) {
    throw std::invalid_argument("check_quasiconvexity: need a sweep with n >= 5");
  }
  constexpr double tol = 1e-9;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t worst_i = 0;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double bump = std::min(points[i].v_const - points[i - 1].v_const - tol,
                                 points[i].v_const - points[i + 1].v_const - tol);
    if (bump > worst) {
      worst = bump;
      worst_i = i;
    }
  }
  ConditionReport rep;
  rep.name = "v_const_quasiconvex";
  rep.grid_used = static_cast<int>(points.size());
  rep.lhs = worst;
  rep.rhs = 0.0;
  rep.margin = -worst;
  rep.holds = rep.margin > 0.0;
  std::ostringstream notes;
  notes << "no interior strict local maximum of v_const; closest bump at r = "
        << points[worst_i].r;
  rep.notes = notes.str();
  return rep;
}

ConditionReport check_drc(const Scenario& s, const std::vector<double>& p_grid) {
  ConditionReport rep;
  rep.name = "drc";
  rep.grid_used = static_cast<int>(p_grid.size());
  if (p_grid.size() < 2) {
    rep.notes = "grid too small";
    rep.margin = -1.0;
    return rep;
  }
  constexpr double strictness = 1e-12;
  double margin = std::numeric_limits<double>::infinity();
  std::ostringstream notes;
  try {
    for (int x = 0; x < 2; ++x) {
      const CostModel& m = (x == 0) ? s.f0 : s.f1;
      std::vector<double> w(p_grid.size());
      double max_pp = -std::numeric_limits<double>::infinity();
      bool sigma_le_one = true;
      bool alpha_ok = true;
      double prev_alpha = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid[i];
        const double pp = principal_utility_second_derivative(m, s.b, p);
        max_pp = std::max(max_pp, pp);
        w[i] = m.cdf(p) / pp;
        if (sigma_curvature(m, p) > 1.0) sigma_le_one = false;
        const double a = alpha_curvature(m, p);
        if (!(a > 0.0) || a + strictness < prev_alpha) alpha_ok = false;
        prev_alpha = a;
      }
      if (!(max_pp < 0.0)) {
        rep.holds = false;
        rep.margin = -std::fabs(max_pp) - strictness;
        rep.lhs = max_pp;
        rep.rhs = 0.0;
        notes << "ConcavityFailure: Pi_" << x << "'' reaches " << max_pp << " on the grid";
        rep.notes = notes.str();
        return rep;
      }
      double max_step = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        max_step = std::max(max_step, w[i + 1] - w[i]);
      }
      margin = std::min(margin, -max_step - strictness);
      notes << "w_" << x << " max step " << max_step << "; sufficient condition "
            << ((sigma_le_one && alpha_ok) ? "met" : "not met") << " (sigma<=1: "
            << (sigma_le_one ? "yes" : "no") << ", alpha positive nondecreasing: "
            << (alpha_ok ? "yes" : "no") << "); ";
    }
  } catch (const EngineError& err) {
    rep.holds = false;
    rep.margin = -1.0;
    rep.notes = std::string("not evaluable: ") + err.what();
    return rep;
  }
  rep.margin = margin;
  rep.holds = margin > 0.0;
  rep.lhs = -margin;
  rep.rhs = 0.0;
  rep.notes = notes.str();
  return rep;
}

}  // namespace contract_lab
