#include "contract_lab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contract_lab/restriction.hpp"

namespace contract_lab {

namespace {

constexpr double kStrictness = 1e-12;
constexpr double kConcavityThreshold = -1e-8;

double tail_cap(const CostModel& m) { return m.quantile(0.999); }

ConditionReport drc_or_unavailable(const Scenario& s) {
  try {
    return check_drc(s, default_price_grid(s));
  } catch (const std::exception& err) {
    ConditionReport rep;
    rep.name = "drc";
    rep.margin = -1.0;
    rep.notes = std::string("not evaluable: ") + err.what();
    return rep;
  }
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    g[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

}  // namespace

std::vector<double> default_price_grid(const Scenario& s, int grid_n) {
  const double lo_support = std::max(s.f0.support_lo(), s.f1.support_lo());
  const double cap = std::max(tail_cap(s.f0), tail_cap(s.f1));
  double hi = std::min({s.b, s.f0.support_hi(), s.f1.support_hi(), cap});
  double lo = lo_support;
  const double pad = std::max(1e-6 * (hi - lo), 1e-9);
  lo += pad;
  hi -= pad;
  if (!(hi > lo)) throw std::invalid_argument("default_price_grid: empty price range");
  return linear_grid(lo, hi, grid_n);
}

ConditionReport check_mlrp(const CostModel& f0, const CostModel& f1, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("check_mlrp: need grid_n >= 16");
  if (!f0.atomless() || !f1.atomless()) {
    throw AtomPresent("check_mlrp: requires atomless models");
  }
  ConditionReport rep;
  rep.name = "mlrp";
  rep.grid_used = grid_n;

  const double lo = std::max(f0.support_lo(), f1.support_lo());
  const double cap = std::max(tail_cap(f0), tail_cap(f1));
  const double hi = std::min({f0.support_hi(), f1.support_hi(), cap});
  if (!(hi > lo)) {
    rep.margin = -1.0;
    rep.notes = "supports do not overlap";
    return rep;
  }

  // Ratio compared in log space so widely separated scales cannot overflow.
  std::vector<double> logratio(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    const double c = lo + (hi - lo) * (static_cast<double>(i) + 0.5) /
                              static_cast<double>(grid_n);
    const double d0 = f0.pdf(c);
    const double d1 = f1.pdf(c);
    if (!(d0 > 0.0) || !(d1 > 0.0)) {
      rep.margin = -1.0;
      std::ostringstream notes;
      notes << "density vanishes at c = " << c
            << " inside the overlap; ratio undefined (support mismatch)";
      rep.notes = notes.str();
      return rep;
    }
    logratio[static_cast<std::size_t>(i)] = std::log(d0) - std::log(d1);
  }
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < logratio.size(); ++i) {
    min_step = std::min(min_step, logratio[i + 1] - logratio[i]);
  }
  rep.lhs = min_step;
  rep.rhs = kStrictness;
  rep.margin = min_step - kStrictness;
  rep.holds = rep.margin > 0.0;
  rep.notes = "f0/f1 strictly increasing on the overlap grid (log scale)";
  return rep;
}

ConditionReport check_concavity(const CostModel& m, double b, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("check_concavity: need grid_n >= 16");
  ConditionReport rep;
  rep.name = "concavity";
  rep.grid_used = grid_n;
  if (!m.atomless()) {
    rep.margin = -1.0;
    rep.notes = "not applicable: model carries point masses";
    return rep;
  }
  const double h = 1e-3 * b;
  const double lo = 2.0 * h;
  const double hi = b - 2.0 * h;
  double max_pp = -std::numeric_limits<double>::infinity();
  double arg_pp = lo;
  for (int i = 0; i < grid_n; ++i) {
    const double p = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    const double pp = (principal_utility(m, b, p + h) - 2.0 * principal_utility(m, b, p) +
                       principal_utility(m, b, p - h)) /
                      (h * h);
    if (pp > max_pp) {
      max_pp = pp;
      arg_pp = p;
    }
  }
  rep.lhs = max_pp;
  rep.rhs = kConcavityThreshold;
  rep.margin = kConcavityThreshold - max_pp;
  rep.holds = rep.margin > 0.0;
  std::ostringstream notes;
  notes << "max second difference " << max_pp << " at p = " << arg_pp;
  rep.notes = notes.str();
  return rep;
}

ConditionReport check_prop1(const Scenario& s, const num::Tolerance& tol) {
  if (!s.f1.is_point_mass_at_zero()) {
    throw WrongAnchoring("check_prop1: f1 must be the point mass at zero");
  }
  const double theta = s.theta;
  const double p0_star = optimize_price(s.f0, s.b, tol).argmax;
  const double eta0 = elasticity(s.f0, p0_star);
  const double p_mix = (1.0 - theta) * p0_star;
  const double eta_mix = p_mix * (1.0 - theta) * s.f0.pdf(p_mix) /
                         ((1.0 - theta) * s.f0.cdf(p_mix) + theta);

  ConditionReport rep;
  rep.name = "prop1_zerocost_concealment";
  rep.lhs = theta;
  rep.rhs = (1.0 - theta) / eta_mix - 1.0 / eta0;
  rep.margin = rep.lhs - rep.rhs;
  rep.holds = rep.margin > 0.0;

  // Precondition audit: F0 concave (density non-increasing) and F0/f0
  // strictly increasing. Evaluated, recorded, never used to veto the
  // inequality itself.
  bool concave_cdf = true;
  bool ratio_increasing = true;
  const int n = 512;
  const double lo = s.f0.support_lo() + 1e-9;
  const double hi = std::min(s.b, tail_cap(s.f0));
  double prev_f = std::numeric_limits<double>::infinity();
  double prev_ratio = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double p = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / n;
    const double f = s.f0.pdf(p);
    if (f > prev_f + kStrictness) concave_cdf = false;
    prev_f = f;
    if (f > 0.0) {
      const double ratio = s.f0.cdf(p) / f;
      if (ratio + kStrictness < prev_ratio) ratio_increasing = false;
      prev_ratio = ratio;
    }
  }
  std::ostringstream notes;
  notes << "holds => V_con > V_rev (sufficiency only); p0*=" << p0_star
        << "; precondition F0 concave: " << (concave_cdf ? "yes" : "NO")
        << "; precondition F0/f0 increasing: " << (ratio_increasing ? "yes" : "NO");
  rep.notes = notes.str();
  rep.grid_used = n;
  return rep;
}

double psi(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("psi: need theta in (0, 1)");
  }
  const double base = 1.0 / (1.0 - theta);
  const double denom =
      std::pow(base, 1.0 / theta) - std::pow(base, (1.0 - theta) / theta) - theta;
  return theta / denom;
}

GatedCheck check_prop2(const Scenario& s, const num::Tolerance& tol) {
  const Equilibrium rev = solve_revealed(s, tol);
  const double p0 = rev.prices[0];
  const double p1 = rev.prices[1];
  GatedCheck out;
  out.report.name = "prop2_acv_concealment";
  out.report.lhs = (1.0 - s.theta) * (s.b - p0) / (2.0 - sigma_curvature(s.f0, p0));
  out.report.rhs = s.theta * (s.b - p1) / (2.0 - sigma_curvature(s.f1, p1));
  out.report.margin = out.report.rhs - out.report.lhs;
  out.report.holds = out.report.margin > 0.0;

  out.drc = drc_or_unavailable(s);
  out.concavity0 = check_concavity(s.f0, s.b);
  out.concavity1 = check_concavity(s.f1, s.b);
  out.prerequisites = out.drc.holds && out.concavity0.holds && out.concavity1.holds;
  out.verdict = out.prerequisites && out.report.holds;
  std::ostringstream notes;
  notes << "with DRC+concavity, holds => V_con > V_rev; prerequisites "
        << (out.prerequisites ? "pass" : "FAIL") << "; verdict sufficient-for-concealment: "
        << (out.verdict ? "yes" : "no");
  out.report.notes = notes.str();
  return out;
}

GatedCheck check_prop3(const Scenario& s, const num::Tolerance& tol) {
  const Equilibrium con = solve_concealed(s, tol);
  const double p = con.prices[0];
  const double L = lerner_index(s.b, p);
  const double a0 = alpha_curvature(s.f0, p);
  const double a1 = alpha_curvature(s.f1, p);
  GatedCheck out;
  out.report.name = "prop3_acv_revelation";
  out.report.lhs = (2.0 + L * a1) / (2.0 + L * a0);
  out.report.rhs = (s.theta * s.f1.cdf(p) / s.f1.pdf(p)) /
                   ((1.0 - s.theta) * s.f0.cdf(p) / s.f0.pdf(p));
  out.report.margin = out.report.lhs - out.report.rhs;
  out.report.holds = out.report.margin > 0.0;

  out.drc = drc_or_unavailable(s);
  out.concavity0 = check_concavity(s.f0, s.b);
  out.concavity1 = check_concavity(s.f1, s.b);
  out.prerequisites = out.drc.holds && out.concavity0.holds && out.concavity1.holds;
  out.verdict = out.prerequisites && out.report.holds;
  std::ostringstream notes;
  notes << "with DRC+concavity, holds => V_con < V_rev; prerequisites "
        << (out.prerequisites ? "pass" : "FAIL") << "; verdict sufficient-for-revelation: "
        << (out.verdict ? "yes" : "no") << "; evaluated at p* = " << p;
  out.report.notes = notes.str();
  return out;
}

ConditionReport check_quantity_lemma(const Scenario& s, const num::Tolerance& tol) {
  const Equilibrium con = solve_concealed(s, tol);
  const Equilibrium rev = solve_revealed(s, tol);
  ConditionReport rep;
  rep.name = "quantity_lemma";
  rep.lhs = rev.quantity;
  rep.rhs = con.quantity;
  // Contrapositive audit: welfare may only rise if quantity rises.
  const double welfare_slack = (con.welfare + 1e-9) - rev.welfare;
  const double quantity_gain = rev.quantity - (con.quantity - 1e-12);
  rep.margin = std::max(welfare_slack, quantity_gain);
  rep.holds = rep.margin > 0.0;
  std::ostringstream notes;
  notes << "W_con=" << con.welfare << " W_rev=" << rev.welfare
        << " q_con=" << con.quantity << " q_rev=" << rev.quantity
        << "; welfare increase without quantity increase would violate the lemma";
  rep.notes = notes.str();
  return rep;
}

}  // namespace contract_lab
