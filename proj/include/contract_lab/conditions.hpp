#pragma once

#include <string>
#include <vector>

#include "contract_lab/contract.hpp"

namespace contract_lab {

/// Uniform envelope for every inequality the engine can evaluate. margin is
/// oriented so that holds <=> margin > 0; notes carry precondition flags and
/// the sufficiency direction.
struct ConditionReport {
  std::string name;
  bool holds = false;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::string notes;
  int grid_used = 0;
};

/// f0/f1 likelihood ratio strictly increasing on a grid over the support
/// intersection, capped at the 99.9% quantile of the wider model. Compared in
/// log space. Throws AtomPresent... (AtomAtPoint) when either model has atoms.
ConditionReport check_mlrp(const CostModel& f0, const CostModel& f1, int grid_n = 512);

/// Strict concavity of Pi(p) = F(p)(b-p), audited by second differences on a
/// grid over (0, b); holds iff the largest second difference is < -1e-8.
ConditionReport check_concavity(const CostModel& m, double b, int grid_n = 512);

/// Zero-cost-anchored concealment condition: theta versus the elasticity gap
/// evaluated at p0*. Requires f1 to be the point mass at zero.
ConditionReport check_prop1(const Scenario& s, const num::Tolerance& tol = {});

/// Exponential threshold map theta -> psi(theta); the anchored concealment
/// condition for Exp(lambda0) is equivalent to lambda0 < b psi(theta).
double psi(double theta);

/// An inequality check together with its prerequisite audits. verdict is the
/// inequality AND the prerequisites; the sufficiency claims only apply then.
struct GatedCheck {
  ConditionReport report;
  ConditionReport drc;
  ConditionReport concavity0;
  ConditionReport concavity1;
  bool prerequisites = false;
  bool verdict = false;
};

/// Curvature-gap concealment condition at the revealed prices.
GatedCheck check_prop2(const Scenario& s, const num::Tolerance& tol = {});

/// Curvature-ratio revelation condition at the concealed price.
GatedCheck check_prop3(const Scenario& s, const num::Tolerance& tol = {});

/// Welfare-vs-quantity audit: if quantity does not increase under revelation,
/// welfare must not increase either (contrapositive asserted).
ConditionReport check_quantity_lemma(const Scenario& s, const num::Tolerance& tol = {});

/// Default diagnostic grid over the joint support interior, capped at b and
/// the 99.9% quantiles.
std::vector<double> default_price_grid(const Scenario& s, int grid_n = 512);

}  // namespace contract_lab
