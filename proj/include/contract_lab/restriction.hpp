#pragma once

#include <vector>

#include "contract_lab/conditions.hpp"
#include "contract_lab/contract.hpp"
#include "contract_lab/parallel.hpp"

namespace contract_lab {

struct RestrictionPoint {
  double r = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double pi_const = 0.0;
  double v_const = 0.0;
  double w_const = 0.0;
  double v_const_prime = std::numeric_limits<double>::quiet_NaN();
};

/// Width of the binding range [0, p0* - p1*]; zero when the revealed prices
/// are not ordered that way.
double binding_gap(const Scenario& s, const num::Tolerance& tol = {});

/// Restricted price discrimination with the gap pinned at p0 = p1 + r:
/// one-dimensional maximization of (1-theta) Pi0(p1+r) + theta Pi1(p1).
/// r = 0 reproduces the concealed equilibrium, r = p0* - p1* the revealed
/// one. Throws RangeError outside the binding range.
RestrictionPoint solve_restricted(const Scenario& s, double r,
                                  const num::Tolerance& tol = {});

/// Closed-form dV_const/dr from the differentiated binding first-order
/// condition; sign equals that of w1(p1(r)) - w0(p0(r)) with
/// w_x = F_x / Pi_x''. Cross-checked against finite differences in tests.
double v_const_derivative(const Scenario& s, double r, const num::Tolerance& tol = {});

/// n equally spaced gaps spanning the binding range.
std::vector<RestrictionPoint> sweep_restriction(const Scenario& s, int n,
                                                ExecutionMode mode = ExecutionMode::Parallel,
                                                const num::Tolerance& tol = {});

/// No interior strict local maximum of v_const along a sorted sweep
/// (tolerance 1e-9): the numerical face of strict quasi-convexity.
ConditionReport check_quasiconvexity(const std::vector<RestrictionPoint>& points);

/// Decreasing-ratio condition: w_x(p) = F_x(p)/Pi_x''(p) decreasing on the
/// grid for both environments, with Pi_x'' < 0 everywhere (else the report
/// carries a concavity-failure note). Also evaluates the sufficient condition
/// sigma <= 1 with alpha positive and non-decreasing.
ConditionReport check_drc(const Scenario& s, const std::vector<double>& p_grid);

}  // namespace contract_lab
