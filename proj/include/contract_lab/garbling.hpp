#pragma once

#include <utility>
#include <vector>

#include "contract_lab/conditions.hpp"
#include "contract_lab/contract.hpp"
#include "contract_lab/parallel.hpp"

namespace contract_lab {

struct GarblingPoint {
  double eps = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double pi_garb = 0.0;
  double v_garb = 0.0;
  double w_garb = 0.0;
  double p0_prime = std::numeric_limits<double>::quiet_NaN();
  double p1_prime = std::numeric_limits<double>::quiet_NaN();
  double v_garb_prime_fd = std::numeric_limits<double>::quiet_NaN();
};

struct Delta {
  double value;
};

/// Equilibrium when the principal sees the garbled signal Y: each posterior
/// objective is optimized separately and utilities are weighted by P(Y=y).
/// eps=1 reproduces the revealed regime; eps=0 with gamma=theta reproduces
/// the concealed one.
Equilibrium solve_garbled(const Scenario& s, double gamma, double eps,
                          const num::Tolerance& tol = {});

/// One point per grid value, with analytic price derivatives (gamma = theta
/// = 1/2, atomless interiors) and a finite-difference utility derivative
/// (h = 1e-4, one-sided at the ends).
std::vector<GarblingPoint> sweep_garbling(const Scenario& s, double gamma,
                                          const std::vector<double>& eps_grid,
                                          ExecutionMode mode = ExecutionMode::Parallel,
                                          const num::Tolerance& tol = {},
                                          bool with_derivatives = true);

/// Closed-form dp_y/deps from the differentiated first-order conditions,
/// using analytic Pi_x' and a finite-difference posterior Pi''. Requires
/// theta = 1/2 (posteriors built at gamma = 1/2). A price pinned at the edge
/// of its search interval does not move, so its derivative is zero.
std::pair<double, double> price_derivatives(const Scenario& s, double eps,
                                            const num::Tolerance& tol = {});

/// Delta(p0, p1) = (V1(p0) - V1(p1)) - (V0(p0) - V0(p1)).
Delta agent_utility_dominance(const Scenario& s, double p0, double p1);

/// One-sided finite difference of V_garb at eps = 1 (h = 1e-4, gamma = 1/2).
double vgarb_prime_at_one(const Scenario& s, const num::Tolerance& tol = {});

/// Zero-cost-anchored garbling condition: (b-p0*)/(2-sigma0(p0*)) < g0(p0*).
ConditionReport check_garbling_zerocost(const Scenario& s, const num::Tolerance& tol = {});

/// General garbling condition against the agent utility dominance Delta;
/// also reports the sign of V_garb'(1) so sufficiency can be audited.
ConditionReport check_garbling_general(const Scenario& s, const num::Tolerance& tol = {});

struct GarblingPrimeCell {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double vgarb_prime_at_one = 0.0;
  double prop5_margin = 0.0;
};

/// (lambda0, lambda1) grid of V_garb'(1) for exponential pairs, plus the
/// general-condition margin, row-major over lambda0 then lambda1.
std::vector<GarblingPrimeCell> grid_vgarb_prime_at_one(
    double b, double theta, const std::vector<double>& lambda_grid,
    ExecutionMode mode = ExecutionMode::Parallel, const num::Tolerance& tol = {});

struct EpsArgmax {
  std::size_t grid_index = 0;  // argmax over the supplied grid
  double eps_refined = 0.0;    // golden-section refinement around it
  double v_refined = 0.0;
  bool interior = false;  // grid argmax not at the last grid point
};

/// Agent-optimal garbling level over a grid, refined locally; the grid stage
/// is mandatory because V_garb need not be unimodal.
EpsArgmax agent_optimal_eps(const Scenario& s, double gamma,
                            const std::vector<double>& eps_grid,
                            ExecutionMode mode = ExecutionMode::Parallel,
                            const num::Tolerance& tol = {});

}  // namespace contract_lab
