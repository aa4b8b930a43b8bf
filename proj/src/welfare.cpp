#include "contract_lab/welfare.hpp"

#include <algorithm>

#include "contract_lab/garbling.hpp"
#include "contract_lab/restriction.hpp"

namespace contract_lab {

std::pair<Trajectory, Trajectory> build_trajectories(const Scenario& s,
                                                     const std::string& scenario_id, int n,
                                                     ExecutionMode mode,
                                                     const num::Tolerance& tol) {
  if (n < 11) throw std::invalid_argument("build_trajectories: need n >= 11");

  TrajectoryAnchors anchors;
  const Equilibrium con = solve_concealed(s, tol);
  const Equilibrium rev = solve_revealed(s, tol);
  anchors.v_con = con.agent_utility;
  anchors.pi_con = con.principal_utility;
  anchors.v_rev = rev.agent_utility;
  anchors.pi_rev = rev.principal_utility;
  anchors.w_max = efficient_welfare(s);

  std::vector<double> eps_grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    eps_grid[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(n - 1);
  }
  // gamma = theta keeps eps = 0 exactly at the concealed anchor.
  const auto garb =
      sweep_garbling(s, s.theta, eps_grid, mode, tol, /*with_derivatives=*/false);
  Trajectory garbling;
  garbling.scenario_id = scenario_id;
  garbling.kind = TrajectoryKind::Garbling;
  garbling.anchors = anchors;
  garbling.points.reserve(garb.size());
  for (const auto& pt : garb) {
    garbling.points.push_back(TrajectoryPoint{pt.eps, pt.v_garb, pt.pi_garb, pt.w_garb});
  }

  const auto rest = sweep_restriction(s, n, mode, tol);
  Trajectory restriction;
  restriction.scenario_id = scenario_id;
  restriction.kind = TrajectoryKind::Restriction;
  restriction.anchors = anchors;
  restriction.points.reserve(rest.size());
  for (const auto& pt : rest) {
    restriction.points.push_back(
        TrajectoryPoint{pt.r, pt.v_const, pt.pi_const, pt.w_const});
  }
  return {std::move(garbling), std::move(restriction)};
}

std::vector<RevelationCell> grid_revelation_preference(
    double b, double theta, const std::vector<double>& lambda0_grid,
    const std::vector<double>& lambda1_grid, ExecutionMode mode,
    const num::Tolerance& tol) {
  for (double l : lambda0_grid) {
    if (!(l > 0.0)) throw std::invalid_argument("grid_revelation_preference: lambda0 > 0");
  }
  for (double l : lambda1_grid) {
    if (!(l > 0.0)) throw std::invalid_argument("grid_revelation_preference: lambda1 > 0");
  }
  const std::size_t n1 = lambda1_grid.size();
  return map_indexed<RevelationCell>(
      lambda0_grid.size() * n1, mode, [&](std::size_t idx) {
        const double l0 = lambda0_grid[idx / n1];
        const double l1 = lambda1_grid[idx % n1];
        const Scenario cell(b, theta, CostModel::exponential(l0),
                            CostModel::exponential(l1));
        const Equilibrium con = solve_concealed(cell, tol);
        const Equilibrium rev = solve_revealed(cell, tol);
        RevelationCell out;
        out.lambda0 = l0;
        out.lambda1 = l1;
        out.v_rev_minus_v_con = rev.agent_utility - con.agent_utility;
        out.w_con = con.welfare;
        out.w_rev = rev.welfare;
        return out;
      });
}

double efficient_welfare(const Scenario& s) {
  return (1.0 - s.theta) * welfare_integral(s.f0, s.b, s.b) +
         s.theta * welfare_integral(s.f1, s.b, s.b);
}

}  // namespace contract_lab
