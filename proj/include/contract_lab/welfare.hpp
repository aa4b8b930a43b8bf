#pragma once

#include <string>
#include <utility>
#include <vector>

#include "contract_lab/contract.hpp"
#include "contract_lab/parallel.hpp"

namespace contract_lab {

enum class TrajectoryKind { Garbling, Restriction };

struct TrajectoryPoint {
  double param = 0.0;  // eps or r
  double v = 0.0;
  double pi = 0.0;
  double w = 0.0;
};

struct TrajectoryAnchors {
  double v_con = 0.0;
  double pi_con = 0.0;
  double v_rev = 0.0;
  double pi_rev = 0.0;
  double w_max = 0.0;  // efficient welfare E[(b - C)^+]
};

struct Trajectory {
  std::string scenario_id;
  TrajectoryKind kind = TrajectoryKind::Garbling;
  std::vector<TrajectoryPoint> points;
  TrajectoryAnchors anchors;
};

/// Garbling (gamma = theta) and restriction trajectories over n points each,
/// sharing the concealed/revealed anchors and the efficient-welfare ceiling.
std::pair<Trajectory, Trajectory> build_trajectories(
    const Scenario& s, const std::string& scenario_id, int n,
    ExecutionMode mode = ExecutionMode::Parallel, const num::Tolerance& tol = {});

struct RevelationCell {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double v_rev_minus_v_con = 0.0;
  double w_con = 0.0;
  double w_rev = 0.0;
};

/// V_rev - V_con over an exponential-mean grid, row-major over lambda0 then
/// lambda1; sign changes locate the preference contour.
std::vector<RevelationCell> grid_revelation_preference(
    double b, double theta, const std::vector<double>& lambda0_grid,
    const std::vector<double>& lambda1_grid,
    ExecutionMode mode = ExecutionMode::Parallel, const num::Tolerance& tol = {});

/// First-best welfare E[(b - C)^+] = (1-theta) E[(b-C)^+ | X=0] + theta
/// E[(b-C)^+ | X=1], atoms included.
double efficient_welfare(const Scenario& s);

}  // namespace contract_lab
