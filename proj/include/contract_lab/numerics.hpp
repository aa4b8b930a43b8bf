#pragma once

#include <functional>
#include <vector>

#include "contract_lab/errors.hpp"

namespace contract_lab::num {

using Fn = std::function<double(double)>;

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iter = 200;

  void validate() const;
};

struct Bracket {
  double lo;
  double hi;

  Bracket(double lo_, double hi_);
};

/// Adaptive Simpson quadrature of f over [a, b]. The estimated error is
/// kept below max(abs_tol, rel_tol * |result|). Integrands must be smooth
/// on the interval; split at breakpoints first (see below).
double integrate(const Fn& f, double a, double b, const Tolerance& tol = {});

/// Splits [a, b] at the given breakpoints and integrates panel by panel,
/// so kinks at distribution support endpoints never cross a panel.
double integrate_with_breakpoints(const Fn& f, double a, double b,
                                  std::vector<double> breakpoints,
                                  const Tolerance& tol = {});

/// Bracketed root of g, bisection with secant acceleration. Requires
/// g(lo) * g(hi) <= 0; converges to bracket width <= abs_tol.
double find_root(const Fn& g, const Bracket& bracket, const Tolerance& tol = {});

struct ScalarMax {
  double argmax;
  double max;
};

/// Coarse scan over grid_n equally spaced points, golden-section refinement
/// of the best three-point bracket, then a derivative polish so the argmax
/// of a smooth objective is pinned well below the value-comparison noise
/// floor. Grid ties break toward the smallest argmax. Deterministic.
ScalarMax maximize_scalar(const Fn& f, const Bracket& bracket, int grid_n = 2048,
                          const Tolerance& tol = {});

/// Central difference (f(x+h) - f(x-h)) / (2h).
double finite_difference(const Fn& f, double x, double h);

inline constexpr int kDefaultGridN = 2048;

}  // namespace contract_lab::num
