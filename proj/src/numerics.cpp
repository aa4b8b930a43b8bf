#include "contract_lab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace contract_lab::num {

namespace {

[[noreturn]] void fail_invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

double simpson(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

struct SimpsonState {
  const Fn& f;
  double eps;
  int max_depth;
};

double simpson_adapt(const SimpsonState& st, double a, double b, double fa, double fm,
                     double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  const double width = b - a;
  const bool vanishing = width <=
      4.0 * std::numeric_limits<double>::epsilon() * std::max({std::fabs(a), std::fabs(b), 1.0});
  if (std::fabs(err) <= eps || vanishing) {
    return left + right + err;
  }
  if (depth >= st.max_depth) {
    std::ostringstream msg;
    msg << "integrate: subdivision depth " << st.max_depth << " exceeded on ["
        << a << ", " << b << "]";
    throw NonConvergence(msg.str());
  }
  const double half = 0.5 * eps;
  return simpson_adapt(st, a, m, fa, flm, fm, left, half, depth + 1) +
         simpson_adapt(st, m, b, fm, frm, fb, right, half, depth + 1);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    fail_invalid("Tolerance: abs_tol > 0, rel_tol > 0, max_iter >= 1 required");
  }
}

Bracket::Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    fail_invalid("Bracket: need finite lo < hi");
  }
}

double integrate(const Fn& f, double a, double b, const Tolerance& tol) {
  tol.validate();
  if (!(a <= b)) fail_invalid("integrate: need a <= b");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  const double eps = std::max(tol.abs_tol, tol.rel_tol * std::fabs(whole));
  SimpsonState st{f, eps, tol.max_iter};
  return simpson_adapt(st, a, b, fa, fm, fb, whole, eps, 0);
}

double integrate_with_breakpoints(const Fn& f, double a, double b,
                                  std::vector<double> breakpoints, const Tolerance& tol) {
  if (!(a <= b)) fail_invalid("integrate: need a <= b");
  if (a == b) return 0.0;
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0.0;
  double lo = a;
  for (double p : breakpoints) {
    if (p <= lo || p > b) continue;
    total += integrate(f, lo, p, tol);
    lo = p;
  }
  if (lo < b) total += integrate(f, lo, b, tol);
  return total;
}

double find_root(const Fn& g, const Bracket& bracket, const Tolerance& tol) {
  tol.validate();
  double lo = bracket.lo;
  double hi = bracket.hi;
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo * ghi > 0.0) {
    std::ostringstream msg;
    msg << "find_root: no sign change over [" << lo << ", " << hi << "]";
    throw NoSignChange(msg.str());
  }
  for (int it = 0; it < tol.max_iter; ++it) {
    if (hi - lo <= tol.abs_tol) break;
    // Secant proposal, safeguarded so the step stays well inside the bracket.
    double mid = 0.5 * (lo + hi);
    double x = mid;
    const double denom = ghi - glo;
    if (denom != 0.0) {
      const double sec = (lo * ghi - hi * glo) / denom;
      const double margin = 0.01 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin) x = sec;
    }
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (glo * gx < 0.0) {
      hi = x;
      ghi = gx;
    } else {
      lo = x;
      glo = gx;
    }
  }
  if (hi - lo > tol.abs_tol) {
    throw NonConvergence("find_root: iteration cap reached before bracket collapsed");
  }
  // Endpoint with the smaller residual.
  return std::fabs(glo) <= std::fabs(ghi) ? lo : hi;
}

double finite_difference(const Fn& f, double x, double h) {
  if (!(h > 0.0)) fail_invalid("finite_difference: need h > 0");
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

double eval_checked(const Fn& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "maximize_scalar: objective non-finite at x = " << x;
    throw InvalidObjective(msg.str());
  }
  return v;
}

// Golden-section maximization of f on [lo, hi]; on ties the lower interval
// is kept so the smallest-argmax convention survives refinement.
ScalarMax golden_section(const Fn& f, double lo, double hi, const Tolerance& tol) {
  constexpr double ratio = 0.6180339887498949;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = eval_checked(f, x1);
  double f2 = eval_checked(f, x2);
  int it = 0;
  const int cap = tol.max_iter * 4;
  while (hi - lo > tol.abs_tol && it++ < cap) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = eval_checked(f, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = eval_checked(f, x2);
    }
  }
  if (hi - lo > tol.abs_tol) {
    throw NonConvergence("maximize_scalar: golden-section iteration cap reached");
  }
  return f1 >= f2 ? ScalarMax{x1, f1} : ScalarMax{x2, f2};
}

// Golden section localizes the argmax only down to the value-comparison
// noise floor (~sqrt(eps) for a quadratic top). Re-solving f' = 0 with a
// finite-difference derivative recovers the remaining digits whenever the
// objective is smooth around the refined point.
ScalarMax derivative_polish(const Fn& f, ScalarMax best, double lo, double hi,
                            const Tolerance& tol) {
  const double span = hi - lo;
  const double delta = std::max(1e-5 * span, 64.0 * tol.abs_tol);
  const double a = best.argmax - delta;
  const double b = best.argmax + delta;
  const double h = std::max(1e-7 * span, 1e-9);
  if (a - h <= lo || b + h >= hi) return best;  // boundary optimum, nothing to polish
  const auto deriv = [&](double x) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  const double da = deriv(a);
  const double db = deriv(b);
  if (!std::isfinite(da) || !std::isfinite(db) || da * db > 0.0 || !(da > db)) {
    return best;  // no bracketed interior maximum
  }
  double root;
  try {
    root = find_root(deriv, Bracket(a, b), tol);
  } catch (const EngineError&) {
    return best;
  }
  const double value = eval_checked(f, root);
  const double slack = 1e-12 * std::max(1.0, std::fabs(best.max));
  if (value + slack < best.max) return best;
  return ScalarMax{root, value};
}

}  // namespace

ScalarMax maximize_scalar(const Fn& f, const Bracket& bracket, int grid_n,
                          const Tolerance& tol) {
  tol.validate();
  if (grid_n < 3) fail_invalid("maximize_scalar: need grid_n >= 3");
  const double lo = bracket.lo;
  const double hi = bracket.hi;
  const double step = (hi - lo) / static_cast<double>(grid_n - 1);

  int best_i = 0;
  double best_v = eval_checked(f, lo);
  for (int i = 1; i < grid_n; ++i) {
    const double x = (i == grid_n - 1) ? hi : lo + step * i;
    const double v = eval_checked(f, x);
    if (v > best_v) {  // strict: ties keep the smallest argmax
      best_v = v;
      best_i = i;
    }
  }

  const double bl = std::max(lo, lo + step * (best_i - 1));
  const double bh = std::min(hi, lo + step * (best_i + 1));
  ScalarMax refined = golden_section(f, bl, bh, tol);

  const double grid_x = (best_i == grid_n - 1) ? hi : lo + step * best_i;
  if (best_v > refined.max || (best_v == refined.max && grid_x < refined.argmax)) {
    refined = ScalarMax{grid_x, best_v};
  }
  return derivative_polish(f, refined, lo, hi, tol);
}

}  // namespace contract_lab::num
