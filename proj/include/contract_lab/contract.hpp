#pragma once

#include <limits>
#include <string>
#include <vector>

#include "contract_lab/distributions.hpp"
#include "contract_lab/numerics.hpp"

namespace contract_lab {

/// One problem instance: task value b, environment probability theta = P(X=1),
/// and the conditional cost models F_0 = C|X=0, F_1 = C|X=1.
struct Scenario {
  double b;
  double theta;
  CostModel f0;
  CostModel f1;

  Scenario(double b_, double theta_, CostModel f0_, CostModel f1_);

  /// Marginal cost model (1-theta) F_0 + theta F_1.
  CostModel marginal() const;
};

enum class Regime { Concealed, Revealed, Garbled, Restricted };

std::string regime_name(Regime r);

struct Equilibrium {
  Regime regime = Regime::Concealed;
  double param = std::numeric_limits<double>::quiet_NaN();  // eps or r
  std::vector<double> prices;                               // one or two
  double principal_utility = 0.0;
  double agent_utility = 0.0;
  double welfare = 0.0;
  double quantity = 0.0;
};

// --- utilities -------------------------------------------------------------

/// Pi(p) = F(p) (b - p).
double principal_utility(const CostModel& m, double b, double p);

/// V(p) = E[(p - C) 1(C < p)].
double agent_utility(const CostModel& m, double p);

/// p + F(p)/f(p) - b; zero at interior optima of a concave objective.
double foc_residual(const CostModel& m, double b, double p);

/// eta(p) = p f(p) / F(p).
double elasticity(const CostModel& m, double p);

/// sigma(p) = F(p) f'(p) / f(p)^2 (curvature of the inverse quantity).
double sigma_curvature(const CostModel& m, double p);

/// alpha(p) = -p f'(p) / f(p) (curvature of the quantity function).
double alpha_curvature(const CostModel& m, double p);

/// L(p) = (b - p) / p.
double lerner_index(double b, double p);

/// Analytic Pi'(p) = f(p)(b - p) - F(p), using the continuous density.
double principal_utility_derivative(const CostModel& m, double b, double p);

/// Pi''(p) = -2 f(p) + f'(p)(b - p), from the closed-form density derivative.
double principal_utility_second_derivative(const CostModel& m, double b, double p);

// --- solvers ---------------------------------------------------------------

/// argmax of F(p)(b - p) over [0, min(b, support_hi)]; ties resolve to the
/// smallest maximizing price.
num::ScalarMax optimize_price(const CostModel& m, double b,
                              const num::Tolerance& tol = {});

Equilibrium solve_concealed(const Scenario& s, const num::Tolerance& tol = {});
Equilibrium solve_revealed(const Scenario& s, const num::Tolerance& tol = {});

// --- welfare ---------------------------------------------------------------

/// Total welfare at a single posted price, computed two ways: the utility sum
/// and the direct integral E[(b - C) 1(C <= p)]. Throws NonConvergence if the
/// two routes disagree beyond 1e-8.
double welfare(const Scenario& s, double p);

/// Total welfare at environment-conditional prices (p0, p1), same dual-route
/// agreement contract.
double welfare(const Scenario& s, double p0, double p1);

/// E[(b - C) 1(C <= p)] for one model, by quadrature over the continuous
/// density plus atom terms.
double welfare_integral(const CostModel& m, double b, double p);

}  // namespace contract_lab
