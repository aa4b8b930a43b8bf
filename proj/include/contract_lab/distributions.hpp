#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "contract_lab/errors.hpp"
#include "contract_lab/numerics.hpp"

namespace contract_lab {

// ---------------------------------------------------------------------------
// Declarative cost-distribution families. All supports live in [0, inf).
// ---------------------------------------------------------------------------

struct ExponentialSpec {
  double mean;  // scale lambda > 0, also the mean
};

struct WeibullSpec {
  double scale;  // lambda > 0
  double shape;  // k > 0
};

struct UniformSpec {
  double lo;
  double hi;  // lo < hi, lo >= 0
};

struct PointMassSpec {
  double atom;  // c0 >= 0
};

using DistributionSpec =
    std::variant<ExponentialSpec, WeibullSpec, UniformSpec, PointMassSpec>;

void validate(const DistributionSpec& spec);  // throws std::invalid_argument
std::string family_name(const DistributionSpec& spec);
bool spec_equal(const DistributionSpec& a, const DistributionSpec& b);

struct Atom {
  double location;
  double mass;
};

// ---------------------------------------------------------------------------
// Evaluatable cost model: closed-form CDF / PDF / PDF-derivative, restricted
// mean g(p) = int_0^p (1-F), and the agent partial value V(p) = int_0^p F.
// Immutable after construction; copies share the implementation.
// ---------------------------------------------------------------------------
class CostModel {
 public:
  static CostModel from_spec(const DistributionSpec& spec);
  static CostModel exponential(double mean);
  static CostModel weibull(double scale, double shape);
  static CostModel uniform(double lo, double hi);
  static CostModel point_mass(double atom);

  /// F(c) = P(C <= c); right-continuous, atoms included.
  double cdf(double c) const;

  /// Density of the continuous part; throws AtomAtPoint at an atom.
  double pdf(double c) const;

  /// f'(c); throws AtomAtPoint at atoms and NotDifferentiable within 1e-9
  /// of a uniform support endpoint.
  double pdf_derivative(double c) const;

  /// Density of the continuous part with no atom guard. Used by quadrature
  /// routines that handle atoms separately.
  double continuous_pdf(double c) const;

  /// g(p) = int_0^p (1 - F(c)) dc; closed form where available, adaptive
  /// quadrature otherwise (Weibull). An atom at c0 truncates 1-F there, so
  /// g(p) = min(p, c0) for a pure point mass.
  double restricted_mean(double p) const;

  /// V(p) = E[(p - C) 1(C < p)] = int_0^p F(c) dc; an atom exactly at p
  /// contributes zero surplus.
  double partial_value(double p) const;

  double mean() const;
  double support_lo() const;
  double support_hi() const;  // +inf for unbounded families
  const std::vector<Atom>& atoms() const;
  bool atomless() const;

  /// Sorted locations where the density or its derivative may jump
  /// (support endpoints, atoms). Quadrature callers split panels here.
  std::vector<double> breakpoints() const;

  /// Smallest c with F(c) >= q, for q in (0, 1).
  double quantile(double q) const;

  bool is_point_mass_at_zero() const;

  struct Impl;  // opaque; defined in distributions.cpp

 private:
  explicit CostModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend CostModel make_mixture(const std::vector<std::pair<double, CostModel>>&);
};

/// Weighted combination of cost models; weights must be in [0,1] and sum
/// to 1 within 1e-12. Every functional distributes linearly.
CostModel make_mixture(const std::vector<std::pair<double, CostModel>>& parts);

struct GarbledPair {
  CostModel g0;
  CostModel g1;
  double prob_y1;
};

/// Posterior cost models (C | Y = y) for the randomized-response channel
/// Y = X with probability eps, otherwise an independent Bernoulli(gamma)
/// draw. Posterior weights come from Bayes' rule; at gamma = theta = 1/2
/// this reduces to G_0 = (1+eps)/2 F_0 + (1-eps)/2 F_1 and its mirror.
GarbledPair make_garbled_pair(const CostModel& f0, const CostModel& f1, double theta,
                              double gamma, double eps);

}  // namespace contract_lab
