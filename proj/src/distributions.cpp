#include "contract_lab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace contract_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUniformEdgeWindow = 1e-9;

[[noreturn]] void fail_invalid(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

void validate(const DistributionSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          if (!(s.mean > 0.0) || !std::isfinite(s.mean)) {
            fail_invalid("exponential: mean must be positive and finite");
          }
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          if (!(s.scale > 0.0) || !std::isfinite(s.scale)) {
            fail_invalid("weibull: scale must be positive and finite");
          }
          if (!(s.shape > 0.0) || !std::isfinite(s.shape)) {
            fail_invalid("weibull: shape must be positive and finite");
          }
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi)) {
            fail_invalid("uniform: need finite lo < hi");
          }
          if (s.lo < 0.0) fail_invalid("uniform: support must lie in [0, inf)");
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          if (!(s.atom >= 0.0) || !std::isfinite(s.atom)) {
            fail_invalid("point_mass: atom must be finite and >= 0");
          }
        }
      },
      spec);
}

std::string family_name(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) return "exponential";
        if constexpr (std::is_same_v<T, WeibullSpec>) return "weibull";
        if constexpr (std::is_same_v<T, UniformSpec>) return "uniform";
        return "point_mass";
      },
      spec);
}

bool spec_equal(const DistributionSpec& a, const DistributionSpec& b) {
  if (a.index() != b.index()) return false;
  if (const auto* e = std::get_if<ExponentialSpec>(&a)) {
    return e->mean == std::get<ExponentialSpec>(b).mean;
  }
  if (const auto* w = std::get_if<WeibullSpec>(&a)) {
    const auto& o = std::get<WeibullSpec>(b);
    return w->scale == o.scale && w->shape == o.shape;
  }
  if (const auto* u = std::get_if<UniformSpec>(&a)) {
    const auto& o = std::get<UniformSpec>(b);
    return u->lo == o.lo && u->hi == o.hi;
  }
  return std::get<PointMassSpec>(a).atom == std::get<PointMassSpec>(b).atom;
}

// ---------------------------------------------------------------------------

struct MixtureData {
  std::vector<std::pair<double, CostModel>> parts;
};

struct CostModel::Impl {
  std::variant<ExponentialSpec, WeibullSpec, UniformSpec, PointMassSpec, MixtureData> fam;
  std::vector<Atom> atom_list;
  double lo = 0.0;
  double hi = kInf;
  double mean_value = 0.0;
};

namespace {

using Impl = CostModel::Impl;

std::shared_ptr<const Impl> make_impl(
    std::variant<ExponentialSpec, WeibullSpec, UniformSpec, PointMassSpec, MixtureData> fam) {
  auto impl = std::make_shared<Impl>();
  impl->fam = std::move(fam);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          impl->lo = 0.0;
          impl->hi = kInf;
          impl->mean_value = s.mean;
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          impl->lo = 0.0;
          impl->hi = kInf;
          impl->mean_value = s.scale * std::tgamma(1.0 + 1.0 / s.shape);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          impl->lo = s.lo;
          impl->hi = s.hi;
          impl->mean_value = 0.5 * (s.lo + s.hi);
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          impl->lo = s.atom;
          impl->hi = s.atom;
          impl->mean_value = s.atom;
          impl->atom_list = {Atom{s.atom, 1.0}};
        } else {
          double lo = kInf, hi = 0.0, mean = 0.0;
          std::vector<Atom> atoms;
          for (const auto& [w, m] : s.parts) {
            lo = std::min(lo, m.support_lo());
            hi = std::max(hi, m.support_hi());
            mean += w * m.mean();
            for (const Atom& a : m.atoms()) {
              auto it = std::find_if(atoms.begin(), atoms.end(),
                                     [&](const Atom& x) { return x.location == a.location; });
              if (it == atoms.end()) {
                atoms.push_back(Atom{a.location, w * a.mass});
              } else {
                it->mass += w * a.mass;
              }
            }
          }
          std::sort(atoms.begin(), atoms.end(),
                    [](const Atom& a, const Atom& b) { return a.location < b.location; });
          impl->lo = lo;
          impl->hi = hi;
          impl->mean_value = mean;
          impl->atom_list = std::move(atoms);
        }
      },
      impl->fam);
  return impl;
}

double exp_cdf(const ExponentialSpec& s, double c) {
  return c <= 0.0 ? 0.0 : -std::expm1(-c / s.mean);
}

double weibull_cdf(const WeibullSpec& s, double c) {
  return c <= 0.0 ? 0.0 : -std::expm1(-std::pow(c / s.scale, s.shape));
}

// Upper integration limit past which the Weibull survival function
// underflows to zero.
double weibull_tail_cut(const WeibullSpec& s) {
  return s.scale * std::pow(700.0, 1.0 / s.shape);
}

}  // namespace

CostModel CostModel::from_spec(const DistributionSpec& spec) {
  validate(spec);
  return std::visit([](const auto& s) { return CostModel(make_impl(s)); }, spec);
}

CostModel CostModel::exponential(double mean) {
  return from_spec(ExponentialSpec{mean});
}
CostModel CostModel::weibull(double scale, double shape) {
  return from_spec(WeibullSpec{scale, shape});
}
CostModel CostModel::uniform(double lo, double hi) {
  return from_spec(UniformSpec{lo, hi});
}
CostModel CostModel::point_mass(double atom) {
  return from_spec(PointMassSpec{atom});
}

double CostModel::cdf(double c) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return exp_cdf(s, c);
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          return weibull_cdf(s, c);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          if (c <= s.lo) return 0.0;
          if (c >= s.hi) return 1.0;
          return (c - s.lo) / (s.hi - s.lo);
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          return c >= s.atom ? 1.0 : 0.0;
        } else {
          double acc = 0.0;
          for (const auto& [w, m] : s.parts) acc += w * m.cdf(c);
          return acc;
        }
      },
      impl_->fam);
}

double CostModel::continuous_pdf(double c) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return c < 0.0 ? 0.0 : std::exp(-c / s.mean) / s.mean;
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          if (c < 0.0) return 0.0;
          const double k = s.shape;
          if (c == 0.0) {
            if (k > 1.0) return 0.0;
            if (k == 1.0) return 1.0 / s.scale;
            return kInf;
          }
          const double z = std::pow(c / s.scale, k);
          return (k / c) * z * std::exp(-z);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          return (c >= s.lo && c <= s.hi) ? 1.0 / (s.hi - s.lo) : 0.0;
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          return 0.0;
        } else {
          double acc = 0.0;
          for (const auto& [w, m] : s.parts) acc += w * m.continuous_pdf(c);
          return acc;
        }
      },
      impl_->fam);
}

double CostModel::pdf(double c) const {
  for (const Atom& a : impl_->atom_list) {
    if (c == a.location) {
      std::ostringstream msg;
      msg << "pdf: atom of mass " << a.mass << " at c = " << c;
      throw AtomAtPoint(msg.str());
    }
  }
  return continuous_pdf(c);
}

double CostModel::pdf_derivative(double c) const {
  for (const Atom& a : impl_->atom_list) {
    if (c == a.location) {
      std::ostringstream msg;
      msg << "pdf_derivative: atom at c = " << c;
      throw AtomAtPoint(msg.str());
    }
  }
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return c < 0.0 ? 0.0 : -std::exp(-c / s.mean) / (s.mean * s.mean);
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          if (c < 0.0) return 0.0;
          const double k = s.shape;
          if (c == 0.0) {
            if (k == 1.0) return -1.0 / (s.scale * s.scale);
            if (k == 2.0) return 2.0 / (s.scale * s.scale);
            if (k > 2.0) return 0.0;
            throw NotDifferentiable("pdf_derivative: weibull density derivative unbounded at 0");
          }
          const double z = std::pow(c / s.scale, k);
          const double f = (k / c) * z * std::exp(-z);
          return f * ((k - 1.0) / c - (k / c) * z);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          if (std::fabs(c - s.lo) < kUniformEdgeWindow ||
              std::fabs(c - s.hi) < kUniformEdgeWindow) {
            std::ostringstream msg;
            msg << "pdf_derivative: uniform density kink at c = " << c;
            throw NotDifferentiable(msg.str());
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          return 0.0;
        } else {
          double acc = 0.0;
          for (const auto& [w, m] : s.parts) acc += w * m.pdf_derivative(c);
          return acc;
        }
      },
      impl_->fam);
}

double CostModel::restricted_mean(double p) const {
  if (!(p >= 0.0)) fail_invalid("restricted_mean: need p >= 0");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return s.mean * exp_cdf(s, p);
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          const double hi = std::min(p, weibull_tail_cut(s));
          if (hi <= 0.0) return 0.0;
          return num::integrate(
              [&](double c) { return c <= 0.0 ? 1.0 : std::exp(-std::pow(c / s.scale, s.shape)); },
              0.0, hi);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          if (p <= s.lo) return p;
          const double w = s.hi - s.lo;
          if (p >= s.hi) return 0.5 * (s.lo + s.hi);
          const double t = p - s.lo;
          return s.lo + t - 0.5 * t * t / w;
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          return std::min(p, s.atom);
        } else {
          double acc = 0.0;
          for (const auto& [w, m] : s.parts) acc += w * m.restricted_mean(p);
          return acc;
        }
      },
      impl_->fam);
}

double CostModel::partial_value(double p) const {
  if (!(p >= 0.0)) fail_invalid("partial_value: need p >= 0");
  // int_0^p F = p - int_0^p (1 - F); the atom-at-p convention (zero surplus)
  // falls out of the restricted mean.
  return p - restricted_mean(p);
}

double CostModel::mean() const { return impl_->mean_value; }
double CostModel::support_lo() const { return impl_->lo; }
double CostModel::support_hi() const { return impl_->hi; }
const std::vector<Atom>& CostModel::atoms() const { return impl_->atom_list; }
bool CostModel::atomless() const { return impl_->atom_list.empty(); }

std::vector<double> CostModel::breakpoints() const {
  std::vector<double> pts;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MixtureData>) {
          for (const auto& [w, m] : s.parts) {
            (void)w;
            for (double b : m.breakpoints()) pts.push_back(b);
          }
        } else {
          if (std::isfinite(impl_->lo)) pts.push_back(impl_->lo);
          if (std::isfinite(impl_->hi)) pts.push_back(impl_->hi);
        }
      },
      impl_->fam);
  for (const Atom& a : impl_->atom_list) pts.push_back(a.location);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double CostModel::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) fail_invalid("quantile: need q in (0, 1)");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ExponentialSpec>) {
          return -s.mean * std::log1p(-q);
        } else if constexpr (std::is_same_v<T, WeibullSpec>) {
          return s.scale * std::pow(-std::log1p(-q), 1.0 / s.shape);
        } else if constexpr (std::is_same_v<T, UniformSpec>) {
          return s.lo + q * (s.hi - s.lo);
        } else if constexpr (std::is_same_v<T, PointMassSpec>) {
          return s.atom;
        } else {
          double lo = kInf, hi = 0.0;
          for (const auto& [w, m] : s.parts) {
            (void)w;
            const double qm = m.quantile(q);
            lo = std::min(lo, qm);
            hi = std::max(hi, qm);
          }
          if (cdf(lo) >= q || hi - lo < 1e-300) return lo;
          num::Tolerance tol;
          tol.abs_tol = 1e-12;
          return num::find_root([&](double c) { return cdf(c) - q; }, num::Bracket(lo, hi), tol);
        }
      },
      impl_->fam);
}

bool CostModel::is_point_mass_at_zero() const {
  const auto* pm = std::get_if<PointMassSpec>(&impl_->fam);
  return pm != nullptr && pm->atom == 0.0;
}

CostModel make_mixture(const std::vector<std::pair<double, CostModel>>& parts) {
  if (parts.empty()) throw BadWeights("make_mixture: need at least one component");
  double sum = 0.0;
  MixtureData data;
  for (const auto& [w, m] : parts) {
    if (!(w >= 0.0 && w <= 1.0)) throw BadWeights("make_mixture: weights must lie in [0, 1]");
    sum += w;
    if (w > 0.0) data.parts.emplace_back(w, m);
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "make_mixture: weights sum to " << sum << ", expected 1";
    throw BadWeights(msg.str());
  }
  if (data.parts.empty()) throw BadWeights("make_mixture: all weights zero");
  return CostModel(make_impl(std::move(data)));
}

GarbledPair make_garbled_pair(const CostModel& f0, const CostModel& f1, double theta,
                              double gamma, double eps) {
  if (!(theta >= 0.0 && theta <= 1.0)) fail_invalid("make_garbled_pair: theta in [0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail_invalid("make_garbled_pair: gamma in [0, 1]");
  if (!(eps >= 0.0 && eps <= 1.0)) fail_invalid("make_garbled_pair: eps in [0, 1]");

  // Channel P(Y = y | X = x) for Y = X w.p. eps, else xi ~ Bernoulli(gamma).
  const double p_y0_x0 = eps + (1.0 - eps) * (1.0 - gamma);
  const double p_y0_x1 = (1.0 - eps) * (1.0 - gamma);
  const double p_y1_x0 = (1.0 - eps) * gamma;
  const double p_y1_x1 = eps + (1.0 - eps) * gamma;

  const double a0 = (1.0 - theta) * p_y0_x0;
  const double b0 = theta * p_y0_x1;
  const double a1 = (1.0 - theta) * p_y1_x0;
  const double b1 = theta * p_y1_x1;
  const double p_y0 = a0 + b0;
  const double p_y1 = a1 + b1;
  if (!(p_y0 > 0.0) || !(p_y1 > 0.0)) {
    throw DegeneratePosterior("make_garbled_pair: P(Y = y) = 0 for some y");
  }

  GarbledPair out{make_mixture({{a0 / p_y0, f0}, {b0 / p_y0, f1}}),
                  make_mixture({{a1 / p_y1, f0}, {b1 / p_y1, f1}}), p_y1};
  return out;
}

}  // namespace contract_lab
