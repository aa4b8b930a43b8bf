#include "contract_lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "contract_lab/battery.hpp"
#include "contract_lab/conditions.hpp"
#include "contract_lab/config.hpp"
#include "contract_lab/garbling.hpp"
#include "contract_lab/io.hpp"
#include "contract_lab/restriction.hpp"
#include "contract_lab/welfare.hpp"

namespace contract_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Runner {
  std::vector<InvariantResult> results;
  ExecutionMode mode = ExecutionMode::Parallel;

  void add(const std::string& name, double margin, const std::string& detail) {
    results.push_back({name, margin > 0.0, margin, detail});
  }

  void run(const std::string& name, const std::function<std::pair<double, std::string>()>& fn) {
    try {
      const auto [margin, detail] = fn();
      add(name, margin, detail);
    } catch (const std::exception& err) {
      add(name, -1.0, std::string("exception: ") + err.what());
    }
  }
};

// Per-scenario assumption gates, computed once.
struct Gates {
  bool mlrp = false;
  bool concave = false;  // both environments pass the concavity audit
  bool drc = false;
};

Gates gates_for(const Scenario& s) {
  Gates g;
  try {
    g.mlrp = check_mlrp(s.f0, s.f1).holds;
  } catch (const std::exception&) {
    g.mlrp = false;
  }
  g.concave = check_concavity(s.f0, s.b).holds && check_concavity(s.f1, s.b).holds;
  try {
    g.drc = check_drc(s, default_price_grid(s)).holds;
  } catch (const std::exception&) {
    g.drc = false;
  }
  return g;
}

std::vector<double> eps_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
  return g;
}

double rel_gap(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale < 1e-6) return 0.0;  // both negligible; relative comparison moot
  return std::fabs(a - b) / scale;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// numerics
// ---------------------------------------------------------------------------

void verify_numerics(Runner& r) {
  r.run("numerics/integrate_cubic_exact", [] {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
      double a = coef(rng), b = coef(rng) + 3.0;
      if (a > b) std::swap(a, b);
      const auto f = [&](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
      const auto F = [&](double x) {
        return x * (c0 + x * (c1 / 2 + x * (c2 / 3 + x * c3 / 4)));
      };
      worst = std::max(worst, std::fabs(num::integrate(f, a, b) - (F(b) - F(a))));
    }
    return std::make_pair(1e-9 - worst, "max error " + fmt(worst) + " over 40 cubics");
  });

  r.run("numerics/find_root_residual", [] {
    const std::vector<num::Fn> fns = {
        [](double x) { return std::atan(x) - 0.4; },
        [](double x) { return x * x * x - 0.1; },
        [](double x) { return std::exp(x) - 2.1; },
    };
    double worst = 0.0;
    for (const auto& g : fns) {
      const double root = num::find_root(g, num::Bracket(-1.0, 2.0));
      worst = std::max(worst, std::fabs(g(root)));
    }
    return std::make_pair(1e-9 - worst, "max residual " + fmt(worst));
  });

  r.run("numerics/maximize_matches_fd_stationary_point", [] {
    const std::vector<num::Fn> fns = {
        [](double x) { return -(x - 0.37) * (x - 0.37); },
        [](double x) { return std::log(1.0 + x) - 0.9 * x; },
        [](double x) { return -std::cosh(x - 0.61); },
    };
    double worst = 0.0;
    for (const auto& f : fns) {
      const auto best = num::maximize_scalar(f, num::Bracket(0.0, 1.5));
      const auto deriv = [&](double x) { return (f(x + 1e-6) - f(x - 1e-6)) / 2e-6; };
      const double root =
          num::find_root(deriv, num::Bracket(best.argmax - 1e-3, best.argmax + 1e-3));
      worst = std::max(worst, std::fabs(best.argmax - root));
    }
    return std::make_pair(1e-9 - worst, "max |argmax - stationary| " + fmt(worst));
  });

  r.run("numerics/deterministic_reruns", [] {
    const auto f = [](double p) { return (p - 0.2) * (1.3 - p) + 0.01 * std::sin(30 * p); };
    const auto a = num::maximize_scalar(f, num::Bracket(0.0, 1.3));
    const auto b = num::maximize_scalar(f, num::Bracket(0.0, 1.3));
    const bool same = a.argmax == b.argmax && a.max == b.max &&
                      num::integrate(f, 0.0, 1.3) == num::integrate(f, 0.0, 1.3);
    return std::make_pair(same ? 1.0 : -1.0, std::string("bit-identical reruns"));
  });
}

// ---------------------------------------------------------------------------
// distributions
// ---------------------------------------------------------------------------

void verify_distributions(Runner& r) {
  const std::vector<CostModel> models = {
      CostModel::exponential(0.5), CostModel::exponential(0.05),
      CostModel::weibull(1.0, 2.0), CostModel::weibull(0.5, 0.7),
      CostModel::uniform(0.2, 1.3)};

  r.run("distributions/pdf_matches_cdf_derivative", [&] {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> cs(1e-3, 2.5);
    const double h = 1e-6;
    double worst = 0.0;
    for (const auto& m : models) {
      for (int i = 0; i < 1000; ++i) {
        const double c = cs(rng);
        bool near_kink = false;
        for (double b : m.breakpoints()) {
          if (std::fabs(c - b) < 10 * h) near_kink = true;
        }
        if (near_kink) continue;
        const double fd = num::finite_difference([&](double x) { return m.cdf(x); }, c, h);
        worst = std::max(worst, std::fabs(fd - m.pdf(c)));
      }
    }
    return std::make_pair(1e-5 - worst, "max |F' - f| " + fmt(worst) + " over 1000 draws/family");
  });

  r.run("distributions/partial_value_derivative_is_cdf", [&] {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ps(0.01, 2.5);
    double worst = 0.0;
    for (const auto& m : models) {
      for (int i = 0; i < 100; ++i) {
        const double p = ps(rng);
        const double fd =
            num::finite_difference([&](double x) { return m.partial_value(x); }, p, 1e-6);
        worst = std::max(worst, std::fabs(fd - m.cdf(p)));
      }
    }
    return std::make_pair(1e-6 - worst, "max |V' - F| " + fmt(worst) + " over 100 draws/family");
  });

  r.run("distributions/restricted_mean_monotone_bounded", [&] {
    double margin = kInf;
    auto all = models;
    all.push_back(CostModel::point_mass(0.4));
    for (const auto& m : all) {
      double prev = 0.0;
      for (int i = 1; i <= 80; ++i) {
        const double p = 0.05 * i;
        const double g = m.restricted_mean(p);
        margin = std::min(margin, g - prev + 1e-12);
        margin = std::min(margin, m.mean() + 1e-9 - g);
        prev = g;
      }
    }
    return std::make_pair(margin, "nondecreasing in p, bounded by the mean");
  });

  r.run("distributions/mixture_linearity", [&] {
    const auto mix = make_mixture({{0.3, models[0]}, {0.45, models[2]}, {0.25, models[4]}});
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> cs(0.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double c = cs(rng);
      const double direct =
          0.3 * models[0].cdf(c) + 0.45 * models[2].cdf(c) + 0.25 * models[4].cdf(c);
      worst = std::max(worst, std::fabs(mix.cdf(c) - direct));
    }
    return std::make_pair(1e-12 - worst, "max linearity gap " + fmt(worst));
  });

  r.run("distributions/garbled_pair_total_law", [&] {
    double worst = 0.0;
    const auto& f0 = models[0];
    const auto f1 = CostModel::uniform(0.0, 1.0);
    for (double theta : {0.2, 0.5, 0.8}) {
      for (double gamma : {0.1, 0.5, 0.9}) {
        for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const auto pair = make_garbled_pair(f0, f1, theta, gamma, eps);
          for (double c : {0.05, 0.3, 0.8, 1.4, 2.2}) {
            const double lhs =
                (1.0 - pair.prob_y1) * pair.g0.cdf(c) + pair.prob_y1 * pair.g1.cdf(c);
            const double rhs = (1.0 - theta) * f0.cdf(c) + theta * f1.cdf(c);
            worst = std::max(worst, std::fabs(lhs - rhs));
          }
        }
      }
    }
    return std::make_pair(1e-12 - worst, "max recomposition gap " + fmt(worst));
  });

  r.run("distributions/mlrp_exponential_ratio_increasing", [] {
    const auto f0 = CostModel::exponential(0.5);
    const auto f1 = CostModel::exponential(0.01);
    double min_step = kInf;
    double prev = -kInf;
    for (int i = 0; i < 1000; ++i) {
      const double c = 1e-4 + 2.0 * i / 1000.0;
      const double lr = std::log(f0.pdf(c)) - std::log(f1.pdf(c));
      if (i > 0) min_step = std::min(min_step, lr - prev);
      prev = lr;
    }
    return std::make_pair(min_step, "min log-ratio step " + fmt(min_step));
  });
}

// ---------------------------------------------------------------------------
// contract
// ---------------------------------------------------------------------------

void verify_contract(Runner& r, const std::vector<BatteryScenario>& battery,
                     const std::vector<Gates>& gates) {
  r.run("contract/principal_not_worse_under_revelation", [&] {
    double margin = kInf;
    for (const auto& bs : battery) {
      const auto con = solve_concealed(bs.scenario);
      const auto rev = solve_revealed(bs.scenario);
      margin = std::min(margin, rev.principal_utility - con.principal_utility + 1e-9);
    }
    return std::make_pair(margin, "min (Pi_rev - Pi_con) + 1e-9 over battery");
  });

  r.run("contract/principal_strict_improvement_under_mlrp", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].mlrp || !gates[i].concave) continue;
      ++used;
      const auto con = solve_concealed(battery[i].scenario);
      const auto rev = solve_revealed(battery[i].scenario);
      margin = std::min(margin, rev.principal_utility - con.principal_utility - 1e-9);
      margin = std::min(margin, std::fabs(rev.prices[0] - rev.prices[1]) - 1e-9);
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no MLRP+concave scenario"));
    return std::make_pair(margin, "strict gain and distinct prices on " + std::to_string(used) +
                                      " MLRP+concave scenarios");
  });

  r.run("contract/quantity_lemma_contrapositive", [&] {
    double margin = kInf;
    for (const auto& bs : battery) {
      margin = std::min(margin, check_quantity_lemma(bs.scenario).margin);
    }
    return std::make_pair(margin, "welfare rises only with quantity, all scenarios");
  });

  r.run("contract/revealed_prices_theta_invariant", [&] {
    const auto f0 = CostModel::exponential(0.5);
    const auto f1 = CostModel::exponential(0.25);
    const auto base = solve_revealed(Scenario(1.0, 0.5, f0, f1));
    double worst = 0.0;
    for (double theta : {0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9}) {
      const auto eq = solve_revealed(Scenario(1.0, theta, f0, f1));
      worst = std::max(worst, std::fabs(eq.prices[0] - base.prices[0]));
      worst = std::max(worst, std::fabs(eq.prices[1] - base.prices[1]));
    }
    return std::make_pair(1e-9 - worst, "max price drift over theta grid " + fmt(worst));
  });

  r.run("contract/foc_residual_vanishes_at_optimum", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].concave) continue;
      const auto& s = battery[i].scenario;
      for (const CostModel* m : {&s.f0, &s.f1}) {
        const auto best = optimize_price(*m, s.b);
        if (best.argmax <= 1e-9 || best.argmax >= std::min(s.b, m->support_hi()) - 1e-9) {
          continue;  // boundary optimum has no interior FOC
        }
        worst = std::max(worst, std::fabs(foc_residual(*m, s.b, best.argmax)));
      }
    }
    return std::make_pair(1e-6 - worst, "max |FOC| at interior optima " + fmt(worst));
  });

  r.run("contract/welfare_sum_equals_integral", [&] {
    double worst = 0.0;
    for (const auto& bs : battery) {
      const auto& s = bs.scenario;
      const auto con = solve_concealed(s);
      const auto rev = solve_revealed(s);
      const CostModel marginal = s.marginal();
      const double sum_con =
          principal_utility(marginal, s.b, con.prices[0]) + agent_utility(marginal, con.prices[0]);
      worst = std::max(worst, std::fabs(sum_con - welfare_integral(marginal, s.b, con.prices[0])));
      const double sum_rev =
          (1.0 - s.theta) *
              (principal_utility(s.f0, s.b, rev.prices[0]) + agent_utility(s.f0, rev.prices[0])) +
          s.theta *
              (principal_utility(s.f1, s.b, rev.prices[1]) + agent_utility(s.f1, rev.prices[1]));
      const double int_rev = (1.0 - s.theta) * welfare_integral(s.f0, s.b, rev.prices[0]) +
                             s.theta * welfare_integral(s.f1, s.b, rev.prices[1]);
      worst = std::max(worst, std::fabs(sum_rev - int_rev));
    }
    return std::make_pair(1e-8 - worst, "max route disagreement " + fmt(worst));
  });
}

// ---------------------------------------------------------------------------
// garbling
// ---------------------------------------------------------------------------

void verify_garbling(Runner& r, const std::vector<BatteryScenario>& battery,
                     const std::vector<Gates>& gates) {
  r.run("garbling/principal_between_concealed_and_revealed", [&] {
    double margin = kInf;
    for (const auto& bs : battery) {
      const auto& s = bs.scenario;
      const auto con = solve_concealed(s);
      const auto rev = solve_revealed(s);
      const auto sweep =
          sweep_garbling(s, 0.5, eps_grid(21), ExecutionMode::Serial, {}, false);
      for (const auto& pt : sweep) {
        margin = std::min(margin, pt.pi_garb - con.principal_utility + 1e-9);
        margin = std::min(margin, rev.principal_utility - pt.pi_garb + 1e-9);
      }
    }
    return std::make_pair(margin, "Pi_con <= Pi_garb <= Pi_rev at gamma=theta=1/2");
  });

  r.run("garbling/principal_monotone_on_mlrp_concave", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].mlrp || !gates[i].concave) continue;
      ++used;
      const auto sweep = sweep_garbling(battery[i].scenario, 0.5, eps_grid(21),
                                        ExecutionMode::Serial, {}, false);
      for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
        margin = std::min(margin, sweep[k + 1].pi_garb - sweep[k].pi_garb + 1e-9);
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no MLRP+concave scenario"));
    return std::make_pair(margin, "pairwise nondecreasing on " + std::to_string(used) + " scenarios");
  });

  r.run("garbling/prices_monotone_on_mlrp_concave", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].mlrp || !gates[i].concave) continue;
      ++used;
      const auto sweep = sweep_garbling(battery[i].scenario, 0.5, eps_grid(21),
                                        ExecutionMode::Serial, {}, false);
      for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
        margin = std::min(margin, sweep[k + 1].p0 - sweep[k].p0 + 1e-9);
        margin = std::min(margin, sweep[k].p1 - sweep[k + 1].p1 + 1e-9);
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no MLRP+concave scenario"));
    return std::make_pair(margin, std::string("p0 up, p1 down along eps"));
  });

  r.run("garbling/price_derivatives_match_finite_differences", [&] {
    double worst = 0.0;
    int used = 0;
    const double h = 1e-4;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].mlrp || !gates[i].concave) continue;
      const auto& s = battery[i].scenario;
      ++used;
      for (double eps : {0.25, 0.5, 0.75, 1.0}) {
        const auto analytic = price_derivatives(s, eps);
        const auto price_at = [&](double e, int which) {
          const auto eq = solve_garbled(s, 0.5, e);
          return eq.prices[static_cast<std::size_t>(which)];
        };
        for (int which : {0, 1}) {
          double fd;
          if (eps + h <= 1.0) {
            fd = (price_at(eps + h, which) - price_at(eps - h, which)) / (2 * h);
          } else {
            fd = (3 * price_at(eps, which) - 4 * price_at(eps - h, which) +
                  price_at(eps - 2 * h, which)) /
                 (2 * h);
          }
          const double an = which == 0 ? analytic.first : analytic.second;
          worst = std::max(worst, rel_gap(an, fd));
        }
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no MLRP+concave scenario"));
    return std::make_pair(1e-4 - worst, "max relative gap " + fmt(worst));
  });

  r.run("garbling/endpoints_reproduce_concealed_and_revealed", [&] {
    double worst = 0.0;
    for (const auto& bs : battery) {
      const auto& s = bs.scenario;
      const auto con = solve_concealed(s);
      const auto rev = solve_revealed(s);
      const auto at0 = solve_garbled(s, s.theta, 0.0);
      const auto at1 = solve_garbled(s, 0.5, 1.0);
      worst = std::max({worst, std::fabs(at0.principal_utility - con.principal_utility),
                        std::fabs(at0.agent_utility - con.agent_utility),
                        std::fabs(at0.welfare - con.welfare),
                        std::fabs(at1.principal_utility - rev.principal_utility),
                        std::fabs(at1.agent_utility - rev.agent_utility),
                        std::fabs(at1.welfare - rev.welfare)});
    }
    return std::make_pair(1e-9 - worst, "max endpoint mismatch " + fmt(worst));
  });

  r.run("garbling/welfare_derivative_nonnegative_at_zero", [&] {
    double margin = kInf;
    const double h = 1e-3;  // coarser step keeps optimizer noise out of the slope
    for (const auto& bs : battery) {
      const auto w = [&](double e) { return solve_garbled(bs.scenario, 0.5, e).welfare; };
      const double wp0 = (-3 * w(0.0) + 4 * w(h) - w(2 * h)) / (2 * h);
      margin = std::min(margin, wp0 + 1e-6);
    }
    return std::make_pair(margin, "min W'(0) + 1e-6 over battery");
  });

  r.run("garbling/welfare_gains_at_agent_optimal_eps", [&] {
    double margin = kInf;
    for (const auto& bs : battery) {
      const auto& s = bs.scenario;
      const auto sweep = sweep_garbling(s, 0.5, eps_grid(21), ExecutionMode::Serial, {}, false);
      std::size_t best = 0;
      for (std::size_t k = 1; k < sweep.size(); ++k) {
        if (sweep[k].v_garb > sweep[best].v_garb) best = k;
      }
      margin = std::min(margin, sweep[best].w_garb - sweep[0].w_garb + 1e-9);
    }
    return std::make_pair(margin, "W(eps*) >= W(0), grid argmax of V");
  });

  r.run("garbling/welfare_derivative_dominates_agent_derivative", [&] {
    double margin = kInf;
    const double h = 1e-4;
    for (const auto& bs : battery) {
      // W'(e) - V'(e) = Pi'(e); same finite-difference stencil on both sides
      const auto pi = [&](double e) {
        return solve_garbled(bs.scenario, 0.5, e).principal_utility;
      };
      for (int k = 0; k <= 10; ++k) {
        const double e = k / 10.0;
        double d;
        if (e - h < 0.0) {
          d = (-3 * pi(e) + 4 * pi(e + h) - pi(e + 2 * h)) / (2 * h);
        } else if (e + h > 1.0) {
          d = (3 * pi(e) - 4 * pi(e - h) + pi(e - 2 * h)) / (2 * h);
        } else {
          d = (pi(e + h) - pi(e - h)) / (2 * h);
        }
        margin = std::min(margin, d + 1e-6);
      }
    }
    return std::make_pair(margin, "min Pi' finite difference + 1e-6");
  });
}

// ---------------------------------------------------------------------------
// restriction
// ---------------------------------------------------------------------------

void verify_restriction(Runner& r, const std::vector<BatteryScenario>& battery,
                        const std::vector<Gates>& gates) {
  r.run("restriction/endpoints_reproduce_concealed_and_revealed", [&] {
    double worst = 0.0;
    for (const auto& bs : battery) {
      const auto& s = bs.scenario;
      const auto con = solve_concealed(s);
      const auto rev = solve_revealed(s);
      const auto at0 = solve_restricted(s, 0.0);
      const auto at1 = solve_restricted(s, binding_gap(s));
      worst = std::max({worst, std::fabs(at0.pi_const - con.principal_utility),
                        std::fabs(at0.v_const - con.agent_utility),
                        std::fabs(at0.w_const - con.welfare),
                        std::fabs(at1.pi_const - rev.principal_utility),
                        std::fabs(at1.v_const - rev.agent_utility),
                        std::fabs(at1.w_const - rev.welfare)});
    }
    return std::make_pair(1e-9 - worst, "max endpoint mismatch " + fmt(worst));
  });

  r.run("restriction/principal_monotone_in_r_on_concave", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].concave) continue;
      ++used;
      const auto sweep = sweep_restriction(battery[i].scenario, 21, ExecutionMode::Serial);
      for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
        margin = std::min(margin, sweep[k + 1].pi_const - sweep[k].pi_const + 1e-9);
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no concave scenario"));
    return std::make_pair(margin, "relaxing the gap never hurts, " + std::to_string(used) +
                                      " scenarios");
  });

  r.run("restriction/quasiconvex_v_const_on_drc", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].drc || !gates[i].concave) continue;
      ++used;
      const auto sweep = sweep_restriction(battery[i].scenario, 101, ExecutionMode::Serial);
      margin = std::min(margin, check_quasiconvexity(sweep).margin);
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no DRC+concave scenario"));
    return std::make_pair(margin, "no interior max of V_const on " + std::to_string(used) +
                                      " DRC scenarios");
  });

  r.run("restriction/vconst_derivative_matches_finite_differences", [&] {
    double worst = 0.0;
    int used = 0;
    const double h = 1e-4;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].concave) continue;
      const auto& s = battery[i].scenario;
      const double r_max = binding_gap(s);
      if (r_max < 10 * h) continue;
      ++used;
      const auto v_at = [&](double rr) { return solve_restricted(s, rr).v_const; };
      for (int k = 0; k < 21; ++k) {
        const double rr = r_max * k / 20.0;
        const double analytic = v_const_derivative(s, rr);
        double fd;
        if (rr - h < 0.0) {
          fd = (-3 * v_at(rr) + 4 * v_at(rr + h) - v_at(rr + 2 * h)) / (2 * h);
        } else if (rr + h > r_max) {
          fd = (3 * v_at(rr) - 4 * v_at(rr - h) + v_at(rr - 2 * h)) / (2 * h);
        } else {
          fd = (v_at(rr + h) - v_at(rr - h)) / (2 * h);
        }
        worst = std::max(worst, rel_gap(analytic, fd));
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no scenario with a usable gap"));
    return std::make_pair(1e-3 - worst, "max relative gap " + fmt(worst));
  });

  r.run("restriction/prop2_sufficiency_end_to_end", [&] {
    double margin = kInf;
    int fired = 0;
    for (const auto& bs : battery) {
      GatedCheck g;
      try {
        g = check_prop2(bs.scenario);
      } catch (const EngineError&) {
        continue;
      }
      if (!g.verdict) continue;
      ++fired;
      const auto con = solve_concealed(bs.scenario);
      const auto rev = solve_revealed(bs.scenario);
      margin = std::min(margin, con.agent_utility - rev.agent_utility);
    }
    if (fired == 0) return std::make_pair(1.0, std::string("vacuous: no verdict fired"));
    return std::make_pair(margin, "V_con > V_rev wherever the gated verdict fired (" +
                                      std::to_string(fired) + ")");
  });

  r.run("restriction/prop3_sufficiency_end_to_end", [&] {
    double margin = kInf;
    int fired = 0;
    for (const auto& bs : battery) {
      GatedCheck g;
      try {
        g = check_prop3(bs.scenario);
      } catch (const EngineError&) {
        continue;
      }
      if (!g.verdict) continue;
      ++fired;
      const auto con = solve_concealed(bs.scenario);
      const auto rev = solve_revealed(bs.scenario);
      margin = std::min(margin, rev.agent_utility - con.agent_utility);
    }
    if (fired == 0) return std::make_pair(1.0, std::string("vacuous: no verdict fired"));
    return std::make_pair(margin, "V_con < V_rev wherever the gated verdict fired (" +
                                      std::to_string(fired) + ")");
  });
}

// ---------------------------------------------------------------------------
// conditions
// ---------------------------------------------------------------------------

void verify_conditions(Runner& r, const std::vector<BatteryScenario>& battery) {
  r.run("conditions/prop1_sufficiency_end_to_end", [&] {
    double margin = kInf;
    int fired = 0;
    for (const auto& bs : battery) {
      if (!bs.scenario.f1.is_point_mass_at_zero()) continue;
      const auto rep = check_prop1(bs.scenario);
      if (!rep.holds) continue;
      ++fired;
      const auto con = solve_concealed(bs.scenario);
      const auto rev = solve_revealed(bs.scenario);
      margin = std::min(margin, con.agent_utility - rev.agent_utility - 1e-8);
    }
    if (fired == 0) return std::make_pair(-1.0, std::string("no anchored scenario fired"));
    return std::make_pair(margin, "V_con > V_rev on " + std::to_string(fired) +
                                      " holding scenarios");
  });

  r.run("conditions/psi_decreasing_and_bounded", [] {
    double margin = kInf;
    double prev = kInf;
    for (int i = 1; i <= 50; ++i) {
      const double theta = i / 51.0;
      const double v = psi(theta);
      margin = std::min(margin, v);
      margin = std::min(margin, 1.0 - v);
      if (i > 1) margin = std::min(margin, prev - v);
      prev = v;
    }
    return std::make_pair(margin, "strictly decreasing, valued in (0,1), 50-point grid");
  });

  r.run("conditions/mlrp_exponential_iff_ordered", [] {
    double margin = kInf;
    for (double l0 : {0.05, 0.1, 0.3, 0.5, 0.8, 1.0}) {
      for (double l1 : {0.05, 0.1, 0.3, 0.5, 0.8, 1.0}) {
        if (l0 == l1) continue;
        const auto rep =
            check_mlrp(CostModel::exponential(l0), CostModel::exponential(l1), 128);
        const bool expected = l0 > l1;
        if (rep.holds != expected) return std::make_pair(-1.0, "mismatch at (" + fmt(l0) +
                                                                   ", " + fmt(l1) + ")");
        margin = std::min(margin, std::fabs(rep.margin));
      }
    }
    return std::make_pair(margin, std::string("holds iff lambda0 > lambda1 over the battery"));
  });

  r.run("conditions/garbling_zerocost_interior_argmax", [&] {
    double margin = kInf;
    int fired = 0;
    const auto grid = eps_grid(201);
    for (const auto& bs : battery) {
      if (!bs.scenario.f1.is_point_mass_at_zero()) continue;
      ConditionReport rep;
      try {
        rep = check_garbling_zerocost(bs.scenario);
      } catch (const EngineError&) {
        continue;
      }
      if (!rep.holds) continue;
      ++fired;
      const auto best = agent_optimal_eps(bs.scenario, 0.5, grid, ExecutionMode::Serial);
      // interior: grid argmax at most 1 - step
      margin = std::min(margin, 1.0 - grid[1] - grid[best.grid_index] + 1e-12);
    }
    if (fired == 0) return std::make_pair(-1.0, std::string("no anchored scenario fired"));
    return std::make_pair(margin, "eps* <= 1 - step on " + std::to_string(fired) +
                                      " holding scenarios (201-point grid)");
  });
}

// ---------------------------------------------------------------------------
// welfare / trajectories
// ---------------------------------------------------------------------------

void verify_welfare(Runner& r, const std::vector<BatteryScenario>& battery,
                    const std::vector<Gates>& gates) {
  r.run("welfare/trajectories_respect_bounds", [&] {
    double margin = kInf;
    for (const auto& bs : battery) {
      const auto [garb, rest] = build_trajectories(bs.scenario, bs.id, 41, r.mode);
      for (const Trajectory* t : {&garb, &rest}) {
        for (const auto& pt : t->points) {
          margin = std::min(margin, t->anchors.w_max + 1e-9 - pt.w);
          margin = std::min(margin, pt.pi - t->anchors.pi_con + 1e-9);
        }
      }
    }
    return std::make_pair(margin, "W <= w_max and Pi >= Pi_con on every point");
  });

  r.run("welfare/trajectory_anchor_consistency", [&] {
    double worst = 0.0;
    for (const auto& bs : battery) {
      const auto [garb, rest] = build_trajectories(bs.scenario, bs.id, 11, r.mode);
      worst = std::max({worst, std::fabs(garb.points.front().v - garb.anchors.v_con),
                        std::fabs(garb.points.front().pi - garb.anchors.pi_con),
                        std::fabs(rest.points.front().v - rest.anchors.v_con),
                        std::fabs(rest.points.front().pi - rest.anchors.pi_con),
                        std::fabs(garb.points.back().v - garb.anchors.v_rev),
                        std::fabs(rest.points.back().v - rest.anchors.v_rev)});
    }
    return std::make_pair(1e-9 - worst, "first point sits on A, last on F");
  });

  r.run("welfare/garbling_trajectory_pi_monotone_on_mlrp", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].mlrp || !gates[i].concave) continue;
      ++used;
      const auto [garb, rest] = build_trajectories(battery[i].scenario, battery[i].id, 41, r.mode);
      for (std::size_t k = 0; k + 1 < garb.points.size(); ++k) {
        margin = std::min(margin, garb.points[k + 1].pi - garb.points[k].pi + 1e-9);
      }
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no MLRP+concave scenario"));
    return std::make_pair(margin, std::string("Pi coordinate nondecreasing in eps"));
  });

  r.run("welfare/restriction_trajectory_no_interior_v_max_on_drc", [&] {
    double margin = kInf;
    int used = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (!gates[i].drc || !gates[i].concave) continue;
      ++used;
      const auto sweep = sweep_restriction(battery[i].scenario, 41, r.mode);
      margin = std::min(margin, check_quasiconvexity(sweep).margin);
    }
    if (used == 0) return std::make_pair(-1.0, std::string("no DRC+concave scenario"));
    return std::make_pair(margin, std::string("restriction V has no interior strict max"));
  });

  r.run("welfare/revelation_grid_antisymmetry", [&] {
    const std::vector<double> axis = {0.1, 0.3, 0.5, 0.7, 0.9};
    const auto cells = grid_revelation_preference(1.0, 0.5, axis, axis, r.mode);
    const std::size_t n = axis.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::fabs(cells[i * n + j].v_rev_minus_v_con -
                                          cells[j * n + i].v_rev_minus_v_con));
      }
    }
    return std::make_pair(1e-8 - worst, "swap (lambda0, lambda1) leaves the gap unchanged");
  });
}

// ---------------------------------------------------------------------------
// cli-facing plumbing
// ---------------------------------------------------------------------------

void verify_cli(Runner& r) {
  r.run("cli/config_roundtrip_semantic_identity", [] {
    const std::vector<std::string> configs = {
        R"({"b": 1.0, "theta": 0.5,
            "f0": {"family": "uniform", "lo": 0.5, "hi": 1.5},
            "f1": {"family": "uniform", "lo": 0.0, "hi": 1.0}})",
        R"({"b": 1.0, "theta": 0.5, "gamma": 0.5,
            "f0": {"family": "exponential", "mean": 0.5},
            "f1": {"family": "exponential", "mean": 0.01},
            "grids": {"eps_n": 201, "r_n": 101},
            "tolerances": {"abs_tol": 1e-10, "rel_tol": 1e-10, "max_iter": 200},
            "output": {"format": "csv", "path": "out.csv"}})",
        R"({"b": 1.0, "theta": 0.5,
            "f0": {"family": "weibull", "scale": 0.5, "shape": 2.0},
            "f1": {"family": "point_mass", "atom": 0.0},
            "grids": {"lambda0": {"min": 0.01, "max": 1.0, "n": 5},
                      "lambda1": [0.01, 0.5, 1.0]}})",
    };
    for (const auto& text : configs) {
      const auto once = parse_config(text);
      const auto twice = parse_config(serialize_config(once));
      if (!config_equal(once, twice)) {
        return std::make_pair(-1.0, std::string("round-trip drift"));
      }
    }
    return std::make_pair(1.0, std::string("parse/serialize/parse fixed point"));
  });

  r.run("cli/formatted_output_deterministic", [] {
    const Scenario s(1.0, 0.5, CostModel::exponential(0.5), CostModel::exponential(0.25));
    const auto grid = eps_grid(11);
    std::ostringstream a, b;
    io::write_garbling_csv(a, sweep_garbling(s, 0.5, grid, ExecutionMode::Serial));
    io::write_garbling_csv(b, sweep_garbling(s, 0.5, grid, ExecutionMode::Parallel));
    if (a.str() != b.str()) return std::make_pair(-1.0, std::string("serial/parallel differ"));
    std::ostringstream c;
    io::write_garbling_csv(c, sweep_garbling(s, 0.5, grid, ExecutionMode::Parallel));
    if (b.str() != c.str()) return std::make_pair(-1.0, std::string("reruns differ"));
    return std::make_pair(1.0, std::string("byte-identical across reruns and worker modes"));
  });
}

}  // namespace

std::vector<InvariantResult> run_verification(ExecutionMode mode) {
  Runner r;
  r.mode = mode;
  const auto& battery = builtin_battery();
  std::vector<Gates> gates;
  gates.reserve(battery.size());
  for (const auto& bs : battery) gates.push_back(gates_for(bs.scenario));

  verify_numerics(r);
  verify_distributions(r);
  verify_contract(r, battery, gates);
  verify_garbling(r, battery, gates);
  verify_restriction(r, battery, gates);
  verify_conditions(r, battery);
  verify_welfare(r, battery, gates);
  verify_cli(r);
  return r.results;
}

bool print_verification(std::ostream& os, ExecutionMode mode) {
  const auto results = run_verification(mode);
  bool all = true;
  for (const auto& res : results) {
    os << (res.pass ? "PASS " : "FAIL ") << std::left << std::setw(56) << res.name
       << " margin=" << std::setw(12) << fmt(res.margin) << ' ' << res.detail << '\n';
    all = all && res.pass;
  }
  os << (all ? "verification passed: " : "verification FAILED: ") << results.size()
     << " invariants\n";
  return all;
}

}  // namespace contract_lab
