#include "contract_lab/io.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace contract_lab::io {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(double v) {
  if (std::isnan(v)) return "";
  return format_double(v);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << "\r\n";
}

Json to_json(const Equilibrium& eq) {
  Json j;
  j["regime"] = regime_name(eq.regime);
  if (!std::isnan(eq.param)) {
    j[eq.regime == Regime::Restricted ? "r" : "eps"] = eq.param;
  }
  j["prices"] = eq.prices;
  j["principal_utility"] = eq.principal_utility;
  j["agent_utility"] = eq.agent_utility;
  j["welfare"] = eq.welfare;
  j["quantity"] = eq.quantity;
  return j;
}

Json to_json(const ConditionReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["holds"] = rep.holds;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["margin"] = rep.margin;
  j["notes"] = rep.notes;
  j["grid_used"] = rep.grid_used;
  return j;
}

namespace {

Json number_or_null(double v) {
  // NaN is not representable in JSON; emit null
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

Json to_json(const GarblingPoint& pt) {
  Json j;
  j["eps"] = pt.eps;
  j["p0"] = pt.p0;
  j["p1"] = pt.p1;
  j["pi_garb"] = pt.pi_garb;
  j["v_garb"] = pt.v_garb;
  j["w_garb"] = pt.w_garb;
  j["p0_prime"] = number_or_null(pt.p0_prime);
  j["p1_prime"] = number_or_null(pt.p1_prime);
  j["v_garb_prime_fd"] = number_or_null(pt.v_garb_prime_fd);
  return j;
}

Json to_json(const RestrictionPoint& pt) {
  Json j;
  j["r"] = pt.r;
  j["p0"] = pt.p0;
  j["p1"] = pt.p1;
  j["pi_const"] = pt.pi_const;
  j["v_const"] = pt.v_const;
  j["w_const"] = pt.w_const;
  j["v_const_prime"] = number_or_null(pt.v_const_prime);
  return j;
}

Json to_json(const GarblingPrimeCell& cell) {
  Json j;
  j["lambda0"] = cell.lambda0;
  j["lambda1"] = cell.lambda1;
  j["vgarb_prime_at_one"] = cell.vgarb_prime_at_one;
  j["prop5_margin"] = cell.prop5_margin;
  return j;
}

Json to_json(const RevelationCell& cell) {
  Json j;
  j["lambda0"] = cell.lambda0;
  j["lambda1"] = cell.lambda1;
  j["v_rev_minus_v_con"] = cell.v_rev_minus_v_con;
  j["w_con"] = cell.w_con;
  j["w_rev"] = cell.w_rev;
  return j;
}

Json to_json(const Trajectory& t) {
  Json j;
  j["scenario_id"] = t.scenario_id;
  j["kind"] = t.kind == TrajectoryKind::Garbling ? "garbling" : "restriction";
  j["anchors"] = Json{{"A", Json{{"v", t.anchors.v_con}, {"pi", t.anchors.pi_con}}},
                      {"F", Json{{"v", t.anchors.v_rev}, {"pi", t.anchors.pi_rev}}},
                      {"w_max", t.anchors.w_max}};
  Json pts = Json::array();
  for (const auto& pt : t.points) {
    pts.push_back(Json{{"param", pt.param}, {"v", pt.v}, {"pi", pt.pi}, {"w", pt.w}});
  }
  j["points"] = std::move(pts);
  return j;
}

Json versioned(Json payload) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["data"] = std::move(payload);
  return j;
}

void write_garbling_csv(std::ostream& os, const std::vector<GarblingPoint>& pts) {
  write_csv_row(os, {"eps", "p0", "p1", "pi_garb", "v_garb", "w_garb", "p0_prime",
                     "p1_prime", "v_garb_prime_fd"});
  for (const auto& pt : pts) {
    write_csv_row(os, {csv_cell(pt.eps), csv_cell(pt.p0), csv_cell(pt.p1),
                       csv_cell(pt.pi_garb), csv_cell(pt.v_garb), csv_cell(pt.w_garb),
                       csv_cell(pt.p0_prime), csv_cell(pt.p1_prime),
                       csv_cell(pt.v_garb_prime_fd)});
  }
}

void write_restriction_csv(std::ostream& os, const std::vector<RestrictionPoint>& pts) {
  write_csv_row(os, {"r", "p0", "p1", "pi_const", "v_const", "w_const", "v_const_prime"});
  for (const auto& pt : pts) {
    write_csv_row(os, {csv_cell(pt.r), csv_cell(pt.p0), csv_cell(pt.p1),
                       csv_cell(pt.pi_const), csv_cell(pt.v_const), csv_cell(pt.w_const),
                       csv_cell(pt.v_const_prime)});
  }
}

void write_garbling_prime_csv(std::ostream& os, const std::vector<GarblingPrimeCell>& cells) {
  write_csv_row(os, {"lambda0", "lambda1", "vgarb_prime_at_one", "prop5_margin"});
  for (const auto& c : cells) {
    write_csv_row(os, {csv_cell(c.lambda0), csv_cell(c.lambda1),
                       csv_cell(c.vgarb_prime_at_one), csv_cell(c.prop5_margin)});
  }
}

void write_revelation_csv(std::ostream& os, const std::vector<RevelationCell>& cells) {
  write_csv_row(os, {"lambda0", "lambda1", "v_rev_minus_v_con", "w_con", "w_rev"});
  for (const auto& c : cells) {
    write_csv_row(os, {csv_cell(c.lambda0), csv_cell(c.lambda1),
                       csv_cell(c.v_rev_minus_v_con), csv_cell(c.w_con), csv_cell(c.w_rev)});
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& garbling,
                          const Trajectory& restriction) {
  write_csv_row(os, {"scenario_id", "kind", "param", "v", "pi", "w"});
  for (const Trajectory* t : {&garbling, &restriction}) {
    const std::string kind = t->kind == TrajectoryKind::Garbling ? "garbling" : "restriction";
    for (const auto& pt : t->points) {
      write_csv_row(os, {t->scenario_id, kind, csv_cell(pt.param), csv_cell(pt.v),
                         csv_cell(pt.pi), csv_cell(pt.w)});
    }
  }
}

void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs) {
  write_csv_row(os, {"regime", "param", "p0", "p1", "principal_utility", "agent_utility",
                     "welfare", "quantity"});
  for (const auto& eq : eqs) {
    const double p0 = eq.prices.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : eq.prices.front();
    const double p1 = eq.prices.size() > 1 ? eq.prices[1]
                                           : std::numeric_limits<double>::quiet_NaN();
    write_csv_row(os, {regime_name(eq.regime), csv_cell(eq.param), csv_cell(p0),
                       csv_cell(p1), csv_cell(eq.principal_utility),
                       csv_cell(eq.agent_utility), csv_cell(eq.welfare),
                       csv_cell(eq.quantity)});
  }
}

void print_report_table(std::ostream& os, const std::vector<ConditionReport>& reports) {
  os << std::left << std::setw(28) << "condition" << std::setw(7) << "holds"
     << std::setw(16) << "lhs" << std::setw(16) << "rhs" << std::setw(16) << "margin"
     << "notes\n";
  os << std::string(100, '-') << '\n';
  for (const auto& rep : reports) {
    std::ostringstream lhs, rhs, margin;
    lhs << std::setprecision(6) << rep.lhs;
    rhs << std::setprecision(6) << rep.rhs;
    margin << std::setprecision(6) << rep.margin;
    os << std::left << std::setw(28) << rep.name << std::setw(7)
       << (rep.holds ? "yes" : "no") << std::setw(16) << lhs.str() << std::setw(16)
       << rhs.str() << std::setw(16) << margin.str() << rep.notes << '\n';
  }
}

}  // namespace contract_lab::io
