#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "contract_lab/battery.hpp"
#include "contract_lab/conditions.hpp"
#include "contract_lab/config.hpp"
#include "contract_lab/garbling.hpp"
#include "contract_lab/io.hpp"
#include "contract_lab/restriction.hpp"
#include "contract_lab/verify.hpp"
#include "contract_lab/welfare.hpp"

namespace {

using namespace contract_lab;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<int> grid_n;
  bool seedless = false;
};

struct Sink {
  std::string format;  // csv | json
  std::optional<std::string> path;

  void emit(const std::string& payload) const {
    if (path) {
      std::ofstream out(*path, std::ios::binary);
      if (!out) throw ConfigError("output: cannot open \"" + *path + "\"");
      out << payload;
    } else {
      std::cout << payload;
    }
  }
};

Sink make_sink(const ScenarioConfig& cfg, const CliOptions& opt) {
  Sink sink;
  sink.format = cfg.output ? cfg.output->format : "json";
  if (cfg.output && cfg.output->path) sink.path = cfg.output->path;
  if (opt.format) sink.format = *opt.format;
  if (opt.out_path) sink.path = opt.out_path;
  if (sink.format != "csv" && sink.format != "json") {
    throw ConfigError("output format must be \"csv\" or \"json\"");
  }
  return sink;
}

ScenarioConfig load(const CliOptions& opt) {
  if (opt.seedless) {
    // there is no randomness anywhere; the flag is reserved and refused so a
    // config cannot silently claim a seed mattered
    throw ConfigError("--seedless is reserved: every command is deterministic already");
  }
  if (opt.config_path.empty()) throw ConfigError("--config PATH is required");
  return load_config(opt.config_path);
}

int cmd_solve(const CliOptions& opt) {
  const ScenarioConfig cfg = load(opt);
  const Sink sink = make_sink(cfg, opt);
  const Scenario s = make_scenario(cfg);
  const auto tol = cfg.effective_tolerance();
  const Equilibrium con = solve_concealed(s, tol);
  const Equilibrium rev = solve_revealed(s, tol);
  const ConditionReport lemma = check_quantity_lemma(s, tol);

  if (sink.format == "csv") {
    std::ostringstream os;
    io::write_equilibria_csv(os, {con, rev});
    sink.emit(os.str());
  } else {
    Json j;
    j["concealed"] = io::to_json(con);
    j["revealed"] = io::to_json(rev);
    j["quantity_lemma"] = io::to_json(lemma);
    sink.emit(io::versioned(std::move(j)).dump(2) + "\n");
  }
  std::cerr << "solve: p*=" << io::format_double(con.prices[0])
            << " p0*=" << io::format_double(rev.prices[0])
            << " p1*=" << io::format_double(rev.prices[1])
            << " W_con=" << io::format_double(con.welfare)
            << " W_rev=" << io::format_double(rev.welfare) << "\n";
  return kExitOk;
}

int cmd_sweep(const CliOptions& opt, const std::string& kind) {
  const ScenarioConfig cfg = load(opt);
  const Sink sink = make_sink(cfg, opt);
  const Scenario s = make_scenario(cfg);
  const auto tol = cfg.effective_tolerance();

  if (kind == "garbling") {
    const int n = opt.grid_n.value_or(cfg.eps_n());
    if (n < 2) throw ConfigError("sweep: need at least 2 grid points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / (n - 1);
    const auto points =
        sweep_garbling(s, cfg.effective_gamma(), grid, ExecutionMode::Parallel, tol);
    if (sink.format == "csv") {
      std::ostringstream os;
      io::write_garbling_csv(os, points);
      sink.emit(os.str());
    } else {
      Json arr = Json::array();
      for (const auto& pt : points) arr.push_back(io::to_json(pt));
      sink.emit(io::versioned(std::move(arr)).dump(2) + "\n");
    }
    const auto best = agent_optimal_eps(s, cfg.effective_gamma(), grid);
    const bool interior = best.grid_index > 0 && best.grid_index + 1 < grid.size();
    std::cerr << "sweep garbling: eps*=" << io::format_double(best.eps_refined)
              << " V_garb(eps*)=" << io::format_double(best.v_refined) << " ("
              << (interior ? "interior" : "boundary") << " argmax)\n";
    return kExitOk;
  }

  if (kind == "restriction") {
    const int n = opt.grid_n.value_or(cfg.r_n());
    if (n < 2) throw ConfigError("sweep: need at least 2 grid points");
    const auto points = sweep_restriction(s, n, ExecutionMode::Parallel, tol);
    if (sink.format == "csv") {
      std::ostringstream os;
      io::write_restriction_csv(os, points);
      sink.emit(os.str());
    } else {
      Json arr = Json::array();
      for (const auto& pt : points) arr.push_back(io::to_json(pt));
      sink.emit(io::versioned(std::move(arr)).dump(2) + "\n");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].v_const > points[best].v_const) best = i;
    }
    const bool interior = best > 0 && best + 1 < points.size();
    std::cerr << "sweep restriction: r*=" << io::format_double(points[best].r)
              << " V_const(r*)=" << io::format_double(points[best].v_const) << " ("
              << (interior ? "interior" : "boundary") << " argmax)\n";
    return kExitOk;
  }

  throw ConfigError("sweep kind must be \"garbling\" or \"restriction\"");
}

int cmd_grid(const CliOptions& opt, const std::string& kind) {
  const ScenarioConfig cfg = load(opt);
  const Sink sink = make_sink(cfg, opt);
  const auto tol = cfg.effective_tolerance();
  if (!cfg.grids || !cfg.grids->lambda0 || !cfg.grids->lambda1) {
    throw ConfigError("grid: config.grids.lambda0 and lambda1 are required");
  }
  const auto& l0 = *cfg.grids->lambda0;
  const auto& l1 = *cfg.grids->lambda1;

  if (kind == "revelation") {
    const auto cells =
        grid_revelation_preference(cfg.b, cfg.theta, l0, l1, ExecutionMode::Parallel, tol);
    if (sink.format == "csv") {
      std::ostringstream os;
      io::write_revelation_csv(os, cells);
      sink.emit(os.str());
    } else {
      Json arr = Json::array();
      for (const auto& c : cells) arr.push_back(io::to_json(c));
      sink.emit(io::versioned(std::move(arr)).dump(2) + "\n");
    }
    // sign changes along lambda0 for each fixed lambda1 locate the contour
    for (std::size_t j = 0; j < l1.size(); ++j) {
      int changes = 0;
      for (std::size_t i = 0; i + 1 < l0.size(); ++i) {
        const double a = cells[i * l1.size() + j].v_rev_minus_v_con;
        const double b = cells[(i + 1) * l1.size() + j].v_rev_minus_v_con;
        if (a * b < 0.0) ++changes;
      }
      std::cerr << "grid revelation: lambda1=" << io::format_double(l1[j]) << " sign changes "
                << changes << "\n";
    }
    return kExitOk;
  }

  if (kind == "garbling_prime") {
    if (l0 != l1) {
      throw ConfigError("grid garbling_prime: lambda0 and lambda1 axes must coincide");
    }
    const auto cells =
        grid_vgarb_prime_at_one(cfg.b, cfg.theta, l0, ExecutionMode::Parallel, tol);
    if (sink.format == "csv") {
      std::ostringstream os;
      io::write_garbling_prime_csv(os, cells);
      sink.emit(os.str());
    } else {
      Json arr = Json::array();
      for (const auto& c : cells) arr.push_back(io::to_json(c));
      sink.emit(io::versioned(std::move(arr)).dump(2) + "\n");
    }
    for (std::size_t j = 0; j < l0.size(); ++j) {
      int changes = 0;
      for (std::size_t i = 0; i + 1 < l0.size(); ++i) {
        const double a = cells[i * l0.size() + j].vgarb_prime_at_one;
        const double b = cells[(i + 1) * l0.size() + j].vgarb_prime_at_one;
        if (a * b < 0.0) ++changes;
      }
      std::cerr << "grid garbling_prime: lambda1=" << io::format_double(l0[j])
                << " sign changes " << changes << "\n";
    }
    return kExitOk;
  }

  throw ConfigError("grid kind must be \"revelation\" or \"garbling_prime\"");
}

int cmd_check(const CliOptions& opt) {
  const ScenarioConfig cfg = load(opt);
  const Sink sink = make_sink(cfg, opt);
  const Scenario s = make_scenario(cfg);
  const auto tol = cfg.effective_tolerance();

  std::vector<ConditionReport> reports;
  const auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      reports.push_back(fn());
    } catch (const std::exception& err) {
      ConditionReport rep;
      rep.name = name;
      rep.holds = false;
      rep.margin = -1.0;
      rep.notes = std::string("not applicable: ") + err.what();
      reports.push_back(rep);
    }
  };

  guarded("mlrp", [&] { return check_mlrp(s.f0, s.f1); });
  guarded("concavity_f0", [&] {
    auto rep = check_concavity(s.f0, s.b);
    rep.name = "concavity_f0";
    return rep;
  });
  guarded("concavity_f1", [&] {
    auto rep = check_concavity(s.f1, s.b);
    rep.name = "concavity_f1";
    return rep;
  });
  guarded("drc", [&] { return check_drc(s, default_price_grid(s)); });
  guarded("prop1_zerocost_concealment", [&] { return check_prop1(s, tol); });
  guarded("prop2_acv_concealment", [&] { return check_prop2(s, tol).report; });
  guarded("prop3_acv_revelation", [&] { return check_prop3(s, tol).report; });
  guarded("garbling_zerocost", [&] { return check_garbling_zerocost(s, tol); });
  guarded("garbling_general", [&] { return check_garbling_general(s, tol); });
  guarded("quantity_lemma", [&] { return check_quantity_lemma(s, tol); });

  io::print_report_table(std::cout, reports);
  Json arr = Json::array();
  for (const auto& rep : reports) arr.push_back(io::to_json(rep));
  const std::string json_payload = io::versioned(std::move(arr)).dump(2) + "\n";
  if (sink.path) {
    sink.emit(json_payload);
  } else {
    std::cout << json_payload;
  }
  return kExitOk;  // verdicts are data, not errors
}

int cmd_verify() {
  const bool ok = print_verification(std::cout);
  return ok ? kExitOk : kExitInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contract_lab: principal-agent contract equilibria under concealed, "
               "revealed, garbled and gap-restricted information"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string sweep_kind, grid_kind;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", opt.config_path, "scenario config (JSON)");
    }
    cmd->add_option("--out", opt.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opt.format, "csv or json (overrides config)");
    cmd->add_flag("--seedless", opt.seedless,
                  "reserved; all commands are deterministic, flag is refused");
  };

  auto* solve = app.add_subcommand("solve", "concealed and revealed equilibria");
  add_common(solve, true);

  auto* sweep = app.add_subcommand("sweep", "eps- or r-sweep");
  sweep->add_option("kind", sweep_kind, "garbling | restriction")->required();
  sweep->add_option("--grid-n", opt.grid_n, "number of sweep points");
  add_common(sweep, true);

  auto* grid = app.add_subcommand("grid", "lambda-grid exports");
  grid->add_option("kind", grid_kind, "revelation | garbling_prime")->required();
  add_common(grid, true);

  auto* check = app.add_subcommand("check-conditions", "assumption and proposition reports");
  add_common(check, true);

  app.add_subcommand("verify", "run the built-in invariant battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (sweep->parsed()) return cmd_sweep(opt, sweep_kind);
    if (grid->parsed()) return cmd_grid(opt, grid_kind);
    if (check->parsed()) return cmd_check(opt);
    return cmd_verify();
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const EngineError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return kExitNumericalError;
  }
}
