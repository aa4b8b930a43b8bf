#include "contract_lab/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "contract_lab/io.hpp"

namespace contract_lab {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void require_keys(const Json& obj, const std::string& where,
                  const std::vector<std::string>& allowed) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : allowed) {
      if (key == k) ok = true;
    }
    if (!ok) fail(where + ": unknown field \"" + key + "\"");
  }
}

double require_number(const Json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) fail(where + ": missing field \"" + key + "\"");
  if (!obj[key].is_number()) fail(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

DistributionSpec parse_distribution(const Json& obj, const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  if (!obj.contains("family") || !obj["family"].is_string()) {
    fail(where + ": missing string field \"family\"");
  }
  const std::string family = obj["family"].get<std::string>();
  DistributionSpec spec;
  if (family == "exponential") {
    require_keys(obj, where, {"family", "mean"});
    spec = ExponentialSpec{require_number(obj, where, "mean")};
  } else if (family == "weibull") {
    require_keys(obj, where, {"family", "scale", "shape"});
    spec = WeibullSpec{require_number(obj, where, "scale"), require_number(obj, where, "shape")};
  } else if (family == "uniform") {
    require_keys(obj, where, {"family", "lo", "hi"});
    spec = UniformSpec{require_number(obj, where, "lo"), require_number(obj, where, "hi")};
  } else if (family == "point_mass") {
    require_keys(obj, where, {"family", "atom"});
    spec = PointMassSpec{require_number(obj, where, "atom")};
  } else {
    fail(where + ": unknown family \"" + family + "\"");
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& err) {
    fail(where + ": " + err.what());
  }
  return spec;
}

std::vector<double> parse_axis(const Json& node, const std::string& where) {
  std::vector<double> axis;
  if (node.is_array()) {
    for (const auto& v : node) {
      if (!v.is_number()) fail(where + ": expected numbers");
      axis.push_back(v.get<double>());
    }
  } else if (node.is_object()) {
    require_keys(node, where, {"min", "max", "n"});
    const double lo = require_number(node, where, "min");
    const double hi = require_number(node, where, "max");
    if (!node.contains("n") || !node["n"].is_number_integer()) {
      fail(where + ".n: expected an integer");
    }
    const int n = node["n"].get<int>();
    if (n < 1 || !(hi >= lo)) fail(where + ": need n >= 1 and max >= min");
    for (int i = 0; i < n; ++i) {
      axis.push_back(n == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(n - 1));
    }
  } else {
    fail(where + ": expected an array or {min, max, n}");
  }
  if (axis.empty()) fail(where + ": empty grid");
  for (double v : axis) {
    if (!(v > 0.0)) fail(where + ": grid values must be positive");
  }
  return axis;
}

Json axis_to_json(const std::vector<double>& axis) {
  Json arr = Json::array();
  for (double v : axis) arr.push_back(v);
  return arr;
}

}  // namespace

int ScenarioConfig::eps_n() const {
  return grids && grids->eps_n ? *grids->eps_n : 101;
}

int ScenarioConfig::r_n() const {
  return grids && grids->r_n ? *grids->r_n : 101;
}

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b) {
  const auto grid_eq = [](const std::optional<GridConfig>& x,
                          const std::optional<GridConfig>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->eps_n == y->eps_n && x->r_n == y->r_n && x->lambda0 == y->lambda0 &&
           x->lambda1 == y->lambda1;
  };
  const auto tol_eq = [](const std::optional<num::Tolerance>& x,
                         const std::optional<num::Tolerance>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->abs_tol == y->abs_tol && x->rel_tol == y->rel_tol && x->max_iter == y->max_iter;
  };
  const auto out_eq = [](const std::optional<OutputConfig>& x,
                         const std::optional<OutputConfig>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->format == y->format && x->path == y->path;
  };
  return a.b == b.b && a.theta == b.theta && spec_equal(a.f0, b.f0) &&
         spec_equal(a.f1, b.f1) && a.gamma == b.gamma && grid_eq(a.grids, b.grids) &&
         tol_eq(a.tolerances, b.tolerances) && out_eq(a.output, b.output);
}

ScenarioConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& err) {
    fail(std::string("config: invalid JSON: ") + err.what());
  }
  require_keys(root, "config",
               {"b", "theta", "f0", "f1", "gamma", "grids", "tolerances", "output"});
  ScenarioConfig cfg;
  cfg.b = require_number(root, "config", "b");
  cfg.theta = require_number(root, "config", "theta");
  if (!root.contains("f0") || !root.contains("f1")) {
    fail("config: both f0 and f1 are required");
  }
  cfg.f0 = parse_distribution(root["f0"], "config.f0");
  cfg.f1 = parse_distribution(root["f1"], "config.f1");
  if (root.contains("gamma")) {
    if (!root["gamma"].is_number()) fail("config.gamma: expected a number");
    cfg.gamma = root["gamma"].get<double>();
    if (!(*cfg.gamma >= 0.0 && *cfg.gamma <= 1.0)) {
      fail("config.gamma: must lie in [0, 1]");
    }
  }
  if (root.contains("grids")) {
    const Json& g = root["grids"];
    require_keys(g, "config.grids", {"eps_n", "r_n", "lambda0", "lambda1"});
    GridConfig grids;
    if (g.contains("eps_n")) {
      if (!g["eps_n"].is_number_integer()) fail("config.grids.eps_n: expected an integer");
      grids.eps_n = g["eps_n"].get<int>();
      if (*grids.eps_n < 2) fail("config.grids.eps_n: need at least 2");
    }
    if (g.contains("r_n")) {
      if (!g["r_n"].is_number_integer()) fail("config.grids.r_n: expected an integer");
      grids.r_n = g["r_n"].get<int>();
      if (*grids.r_n < 2) fail("config.grids.r_n: need at least 2");
    }
    if (g.contains("lambda0")) grids.lambda0 = parse_axis(g["lambda0"], "config.grids.lambda0");
    if (g.contains("lambda1")) grids.lambda1 = parse_axis(g["lambda1"], "config.grids.lambda1");
    cfg.grids = std::move(grids);
  }
  if (root.contains("tolerances")) {
    const Json& t = root["tolerances"];
    require_keys(t, "config.tolerances", {"abs_tol", "rel_tol", "max_iter"});
    num::Tolerance tol;
    if (t.contains("abs_tol")) tol.abs_tol = require_number(t, "config.tolerances", "abs_tol");
    if (t.contains("rel_tol")) tol.rel_tol = require_number(t, "config.tolerances", "rel_tol");
    if (t.contains("max_iter")) {
      if (!t["max_iter"].is_number_integer()) {
        fail("config.tolerances.max_iter: expected an integer");
      }
      tol.max_iter = t["max_iter"].get<int>();
    }
    try {
      tol.validate();
    } catch (const std::invalid_argument& err) {
      fail(std::string("config.tolerances: ") + err.what());
    }
    cfg.tolerances = tol;
  }
  if (root.contains("output")) {
    const Json& o = root["output"];
    require_keys(o, "config.output", {"format", "path"});
    OutputConfig out;
    if (o.contains("format")) {
      if (!o["format"].is_string()) fail("config.output.format: expected a string");
      out.format = o["format"].get<std::string>();
      if (out.format != "csv" && out.format != "json") {
        fail("config.output.format: must be \"csv\" or \"json\"");
      }
    }
    if (o.contains("path")) {
      if (!o["path"].is_string()) fail("config.output.path: expected a string");
      out.path = o["path"].get<std::string>();
    }
    cfg.output = std::move(out);
  }

  // Scenario-level invariants reported as config errors with field names.
  if (!(cfg.b > 0.0) || !std::isfinite(cfg.b)) fail("config.b: must be positive and finite");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) fail("config.theta: theta must lie in (0,1)");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("config: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

Json spec_to_json(const DistributionSpec& spec) {
  Json j;
  j["family"] = family_name(spec);
  if (const auto* e = std::get_if<ExponentialSpec>(&spec)) {
    j["mean"] = e->mean;
  } else if (const auto* w = std::get_if<WeibullSpec>(&spec)) {
    j["scale"] = w->scale;
    j["shape"] = w->shape;
  } else if (const auto* u = std::get_if<UniformSpec>(&spec)) {
    j["lo"] = u->lo;
    j["hi"] = u->hi;
  } else if (const auto* p = std::get_if<PointMassSpec>(&spec)) {
    j["atom"] = p->atom;
  }
  return j;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  Json root;
  root["b"] = cfg.b;
  root["theta"] = cfg.theta;
  root["f0"] = spec_to_json(cfg.f0);
  root["f1"] = spec_to_json(cfg.f1);
  if (cfg.gamma) root["gamma"] = *cfg.gamma;
  if (cfg.grids) {
    Json g;
    if (cfg.grids->eps_n) g["eps_n"] = *cfg.grids->eps_n;
    if (cfg.grids->r_n) g["r_n"] = *cfg.grids->r_n;
    if (cfg.grids->lambda0) g["lambda0"] = axis_to_json(*cfg.grids->lambda0);
    if (cfg.grids->lambda1) g["lambda1"] = axis_to_json(*cfg.grids->lambda1);
    root["grids"] = std::move(g);
  }
  if (cfg.tolerances) {
    root["tolerances"] = Json{{"abs_tol", cfg.tolerances->abs_tol},
                              {"rel_tol", cfg.tolerances->rel_tol},
                              {"max_iter", cfg.tolerances->max_iter}};
  }
  if (cfg.output) {
    Json o;
    o["format"] = cfg.output->format;
    if (cfg.output->path) o["path"] = *cfg.output->path;
    root["output"] = std::move(o);
  }
  return root.dump(2) + "\n";
}

Scenario make_scenario(const ScenarioConfig& cfg) {
  return Scenario(cfg.b, cfg.theta, CostModel::from_spec(cfg.f0),
                  CostModel::from_spec(cfg.f1));
}

}  // namespace contract_lab
