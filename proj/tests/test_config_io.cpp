#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "contract_lab/config.hpp"
#include "contract_lab/io.hpp"

using namespace contract_lab;

TEST_CASE("parse a minimal config") {
  const auto cfg = parse_config(R"({
    "b": 1.0, "theta": 0.5,
    "f0": {"family": "uniform", "lo": 0.5, "hi": 1.5},
    "f1": {"family": "uniform", "lo": 0.0, "hi": 1.0}
  })");
  CHECK(cfg.b == 1.0);
  CHECK(cfg.theta == 0.5);
  CHECK_FALSE(cfg.gamma.has_value());
  CHECK(cfg.effective_gamma() == 0.5);
  CHECK(cfg.eps_n() == 101);
  const auto s = make_scenario(cfg);
  CHECK(s.f0.support_lo() == 0.5);
  CHECK(s.f1.support_hi() == 1.0);
}

TEST_CASE("every distribution family round-trips") {
  const std::string text = R"({
    "b": 2.0, "theta": 0.25, "gamma": 0.4,
    "f0": {"family": "weibull", "scale": 0.5, "shape": 2.0},
    "f1": {"family": "point_mass", "atom": 0.0},
    "grids": {"eps_n": 201, "r_n": 51,
              "lambda0": [0.01, 0.5, 1.0],
              "lambda1": {"min": 0.01, "max": 1.0, "n": 5}},
    "tolerances": {"abs_tol": 1e-9, "rel_tol": 1e-9, "max_iter": 100},
    "output": {"format": "csv", "path": "out.csv"}
  })";
  const auto once = parse_config(text);
  const auto twice = parse_config(serialize_config(once));
  CHECK(config_equal(once, twice));
  CHECK(once.grids->lambda1->size() == 5);
  CHECK((*once.grids->lambda1)[0] == doctest::Approx(0.01));
  CHECK((*once.grids->lambda1)[4] == doctest::Approx(1.0));
}

TEST_CASE("unknown fields are rejected at every level") {
  CHECK_THROWS_AS(parse_config(R"({"b": 1, "theta": 0.5, "f0": {"family": "exponential",
    "mean": 1}, "f1": {"family": "exponential", "mean": 1}, "extra": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"b": 1, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 1, "bogus": 2},
    "f1": {"family": "exponential", "mean": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"b": 1, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 1},
    "f1": {"family": "exponential", "mean": 1},
    "grids": {"weird": 3}})"),
                  ConfigError);
}

TEST_CASE("validation errors carry field names") {
  try {
    parse_config(R"({"b": 1, "theta": 1.5,
      "f0": {"family": "exponential", "mean": 1},
      "f1": {"family": "exponential", "mean": 1}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("theta must lie in (0,1)") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"b": -1, "theta": 0.5,
    "f0": {"family": "exponential", "mean": 1},
    "f1": {"family": "exponential", "mean": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"b": 1, "theta": 0.5,
    "f0": {"family": "exponential", "mean": -2},
    "f1": {"family": "exponential", "mean": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"b": 1, "theta": 0.5,
    "f0": {"family": "cauchy", "mean": 1},
    "f1": {"family": "exponential", "mean": 1}})"),
                  ConfigError);
}

TEST_CASE("shortest round-trip double formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(0.625) == "0.625");
  CHECK(io::format_double(1.0) == "1");
  const double v = 0.1015625;
  CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::csv_cell(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("csv rows use CRLF line discipline") {
  std::ostringstream os;
  io::write_csv_row(os, {"a", "b", "c"});
  CHECK(os.str() == "a,b,c\r\n");
}

TEST_CASE("equilibrium json carries regime and prices") {
  Equilibrium eq;
  eq.regime = Regime::Garbled;
  eq.param = 0.5;
  eq.prices = {0.3, 0.1};
  eq.principal_utility = 0.5;
  eq.agent_utility = 0.1;
  eq.welfare = 0.6;
  eq.quantity = 0.7;
  const auto j = io::to_json(eq);
  CHECK(j["regime"] == "garbled");
  CHECK(j["eps"] == 0.5);
  CHECK(j["prices"].size() == 2);
  const auto wrapped = io::versioned(j);
  CHECK(wrapped["schema_version"] == "1");
}

TEST_CASE("sweep csv headers match the documented schemas") {
  std::ostringstream g, r, v, c;
  io::write_garbling_csv(g, {});
  CHECK(g.str() ==
        "eps,p0,p1,pi_garb,v_garb,w_garb,p0_prime,p1_prime,v_garb_prime_fd\r\n");
  io::write_restriction_csv(r, {});
  CHECK(r.str() == "r,p0,p1,pi_const,v_const,w_const,v_const_prime\r\n");
  io::write_garbling_prime_csv(v, {});
  CHECK(v.str() == "lambda0,lambda1,vgarb_prime_at_one,prop5_margin\r\n");
  io::write_revelation_csv(c, {});
  CHECK(c.str() == "lambda0,lambda1,v_rev_minus_v_con,w_con,w_rev\r\n");
}
