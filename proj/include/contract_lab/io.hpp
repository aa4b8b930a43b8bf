#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "contract_lab/conditions.hpp"
#include "contract_lab/contract.hpp"
#include "contract_lab/garbling.hpp"
#include "contract_lab/restriction.hpp"
#include "contract_lab/welfare.hpp"

namespace contract_lab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// One RFC-4180 CSV line (CRLF terminated). NaN renders as an empty cell.
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);
std::string csv_cell(double v);

Json to_json(const Equilibrium& eq);
Json to_json(const ConditionReport& rep);
Json to_json(const GarblingPoint& pt);
Json to_json(const RestrictionPoint& pt);
Json to_json(const GarblingPrimeCell& cell);
Json to_json(const RevelationCell& cell);
Json to_json(const Trajectory& t);

/// Wraps a payload with the schema_version field.
Json versioned(Json payload);

void write_garbling_csv(std::ostream& os, const std::vector<GarblingPoint>& pts);
void write_restriction_csv(std::ostream& os, const std::vector<RestrictionPoint>& pts);
void write_garbling_prime_csv(std::ostream& os, const std::vector<GarblingPrimeCell>& cells);
void write_revelation_csv(std::ostream& os, const std::vector<RevelationCell>& cells);
void write_trajectory_csv(std::ostream& os, const Trajectory& garbling,
                          const Trajectory& restriction);
void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs);

/// Fixed-width table of condition reports for terminal output.
void print_report_table(std::ostream& os, const std::vector<ConditionReport>& reports);

}  // namespace contract_lab::io
