#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "asep/bethe.hpp"
#include "asep/generic.hpp"
#include "asep/gillespie.hpp"
#include "asep/types.hpp"

namespace asep {

// Version stamp embedded in every JSON record this library emits.
inline constexpr int kSchemaVersion = 1;

// Shortest round-trippable decimal representation.
std::string format_double(double v);

// RFC 4180: fields containing comma, quote or newline are quoted with
// embedded quotes doubled; records end with CRLF.
std::string csv_field(const std::string& raw);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

nlohmann::json json_complex(complexd z);  // [re, im]

// {schema_version, kind, roots: [[re,im],..], E: [re,im], residual}
// string solutions carry {infinite_string: true, string_size}.
nlohmann::json json_root_set(const BetheRootSet& s, const BoundaryRates& rates);

nlohmann::json json_sim_estimate(const SimEstimate& e);
nlohmann::json json_rates(const BoundaryRates& rates);

// (index, bitstring, component) rows for a state vector.
void write_state_csv(std::ostream& os, const VectorXd& state, int n_sites);

}  // namespace asep
