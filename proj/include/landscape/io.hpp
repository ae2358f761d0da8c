#pragma once

// JSON and CSV formats used by the command-line tool.
//
// network:     {"segments":[{"points":[[x,t],...],
//                            "density":[{"t0":..,"t1":..,"rho":..},...]}]}
// constraints: {"constraints":[{"x0":..,"t0":..,"x1":..,"t1":..,"alpha":..}]}
// profile CSV: header row, then t,f rows
// pairs CSV:   header row, then x0,t0,x1,t1 rows

#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "landscape/multipoint.hpp"
#include "landscape/planted_measure.hpp"

namespace landscape {

/// Malformed input: bad syntax, missing fields, wrong types.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::string& path);

/// Geometric and density errors surface as std::invalid_argument or
/// NetworkError; structural problems as ParseError.
PlantedMeasure parse_network(const nlohmann::json& doc);
nlohmann::json network_to_json(const PlantedMeasure& mu);

std::vector<PointConstraint> parse_constraints(const nlohmann::json& doc);

/// Rows of a numeric CSV with a header line; every row must have `columns`
/// fields.
std::vector<std::vector<double>> read_csv(std::istream& in, std::size_t columns);
std::vector<std::vector<double>> read_csv_file(const std::string& path,
                                               std::size_t columns);

std::vector<std::pair<double, double>> parse_profile_csv(const std::string& path);

}  // namespace landscape
