#include "landscape/io.hpp"

#include <fstream>
#include <sstream>

namespace landscape {

namespace {

double number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

PlantedMeasure parse_network(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("segments") || !doc.at("segments").is_array()) {
    throw ParseError("network: expected an object with a \"segments\" array");
  }
  SegmentNetwork net;
  const auto& segs = doc.at("segments");
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const std::string where = "segments[" + std::to_string(s) + "]";
    const auto& seg = segs[s];
    if (!seg.is_object() || !seg.contains("points") || !seg.at("points").is_array()) {
      throw ParseError(where + ": expected a \"points\" array");
    }
    std::vector<SpaceTimePoint> pts;
    for (const auto& p : seg.at("points")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ParseError(where + ": points must be [x, t] number pairs");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (!seg.contains("density") || !seg.at("density").is_array()) {
      throw ParseError(where + ": expected a \"density\" array");
    }
    std::vector<DensityPiece> pieces;
    for (const auto& d : seg.at("density")) {
      pieces.push_back({number(d, "t0", where), number(d, "t1", where), number(d, "rho", where)});
    }
    net.emplace_back(PolylinePath(std::move(pts)), PiecewiseDensity(std::move(pieces)));
  }
  return PlantedMeasure(std::move(net));
}

nlohmann::json network_to_json(const PlantedMeasure& mu) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : mu.segments()) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : seg.path().breakpoints()) pts.push_back({p.x, p.t});
    nlohmann::json dens = nlohmann::json::array();
    for (const auto& piece : seg.density().pieces()) {
      dens.push_back({{"t0", piece.t0}, {"t1", piece.t1}, {"rho", piece.rho}});
    }
    segs.push_back({{"points", pts}, {"density", dens}});
  }
  return {{"segments", segs}};
}

std::vector<PointConstraint> parse_constraints(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("constraints") || !doc.at("constraints").is_array()) {
    throw ParseError("constraints: expected an object with a \"constraints\" array");
  }
  std::vector<PointConstraint> out;
  const auto& arr = doc.at("constraints");
  for (std::size_t c = 0; c < arr.size(); ++c) {
    const std::string where = "constraints[" + std::to_string(c) + "]";
    const auto& o = arr[c];
    out.push_back({TemporalPair(number(o, "x0", where), number(o, "t0", where),
                                number(o, "x1", where), number(o, "t1", where)),
                   number(o, "alpha", where)});
  }
  return out;
}

std::vector<std::vector<double>> read_csv(std::istream& in, std::size_t columns) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": not a number: " + cell);
      }
    }
    if (row.size() != columns) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv_file(const std::string& path,
                                               std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_csv(in, columns);
}

std::vector<std::pair<double, double>> parse_profile_csv(const std::string& path) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : read_csv_file(path, 2)) out.emplace_back(row[0], row[1]);
  if (out.size() < 2) throw ParseError(path + ": a profile needs at least two rows");
  return out;
}

}  // namespace landscape
