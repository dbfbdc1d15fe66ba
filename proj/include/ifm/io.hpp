#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifm/sweep.hpp"

// CSV and JSON encoders for the CLI surfaces and scalar tables. CSV numbers
// use the shortest round-trip decimal representation so golden files stay
// byte-stable; JSON output is always a single {"meta": ..., "data": ...}
// object.

namespace ifm {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct ScalarRow {
  std::string name;
  std::string value; // pre-formatted so integer-valued rows keep full width
  std::string unit;
};

inline ScalarRow scalar_row(const std::string& name, double value, const std::string& unit) {
  return {name, format_double(value), unit};
}

// header name,value,unit; field values never contain commas
inline std::string table_to_csv(const std::vector<ScalarRow>& rows) {
  std::string out = "name,value,unit\n";
  for (const auto& r : rows) out += r.name + "," + r.value + "," + r.unit + "\n";
  return out;
}

// header axis1,axis2,value with the actual axis names; rows in row-major
// grid order
inline std::string surface_to_csv(const SurfaceGrid& grid) {
  std::string out = grid.axis1_name + "," + grid.axis2_name + ",value\n";
  const std::size_t cols = grid.axis2_values.size();
  for (std::size_t i = 0; i < grid.axis1_values.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out += format_double(grid.axis1_values[i]) + "," +
             format_double(grid.axis2_values[j]) + "," +
             format_double(grid.values[i * cols + j]) + "\n";
  return out;
}

inline nlohmann::json surface_to_json(const SurfaceGrid& grid,
                                      nlohmann::json meta = nlohmann::json::object()) {
  meta["axis1_name"] = grid.axis1_name;
  meta["axis2_name"] = grid.axis2_name;
  for (const auto& [key, value] : grid.metadata) meta[key] = value;
  nlohmann::json data = nlohmann::json::array();
  const std::size_t cols = grid.axis2_values.size();
  for (std::size_t i = 0; i < grid.axis1_values.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      data.push_back({grid.axis1_values[i], grid.axis2_values[j], grid.values[i * cols + j]});
  return {{"meta", std::move(meta)}, {"data", std::move(data)}};
}

} // namespace ifm
