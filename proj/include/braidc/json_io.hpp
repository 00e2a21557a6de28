#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "braidc/alphabet.hpp"
#include "braidc/complex_matrix.hpp"
#include "braidc/lp_format.hpp"

namespace braidc {

using nlohmann::json;

/// Matrix wire format: array of rows, each row an array of [re, im] pairs.
inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix_from_json: expected a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (int c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument("matrix_from_json: entries must be [re, im] pairs");
      m(r, c) = Complex{cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  if (!m.all_finite()) throw std::invalid_argument("matrix_from_json: non-finite entry");
  return m;
}

/// Matrix serialization with 17-significant-digit numbers (exact double
/// round-trip), emitted by hand to control the formatting.
inline std::string matrix_to_json_text(const ComplexMatrix& m, const std::string& indent = "") {
  std::string out = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) out += ",";
    out += "\n" + indent + "  [";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += "[" + format_number(m(r, c).real()) + ", " + format_number(m(r, c).imag()) + "]";
    }
    out += "]";
  }
  out += "\n" + indent + "]";
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  f >> j;
  return j;
}

inline ComplexMatrix load_matrix_file(const std::string& path) {
  return matrix_from_json(load_json_file(path));
}

/// Alphabet configuration: {"alpha": 2.4, "q_exponent_k": 1,
/// "cphase_theta1": -1.772, "cphase_theta2": -1.682, "v_block": [[...]]}.
/// Missing keys keep their defaults.
inline AlphabetParams alphabet_params_from_json(const json& j) {
  AlphabetParams p;
  if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
  if (j.contains("q_exponent_k")) p.q_exponent_k = j.at("q_exponent_k").get<int>();
  if (j.contains("cphase_theta1")) p.cphase_theta1 = j.at("cphase_theta1").get<double>();
  if (j.contains("cphase_theta2")) p.cphase_theta2 = j.at("cphase_theta2").get<double>();
  if (j.contains("v_block")) p.v_block = matrix_from_json(j.at("v_block"));
  return p;
}

inline AlphabetParams load_alphabet_config(const std::string& path) {
  return alphabet_params_from_json(load_json_file(path));
}

/// One row of the reference results tables: which metric the value is,
/// and the digit program it was reported for. mixed marks rows whose
/// digit string is not a single repeated gate (order-sensitive in
/// principle).
struct TableFixtureRow {
  int table = 0;
  int depth = 0;
  std::string metric;  // "J" | "d2" | "D_CNOT" | "D_PE"
  double value = 0.0;
  std::string program;
  bool mixed = false;
};

inline std::vector<TableFixtureRow> fixtures_from_json(const json& j) {
  if (!j.contains("rows") || !j.at("rows").is_array())
    throw std::invalid_argument("fixtures_from_json: expected {\"rows\": [...]}");
  std::vector<TableFixtureRow> rows;
  for (const json& rj : j.at("rows")) {
    TableFixtureRow row;
    row.table = rj.at("table").get<int>();
    row.depth = rj.at("depth").get<int>();
    row.metric = rj.at("metric").get<std::string>();
    row.value = rj.at("value").get<double>();
    row.program = rj.at("program").get<std::string>();
    if (rj.contains("mixed"))
      row.mixed = rj.at("mixed").get<bool>();
    else
      row.mixed = row.program.find_first_not_of(row.program.empty() ? '4' : row.program[0]) !=
                  std::string::npos;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<TableFixtureRow> load_fixtures(const std::string& path) {
  return fixtures_from_json(load_json_file(path));
}

inline std::unordered_map<std::string, double> load_assignment(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.is_object()) throw std::invalid_argument("load_assignment: expected an object");
  std::unordered_map<std::string, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<double>();
  return out;
}

}  // namespace braidc
