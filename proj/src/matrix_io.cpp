#include "symmkit/matrix_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace symmkit {

static Complex entry_from_json(const nlohmann::json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw ParseError("matrix entry must be a number or a [re, im] pair");
}

CMatrix matrix_from_json(const nlohmann::json& j, int dim_cap) {
  const nlohmann::json* rows_arr = nullptr;
  if (j.is_object()) {
    if (!j.contains("entries")) throw ParseError("matrix object needs an 'entries' field");
    rows_arr = &j.at("entries");
  } else if (j.is_array()) {
    rows_arr = &j;
  } else {
    throw ParseError("matrix JSON must be an object or a nested array");
  }
  if (!rows_arr->is_array() || rows_arr->empty())
    throw ParseError("matrix entries must form a nonempty array of rows");
  const long rows = static_cast<long>(rows_arr->size());
  const auto& first = (*rows_arr)[0];
  if (!first.is_array() || first.empty())
    throw ParseError("matrix rows must be nonempty arrays");
  const long cols = static_cast<long>(first.size());
  if (rows > dim_cap || cols > dim_cap)
    throw AdmissibilityError("matrix exceeds the dimension cap of " +
                             std::to_string(dim_cap));
  if (j.is_object()) {
    if (j.contains("rows") && j.at("rows").get<long>() != rows)
      throw ParseError("declared row count does not match the entries");
    if (j.contains("cols") && j.at("cols").get<long>() != cols)
      throw ParseError("declared column count does not match the entries");
  }
  CMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const auto& row = (*rows_arr)[i];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw ParseError("matrix rows must all have the same length");
    for (long jj = 0; jj < cols; ++jj) m(i, jj) = entry_from_json(row[jj]);
  }
  return m;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (long i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j < m.cols(); ++j) {
      const Complex v = m(i, j);
      if (v.imag() == 0.0)
        row.push_back(v.real());
      else
        row.push_back(nlohmann::json::array({v.real(), v.imag()}));
    }
    entries.push_back(std::move(row));
  }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

static CMatrix matrix_from_csv(std::istream& in, int dim_cap) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("csv entry '" + cell + "' is not a number");
      }
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError("csv rows must all have the same length");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows[0].empty()) throw ParseError("csv matrix is empty");
  if (static_cast<int>(rows.size()) > dim_cap ||
      static_cast<int>(rows[0].size()) > dim_cap)
    throw AdmissibilityError("matrix exceeds the dimension cap of " +
                             std::to_string(dim_cap));
  CMatrix m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Complex(rows[i][j], 0.0);
  return m;
}

CMatrix load_matrix(const std::string& path, int dim_cap) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return matrix_from_csv(in, dim_cap);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return matrix_from_json(j, dim_cap);
  }
  throw ParseError("matrix file must end in .json or .csv: '" + path + "'");
}

void save_matrix_json(const CMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write matrix file '" + path + "'");
  out << matrix_to_json(m).dump(2) << "\n";
}

std::string matrix_digest(const CMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      mix(m(i, j).real());
      mix(m(i, j).imag());
    }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace symmkit
