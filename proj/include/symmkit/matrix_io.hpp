#pragma once

#include <string>

#include <json.hpp>

#include "symmkit/types.hpp"

namespace symmkit {

// JSON form: {"rows": r, "cols": c, "entries": [[e, ...], ...]} where an
// entry is a number (real) or a pair [re, im]; a bare nested array is also
// accepted.  CSV form: one row per line, comma-separated real entries.
CMatrix matrix_from_json(const nlohmann::json& j, int dim_cap = kDefaultDimCap);
nlohmann::json matrix_to_json(const CMatrix& m);

// Dispatches on the file extension (.json / .csv).
CMatrix load_matrix(const std::string& path, int dim_cap = kDefaultDimCap);
void save_matrix_json(const CMatrix& m, const std::string& path);

// FNV-1a over the little-endian bytes of the entries (row-major); ties
// reports and certificates to their inputs.
std::string matrix_digest(const CMatrix& m);

}  // namespace symmkit
