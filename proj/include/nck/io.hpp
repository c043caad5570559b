#pragma once

// JSON formats:
//   Matrix      {"rows": n, "cols": m, "entries": [[re, im], ...]}  (row-major)
//   OpSequence  {"dim": d, "items": [Matrix, ...]}
//   Profile     {"steps": [[value, width], ...]}
// Parse and shape errors raise MalformedInput with line/column information.

#include <json.hpp>

#include <string>

#include "nck/profile.hpp"
#include "nck/rowcol.hpp"

namespace nck {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json to_json(const RealMatrix& m);
Json to_json(const OpSequence& x);
Json to_json(const Profile& f);

Matrix matrix_from_json(const Json& j);
OpSequence sequence_from_json(const Json& j);
Profile profile_from_json(const Json& j);

/// Parses text; syntax errors report "line L, column C".
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest round-trip decimal (%.17g).
std::string format_number(double v);

}  // namespace nck
