#include "nck/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nck {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) malformed(where + ": expected a number");
  return j.get<double>();
}

Index size_at(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) malformed(where + ": missing \"" + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    malformed(where + ": \"" + key + "\" must be a nonnegative integer");
  }
  return static_cast<Index>(v.get<long long>());
}

Matrix matrix_at(const Json& j, const std::string& where) {
  if (!j.is_object()) malformed(where + ": expected a matrix object");
  const Index rows = size_at(j, "rows", where);
  const Index cols = size_at(j, "cols", where);
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    malformed(where + ": missing \"entries\" array");
  }
  const Json& entries = j.at("entries");
  if (static_cast<Index>(entries.size()) != rows * cols) {
    malformed(where + ": expected " + std::to_string(rows * cols) + " entries, got " +
              std::to_string(entries.size()));
  }
  Matrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const Json& e = entries[static_cast<std::size_t>(k)];
    const std::string at = where + ".entries[" + std::to_string(k) + "]";
    if (e.is_number()) {
      m(k / cols, k % cols) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      m(k / cols, k % cols) = Complex(number_at(e[0], at), number_at(e[1], at));
    } else {
      malformed(at + ": expected [re, im]");
    }
  }
  return m;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Json to_json(const RealMatrix& m) { return to_json(Matrix(m.cast<Complex>())); }

Json to_json(const OpSequence& x) {
  Json items = Json::array();
  for (const Matrix& m : x.items) items.push_back(to_json(m));
  return {{"dim", x.dim}, {"items", std::move(items)}};
}

Json to_json(const Profile& f) {
  Json steps = Json::array();
  for (const Step& s : f.steps()) steps.push_back({s.value, s.width});
  return {{"steps", std::move(steps)}};
}

Matrix matrix_from_json(const Json& j) { return matrix_at(j, "matrix"); }

OpSequence sequence_from_json(const Json& j) {
  if (!j.is_object()) malformed("sequence: expected an object");
  const Index d = size_at(j, "dim", "sequence");
  if (!j.contains("items") || !j.at("items").is_array()) malformed("sequence: missing \"items\" array");
  OpSequence x(d, {});
  const Json& items = j.at("items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    Matrix m = matrix_at(items[i], "sequence.items[" + std::to_string(i) + "]");
    if (m.rows() != d || m.cols() != d) {
      malformed("sequence.items[" + std::to_string(i) + "]: expected " + std::to_string(d) + "x" +
                std::to_string(d));
    }
    x.items.push_back(std::move(m));
  }
  try {
    x.validate();
  } catch (const Error& e) {
    malformed(std::string("sequence: ") + e.what());
  }
  return x;
}

Profile profile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("steps") || !j.at("steps").is_array()) {
    malformed("profile: expected {\"steps\": [[value, width], ...]}");
  }
  std::vector<Step> steps;
  const Json& arr = j.at("steps");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = "profile.steps[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 2) malformed(at + ": expected [value, width]");
    steps.push_back({number_at(arr[i][0], at), number_at(arr[i][1], at)});
  }
  try {
    return Profile(std::move(steps));
  } catch (const Error& e) {
    malformed(std::string("profile: ") + e.what());
  }
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    malformed(source + ": JSON syntax error at line " + std::to_string(line) + ", column " +
              std::to_string(column));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nck
