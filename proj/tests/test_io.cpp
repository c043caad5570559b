#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nck/io.hpp"
#include "oracles.hpp"

using namespace nck;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("matrix round trip") {
  oracle::Gen gen(71);
  const Matrix m = gen.complex_matrix(3, 2);
  const Matrix back = matrix_from_json(parse_json(to_json(m).dump()));
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("sequence and profile round trip") {
  oracle::Gen gen(72);
  const OpSequence x = gen.sequence(2, 3);
  CHECK(max_distance(sequence_from_json(parse_json(to_json(x).dump())), x) == 0.0);
  const Profile f(std::vector<Step>{{2.0, 0.5}, {1.0, 1.5}});
  CHECK(profile_from_json(parse_json(to_json(f).dump())) == f);
}

TEST_CASE("real entries are accepted") {
  const Matrix m = matrix_from_json(parse_json(R"({"rows": 1, "cols": 2, "entries": [1.5, [0, -2]]})"));
  CHECK(m(0, 0) == Complex(1.5, 0.0));
  CHECK(m(0, 1) == Complex(0.0, -2.0));
}

TEST_CASE("malformed input names the position") {
  try {
    parse_json("{\n  \"dim\": 2,\n  \"items\": [\n}");
    FAIL("expected MalformedInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedInput);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK(kind_of([] { matrix_from_json(parse_json(R"({"rows": 2, "cols": 2, "entries": [1]})")); }) ==
        ErrorKind::MalformedInput);
  CHECK(kind_of([] { sequence_from_json(parse_json(R"({"dim": 2, "items": []})")); }) ==
        ErrorKind::MalformedInput);
  CHECK(kind_of([] { profile_from_json(parse_json(R"({"steps": [[1, -1]]})")); }) ==
        ErrorKind::MalformedInput);
  CHECK(kind_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorKind::MalformedInput);
}

TEST_CASE("number formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
}
