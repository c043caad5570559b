#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "nck/io.hpp"
#include "oracles.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = nck::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    REQUIRE(it != header.end());
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

const std::string kFixture = NCK_TEST_DATA "/e11_e12.json";

}  // namespace

TEST_CASE("empty argv prints usage and exits 1") {
  const Run r = run({});
  CHECK(r.code == 1);
  CHECK(r.out.find("Usage") != std::string::npos);
  CHECK(r.out.find("counterexample") != std::string::npos);
}

TEST_CASE("unknown subcommands and flags exit 1") {
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"decompose", "--input", kFixture, "--bogus"}).code == 1);
  CHECK(run({"--format", "xml", "decompose", "--input", kFixture}).code == 1);
}

TEST_CASE("family 1 sweep reproduces sqrt(H_N)") {
  const Run r = run({"counterexample", "--family", "1", "--sweep", "16,64,256,1024"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 4);
  const std::size_t n_col = csv.column("N");
  const std::size_t ratio = csv.column("ratio");
  const std::size_t verified = csv.column("verified");
  for (const auto& row : csv.rows) {
    const int n = std::stoi(row[n_col]);
    CHECK(std::stod(row[ratio]) == doctest::Approx(std::sqrt(oracle::harmonic(n))).epsilon(1e-9));
    CHECK(row[verified] == (n <= 512 ? "true" : "false"));
  }
  CHECK(csv.comments.size() == 2);
  CHECK(csv.comments[1].find("family=1") != std::string::npos);
}

TEST_CASE("decompose on the fixture") {
  const Run csv_run = run({"decompose", "--input", kFixture});
  REQUIRE(csv_run.code == 0);
  const Csv csv = parse_csv(csv_run.out);
  CHECK(std::stod(csv.rows.at(0)[csv.column("primal")]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  const Run json_run = run({"--format", "json", "decompose", "--input", kFixture, "--tol", "1e-9"});
  REQUIRE(json_run.code == 0);
  const nck::Json j = nck::parse_json(json_run.out);
  CHECK(j.at("primal").get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(j.at("meta").at("config").at("tol") == "1.0000000000000001e-09");
  const nck::OpSequence y = nck::sequence_from_json(j.at("y"));
  const nck::OpSequence z = nck::sequence_from_json(j.at("z"));
  CHECK(nck::max_distance(y + z, nck::sequence_from_json(nck::read_json_file(kFixture))) <= 1e-9);
}

TEST_CASE("factorize embeds alpha, beta, u and provenance") {
  const Run r = run({"--format", "json", "factorize", "--input", kFixture});
  REQUIRE(r.code == 0);
  const nck::Json j = nck::parse_json(r.out);
  for (const char* key : {"alpha", "beta", "u", "r_factor", "r_row", "r_col", "gap", "meta"}) CHECK(j.contains(key));
  CHECK(j.at("r_factor").get<double>() <= 1e-6);
  CHECK(nck::matrix_from_json(j.at("alpha")).rows() == 2);
}

TEST_CASE("json tables mirror csv rows") {
  const Run c = run({"counterexample", "--family", "2", "--sweep", "4,8"});
  const Run j = run({"--format", "json", "counterexample", "--family", "2", "--sweep", "4,8"});
  REQUIRE(c.code == 0);
  REQUIRE(j.code == 0);
  const Csv csv = parse_csv(c.out);
  const nck::Json doc = nck::parse_json(j.out);
  REQUIRE(doc.at("rows").size() == csv.rows.size());
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    for (std::size_t col = 0; col < csv.header.size(); ++col) {
      const nck::Json& cell = doc.at("rows")[k].at(csv.header[col]);
      if (cell.is_number_float()) {
        CHECK(cell.get<double>() == std::stod(csv.rows[k][col]));
      } else if (cell.is_number_integer()) {
        CHECK(cell.get<long long>() == std::stoll(csv.rows[k][col]));
      }
    }
  }
  CHECK(doc.at("meta").at("command") == "counterexample");
}

TEST_CASE("runs are byte-reproducible") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"ineq-suite", "--trials", "6", "--seed", "3"},
        std::vector<std::string>{"power-suite", "--trials", "3"},
        std::vector<std::string>{"khintchine-weak1", "--random", "3", "--seed", "4"},
        std::vector<std::string>{"--threads", "1", "gnorm", "--input", kFixture, "--model", "haar:8"}}) {
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("--out writes the file") {
  const std::string path = "test_cli_out.csv";
  std::remove(path.c_str());
  const Run r = run({"--out", path, "kfunc", "--input", NCK_TEST_DATA "/profile.json", "--count", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const Csv csv = parse_csv(buf.str());
  CHECK(csv.rows.size() == 5);
  CHECK(csv.rows[0][csv.column("method")] == "exact");
  std::remove(path.c_str());
}

TEST_CASE("kfunc on a matrix uses the exact K for (1, inf) and the proxy otherwise") {
  const Run exact = run({"kfunc", "--input", NCK_TEST_DATA "/matrix.json", "--t-min", "0.5", "--t-max", "0.5",
                         "--count", "1"});
  REQUIRE(exact.code == 0);
  const Csv a = parse_csv(exact.out);
  CHECK(std::stod(a.rows[0][a.column("K")]) == doctest::Approx(1.5));
  const Run proxy = run({"kfunc", "--input", NCK_TEST_DATA "/matrix.json", "--p", "2", "--q", "4"});
  REQUIRE(proxy.code == 0);
  CHECK(parse_csv(proxy.out).rows[0][2] == "holmstedt_proxy");
}

TEST_CASE("validation failures exit 1 with a diagnostic") {
  const Run missing = run({"decompose", "--input", "/nonexistent.json"});
  CHECK(missing.code == 1);
  CHECK(nck::parse_json(missing.err).at("error") == "MalformedInput");
  const Run bad_model = run({"gnorm", "--input", kFixture, "--model", "gauss"});
  CHECK(bad_model.code == 1);
  const Run cap = run({"decompose", "--input", kFixture, "--size-cap", "2"});
  CHECK(cap.code == 1);
  CHECK(nck::parse_json(cap.err).at("error") == "CapExceeded");
}

TEST_CASE("numerical failure exits 2 with a diagnostic") {
  const Run r = run({"decompose", "--input", NCK_TEST_DATA "/m1_case.json", "--max-iter", "2", "--tol", "1e-15"});
  CHECK(r.code == 2);
  const nck::Json d = nck::parse_json(r.err);
  CHECK(d.at("error") == "NoConvergence");
  CHECK(d.at("iterations") == 2);
}
