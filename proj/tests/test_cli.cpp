#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "dowker/formats.hpp"

using dowker::read_file;
using dowker::write_file_atomic;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dowker::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("dowker_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& content) const {
    write_file_atomic(dir / name, content);
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string read(const std::string& name) const { return read_file(dir / name); }
};

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const char* kCirclePoints =
    "1,0\n0.7071,0.7071\n0,1\n-0.7071,0.7071\n-1,0\n-0.7071,-0.7071\n0,-1\n0.7071,-0.7071\n0.92,0.38\n-0.38,0.92\n";

}  // namespace

TEST_CASE("nerve") {
  Scratch s("nerve");
  const auto in = s.file("two.csv", "0,0\n1,0\n");
  auto r = run({"nerve", "--input", in, "--format", "points", "--dim-cap", "1", "--out", s.path("o")});
  CHECK(r.code == 0);
  CHECK(s.read("o/complex.csv") == "0;0\n1;0\n0|1;1\n");
  r = run({"nerve", "--input", in, "--format", "points", "--dim-cap", "0", "--out", s.path("v")});
  CHECK(r.code == 0);
  CHECK(s.read("v/complex.csv") == "0;0\n1;0\n");
}

TEST_CASE("nerve input errors") {
  Scratch s("nerve_errors");
  const auto empty = s.file("empty.csv", "");
  auto r = run({"nerve", "--input", empty, "--format", "points", "--out", s.path("o")});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  const auto bad = s.file("bad.csv", "0,1\nx,0\n");
  r = run({"nerve", "--input", bad, "--format", "distances", "--out", s.path("o")});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2, column 1") != std::string::npos);
  r = run({"nerve", "--input", bad, "--format", "yaml"});
  CHECK(r.code == 2);
  r = run({"nerve", "--input", s.path("missing.csv"), "--format", "points"});
  CHECK(r.code == 2);
  r = run({"nerve", "--format", "points"});
  CHECK(r.code == 2);
}

TEST_CASE("budget flag and environment") {
  Scratch s("budget");
  const auto in = s.file("c.csv", kCirclePoints);
  auto r = run({"nerve", "--input", in, "--format", "points", "--budget", "5", "--out", s.path("o")});
  CHECK(r.code == 2);
  CHECK(r.err.find("budget") != std::string::npos);
  ::setenv("DOWKER_SPARSE_BUDGET", "5", 1);
  r = run({"nerve", "--input", in, "--format", "points", "--out", s.path("o")});
  CHECK(r.code == 2);
  r = run({"nerve", "--input", in, "--format", "points", "--budget", "100000", "--out", s.path("o")});
  CHECK(r.code == 0);
  ::setenv("DOWKER_SPARSE_BUDGET", "lots", 1);
  r = run({"nerve", "--input", in, "--format", "points", "--out", s.path("o")});
  CHECK(r.code == 2);
  ::unsetenv("DOWKER_SPARSE_BUDGET");
}

TEST_CASE("sparsify") {
  Scratch s("sparsify");
  const auto in = s.file("c.csv", kCirclePoints);
  auto r = run({"sparsify", "--input", in, "--format", "points", "--strategy", "none", "--out", s.path("none")});
  REQUIRE(r.code == 0);
  const auto stats = nlohmann::json::parse(s.read("none/stats.json"));
  CHECK(stats["ratio"] == 1.0);
  CHECK(stats["n"] == 10);
  CHECK(stats["m"] == 10);
  CHECK(stats["dim_cap"] == 2);
  CHECK(stats["strategy"] == "none");
  CHECK(stats["translation"] == "id");
  std::vector<std::string> keys;
  for (const auto& [k, v] : stats.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"dim_cap", "full_simplices", "m", "n", "ratio", "sparse_simplices",
                                         "strategy", "translation"});
  CHECK(s.read("none/plan.csv").find("landmark,parent,restriction,slope\n") == 0);
  CHECK(line_count(s.read("none/sparse_complex.csv")) == stats["full_simplices"]);

  for (const std::string strategy : {"canonical", "parent"}) {
    r = run({"sparsify", "--input", in, "--format", "points", "--strategy", strategy, "--out", s.path(strategy)});
    CHECK(r.code == 0);
    const auto st = nlohmann::json::parse(s.read(strategy + "/stats.json"));
    CHECK(st["sparse_simplices"] <= st["full_simplices"]);
  }
  r = run({"sparsify", "--input", in, "--format", "points", "--strategy", "sheehy", "--alpha", "mult:2", "--out",
           s.path("sheehy")});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(s.read("sheehy/stats.json"))["translation"] == "mult:2");

  r = run({"sparsify", "--input", in, "--format", "points", "--strategy", "fancy"});
  CHECK(r.code == 2);
  r = run({"sparsify", "--input", in, "--format", "points", "--strategy", "sheehy", "--alpha", "add:1"});
  CHECK(r.code == 2);
  const auto rect = s.file("rect.csv", "id,u,v\na,1,2\n");
  r = run({"sparsify", "--input", rect, "--format", "dowker", "--strategy", "sheehy", "--alpha", "mult:2"});
  CHECK(r.code == 2);
  r = run({"sparsify", "--input", in, "--format", "points", "--seed-landmark", "10"});
  CHECK(r.code == 2);
}

TEST_CASE("sparsify is deterministic") {
  Scratch s("determinism");
  const auto in = s.file("c.csv", kCirclePoints);
  for (const char* out : {"a", "b"}) {
    CHECK(run({"sparsify", "--input", in, "--format", "points", "--strategy", "canonical", "--truncate", "--alpha",
               "mult:1.5", "--out", s.path(out)})
              .code == 0);
  }
  CHECK(s.read("a/sparse_complex.csv") == s.read("b/sparse_complex.csv"));
  CHECK(s.read("a/plan.csv") == s.read("b/plan.csv"));
  CHECK(s.read("a/stats.json") == s.read("b/stats.json"));
}

TEST_CASE("persist") {
  Scratch s("persist");
  const auto single = s.file("single.csv", "0;0.5\n");
  auto r = run({"persist", "--input", single, "--format", "complex", "--dim-cap", "1", "--out", s.path("one")});
  REQUIRE(r.code == 0);
  CHECK(s.read("one/diagram.csv") == "dimension,birth,death\n0,0.5,inf\n");

  const auto tri = s.file("tri.csv", "0;0\n1;0\n2;0\n0|1;1\n0|2;1\n1|2;1\n0|1|2;2\n");
  r = run({"persist", "--input", tri, "--format", "complex", "--out", s.path("tri"), "--svg"});
  REQUIRE(r.code == 0);
  CHECK(s.read("tri/diagram.csv") == "dimension,birth,death\n0,0,1\n0,0,1\n0,0,inf\n1,1,2\n");
  CHECK(s.read("tri/diagram.svg").find("<svg") == 0);

  const auto open = s.file("open.csv", "0;0\n0|1;1\n");
  r = run({"persist", "--input", open, "--format", "complex", "--out", s.path("open")});
  CHECK(r.code == 2);
  CHECK(r.err.find("face {1} of {0,1} is missing") != std::string::npos);

  const auto pts = s.file("c.csv", kCirclePoints);
  r = run({"persist", "--input", pts, "--format", "points", "--out", s.path("full")});
  REQUIRE(r.code == 0);
  r = run({"persist", "--input", pts, "--format", "points", "--strategy", "canonical", "--out", s.path("canon")});
  REQUIRE(r.code == 0);
  CHECK(s.read("full/diagram.csv") == s.read("canon/diagram.csv"));
}

TEST_CASE("compare") {
  Scratch s("compare");
  const auto d = s.file("d.csv", "dimension,birth,death\n0,0,1\n0,0,inf\n1,1,2\n");
  auto r = run({"compare", d, d, "--alpha", "id", "--out", s.path("same")});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") == 0);
  CHECK(s.read("same/matching.csv") == "dimension,index_a,index_b\n0,0,0\n0,1,1\n1,2,2\n");

  const auto a = s.file("a.csv", "dimension,birth,death\n0,1,inf\n");
  const auto b = s.file("b.csv", "dimension,birth,death\n0,2,inf\n");
  r = run({"compare", a, b, "--alpha", "mult:1.01", "--out", s.path("disjoint")});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") == 0);
  CHECK(r.out.find("[1, inf)") != std::string::npos);
  CHECK_FALSE(fs::exists(s.path("disjoint/matching.csv")));

  r = run({"compare", a, b, "--alpha", "pow:2"});
  CHECK(r.code == 2);
  const auto broken = s.file("broken.csv", "dimension,birth,death\n0,2,1\n");
  r = run({"compare", broken, a});
  CHECK(r.code == 2);
  r = run({"compare", a});
  CHECK(r.code == 2);
}

TEST_CASE("truncated and full diagrams match through the cli") {
  Scratch s("interleaved");
  const auto pts = s.file("c.csv", kCirclePoints);
  REQUIRE(run({"persist", "--input", pts, "--format", "points", "--out", s.path("full")}).code == 0);
  REQUIRE(run({"persist", "--input", pts, "--format", "points", "--truncate", "--alpha", "mult:1.5", "--out",
               s.path("trunc")})
              .code == 0);
  const auto r =
      run({"compare", s.path("trunc/diagram.csv"), s.path("full/diagram.csv"), "--alpha", "mult:1.5", "--out", s.path("m")});
  CHECK(r.code == 0);
  CHECK(fs::exists(s.path("m/matching.csv")));
}

TEST_CASE("help and missing subcommand") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}
