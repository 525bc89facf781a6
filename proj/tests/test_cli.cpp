// Runs the igusa executable and inspects its output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "igusa/io.hpp"

using namespace igusa;

namespace {

struct Run {
  std::string out;
  int status;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string(IGUSA_CLI) + " " + args;
  if (!input.empty()) cmd += " --inline " + quote(input);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) out.append(buf.data(), n);
  const int st = pclose(pipe);
  return {out, WIFEXITED(st) ? WEXITSTATUS(st) : -1};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string x2_z3 = R"({"p":"3","matrix":[["1"]]})";

}  // namespace

TEST_CASE("zeta prints the rational function first") {
  auto r = run("zeta", x2_z3);
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "(2/3) / (1 - (1/3)*t^2)");
}

TEST_CASE("classify over Z_2") {
  auto r = run("classify", R"({"p":"2","matrix":[["1","0","0"],["0","3","0"],["0","0","5"]]})");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "Sq(1) + Hyp");
}

TEST_CASE("json output round-trips") {
  const std::vector<std::string> inputs = {
      x2_z3,
      R"({"p":"5","matrix":[["1","2"],["2","3"]],"linear":["5","0"],"constant":"25"})",
      R"({"p":"2","f":"2","matrix":[["0","1","0"],["1","0","0"],["0","0","0"]],"linear":["0","0","4"]})",
  };
  for (const auto& in : inputs) {
    auto r = run("zeta --format json --K 6", in);
    REQUIRE(r.status == 0);
    const Json j = Json::parse(r.out);
    CHECK(dump(j) == r.out);
    const RationalFunction z = rational_function_from_json(j["zeta"]);
    CHECK(to_json(z) == j["zeta"]);
    const auto s = z.series_prefix(6);
    for (int i = 0; i < 6; ++i) CHECK(rational_from_json(j["series"][i]) == s[i]);
    // The closed form agrees with what the library computes for the same input.
    CHECK(z == zeta(reduce_standard(parse_polynomial(in)).form).zf);
  }
}

TEST_CASE("verify passes and reports json") {
  auto r = run("verify --K 6", R"({"p":"3","matrix":[["1","1"],["1","2"]],"linear":["3","0"],"constant":"9"})");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "PASS");
  r = run("verify --format json --K 5", R"({"p":"2","matrix":[["2","1","0"],["1","2","0"],["0","0","0"]],"linear":["0","0","4"]})");
  CHECK(r.status == 0);
  CHECK(Json::parse(r.out)["status"] == "PASS");
}

TEST_CASE("other subcommands") {
  CHECK(first_line(run("poincare", x2_z3).out) == "(1 + (1/3)*t) / (1 - (1/3)*t^2)");
  CHECK(first_line(run("poles", x2_z3).out) == "1 - (1/3)*t^2");
  auto g = run("gf --K 2", R"({"p":"3","matrix":[["1"]],"linear":["3"]})");
  CHECK(g.status == 0);
  CHECK(g.out.find("  0 : (1/3)\n") != std::string::npos);
  CHECK(run("reduce", x2_z3).out == "Sq(1)\n");
}

TEST_CASE("errors") {
  auto r = run("zeta --format json", R"({"p":"4","matrix":[["1"]]})");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.out)["error"]["type"] == "domain");
  r = run("zeta --format json", R"({"p":"3","matrix":[["1"]],"color":"red"})");
  CHECK(r.status == 1);
  CHECK(Json::parse(r.out)["error"]["type"] == "parse");
  CHECK(run("zeta", "{not json").status == 1);
  CHECK(run("zeta", R"({"p":"2","matrix":[["1"]],"constant":"1"})").status == 1);
  CHECK(run("zeta --K 65", x2_z3).status == 1);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("zeta --help").status == 0);
}
