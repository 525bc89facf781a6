// Runs the ten acceptance criteria; one line per criterion, exit status 1 if any fails.
// A criterion passes when every exact comparison holds and it finishes inside its time budget.
//   acceptance [N ...]   run only the listed criteria

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "checks/checks.hpp"

using namespace igusa::checks;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Report()> run;
};

Report all_of(std::initializer_list<std::function<Report()>> parts) {
  Report rep;
  for (const auto& p : parts) rep.merge(p());
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "sums of three squares over Z_2 and Ell + Ell", 1, check_three_squares_table},
      {2, "odd-p table against ig of heads", 10, check_odd_head_ig},
      {3, "2-adic table against head products", 300, check_two_adic_block_ig},
      {4, "odd-p closed forms against the counting oracle", 120, [] { return check_odd_against_oracle(8); }},
      {5, "2-adic closed forms against the counting oracle", 300, [] { return check_two_against_oracle(8); }},
      {6, "pole classification and the denominator bound", 60, check_poles},
      {7, "reduction preserves value distributions", 120, [] { return check_reduction_isospectral(5); }},
      {8, "generating function calculus", 120,
       [] { return all_of({check_calculus_properties, [] { return check_head_recursion(8); }, check_assembled_gf}); }},
      {9, "Teichmuller congruences over GR(8, f)", 60, [] { return check_teichmuller_arithmetic(3); }},
      {10, "closed-form heads against enumeration", 60, check_closed_form_heads},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    const Report rep = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = rep.ok && rep.cases > 0 && in_time;
    failed += !pass;
    std::printf("criterion %2d %s: %s (%zu comparisons, %.2f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL",
                c.name.c_str(), rep.cases, secs, c.budget_seconds);
    if (!rep.ok) std::printf("    first failure: %s\n", rep.failure.c_str());
    if (!in_time) std::printf("    over the time budget\n");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
