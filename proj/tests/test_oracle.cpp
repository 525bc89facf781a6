#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks/checks.hpp"
#include "igusa/oracle.hpp"

using namespace igusa;
using namespace igusa::checks;

namespace {

RingElem Z(const FieldPtr& F, std::int64_t a) { return RingElem::from_int(F, F->max_precision(), a); }

QuadPoly poly(const FieldPtr& F, std::vector<std::vector<std::int64_t>> m, std::vector<std::int64_t> b = {},
              std::int64_t c = 0) {
  const int n = static_cast<int>(m.size());
  QuadPoly Q(F, F->max_precision(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Q.M[i][j] = Z(F, m[i][j]);
  for (int i = 0; i < static_cast<int>(b.size()); ++i) Q.b[i] = Z(F, b[i]);
  Q.c = Z(F, c);
  return Q;
}

std::vector<mpz_class> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("exhaustive counts") {
  auto F3 = Field::make(3);
  auto h = count_exhaustive(poly(F3, {{0}}, {1}), 2);
  CHECK(h.counts == std::vector<mpz_class>(9, 1));
  CHECK(count_exhaustive(poly(F3, {{1}}), 1).counts == ints({1, 2, 0}));
  auto c = count_exhaustive(QuadPoly(F3, F3->max_precision(), 0), 1);
  CHECK(c.counts == ints({1, 0, 0}));
  QuadPoly one(F3, F3->max_precision(), 0);
  one.c = Z(F3, 1);
  CHECK(count_exhaustive(one, 1).counts == ints({0, 1, 0}));
  CHECK(count_exhaustive(one, 1).domain_size() == 1);
}

TEST_CASE("convolution of histograms") {
  auto F3 = Field::make(3);
  auto sq = count_exhaustive(poly(F3, {{1}}), 1);
  CHECK(convolve(sq, sq) == count_exhaustive(poly(F3, {{1, 0}, {0, 1}}), 1));
  auto delta = count_exhaustive(QuadPoly(F3, F3->max_precision(), 0), 1);
  CHECK(convolve(sq, delta) == sq);
  auto x = count_exhaustive(poly(F3, {{0}}, {1}), 2);
  CHECK(convolve(x, x).counts == std::vector<mpz_class>(9, 9));
  CHECK_THROWS_AS(convolve(sq, x), DomainError);
}

TEST_CASE("zeta series by counting") {
  auto F3 = Field::make(3);
  CHECK(zeta_series_oracle(poly(F3, {{1}}), 4) == std::vector<mpq_class>{mpq_class(2, 3), 0, mpq_class(2, 9), 0});
  QuadPoly one(F3, F3->max_precision(), 0);
  one.c = Z(F3, 1);
  CHECK(zeta_series_oracle(one, 4) == std::vector<mpq_class>{1, 0, 0, 0});
  auto F2 = Field::make(2);
  auto s = zeta_series_oracle(poly(F2, {{0, 1}, {1, 0}}), 3);
  CHECK(s[0] == 0);
  // 2xy over Z_2: v = 1 iff x, y both units.
  CHECK(s[1] == mpq_class(1, 4));
  // Decomposed and exhaustive paths agree on a three-variable form.
  auto f = poly(F3, {{1, 0, 0}, {0, 0, 3}, {0, 3, 0}});
  CHECK(value_histogram(f, 3) == count_exhaustive(f, 3));
}

TEST_CASE("verification reports") {
  auto F3 = Field::make(3);
  RationalFunction z(Poly{mpq_class(2, 3)}, Poly{1, 0, mpq_class(-1, 3)});
  auto r = verify(poly(F3, {{1}}), z, 8);
  CHECK(r.pass);
  CHECK(r.first_mismatch == -1);
  r = verify(poly(F3, {{0}}, {1}), RationalFunction(1), 2);
  CHECK_FALSE(r.pass);
  CHECK(r.first_mismatch == 0);
  CHECK(r.oracle_prefix[0] == mpq_class(2, 3));
  QuadPoly one(F3, F3->max_precision(), 0);
  one.c = Z(F3, 1);
  CHECK(verify(one, RationalFunction(1), 5).pass);
}

TEST_CASE("oracle consistency sweep") {
  auto r = check_oracle_consistency();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("zero counts are divisible by the expected power of q") {
  auto r = check_zero_count_divisibility();
  INFO(r.failure);
  CHECK(r.ok);
  CHECK(r.cases > 50);
}

TEST_CASE("heads determine the zeta function of a unimodular form") {
  auto r = check_head_recursion();
  INFO(r.failure);
  CHECK(r.ok);
}
