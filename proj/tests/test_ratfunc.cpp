#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "igusa/padic.hpp"
#include "igusa/ratfunc.hpp"

using namespace igusa;

namespace {

const mpq_class third(1, 3);

RationalFunction geometric(long q) {
  return RationalFunction(Poly{1 - mpq_class(1, q)}, Poly{1, -mpq_class(1, q)});
}

std::vector<mpq_class> q_list(std::initializer_list<mpq_class> xs) { return std::vector<mpq_class>(xs); }

}  // namespace

TEST_CASE("polynomial arithmetic") {
  Poly a{1, 2, 3}, b{0, 1};
  CHECK((a * b) == Poly{0, 1, 2, 3});
  CHECK((a - a).is_zero());
  auto [quo, rem] = divmod(Poly{-1, 0, 1}, Poly{-1, 1});
  CHECK(quo == Poly{1, 1});
  CHECK(rem.is_zero());
  CHECK(gcd(Poly{-1, 0, 1}, Poly{2, -2}) == Poly{-1, 1});
  CHECK(Poly{0, 0, 0}.is_zero());
}

TEST_CASE("rational function arithmetic") {
  RationalFunction inv(Poly{1}, Poly{1, -1});
  CHECK(inv + RationalFunction(0) == inv);
  CHECK(RationalFunction(Poly{1, 0, -1}, Poly{1, -1}) == RationalFunction(Poly{1, 1}));
  auto g = geometric(3) * RationalFunction::monomial(1, 1);
  CHECK(g == RationalFunction(Poly{0, mpq_class(2, 3)}, Poly{1, -third}));
  CHECK_THROWS_AS(inv / RationalFunction(0), DomainError);
  CHECK_THROWS_AS(RationalFunction(Poly{1}, Poly{0, 1}), DomainError);
  // den(0) is scaled to 1
  RationalFunction h(Poly{2}, Poly{2, -1});
  CHECK(h.den() == Poly{1, mpq_class(-1, 2)});
  CHECK(h.num() == Poly{1});
}

TEST_CASE("series prefix") {
  CHECK(geometric(3).series_prefix(3) == q_list({mpq_class(2, 3), mpq_class(2, 9), mpq_class(2, 27)}));
  CHECK(RationalFunction(1).series_prefix(4) == q_list({1, 0, 0, 0}));
  RationalFunction sq(Poly{mpq_class(2, 3)}, Poly{1, 0, -third});
  CHECK(sq.series_prefix(4) == q_list({mpq_class(2, 3), 0, mpq_class(2, 9), 0}));
}

TEST_CASE("text rendering") {
  RationalFunction sq(Poly{mpq_class(2, 3)}, Poly{1, 0, -third});
  CHECK(sq.to_string() == "(2/3) / (1 - (1/3)*t^2)");
  CHECK(RationalFunction(Poly{1, 1}).to_string() == "1 + t");
  CHECK(RationalFunction(0).to_string() == "0");
  CHECK(RationalFunction(Poly{0, -1}, Poly{1, -third}).to_string() == "-t / (1 - (1/3)*t)");
  CHECK(RationalFunction(Poly{mpq_class(1, 4), 0, 3}).to_string() == "(1/4) + 3*t^2");
}

TEST_CASE("Poincare transform") {
  CHECK(poincare_from_zeta(RationalFunction(1)) == RationalFunction(1));
  CHECK(poincare_from_zeta(geometric(3)) == RationalFunction(Poly{1}, Poly{1, -third}));
  RationalFunction sq(Poly{mpq_class(2, 3)}, Poly{1, 0, -third});
  for (const auto& Z : {RationalFunction(1), geometric(3), sq, RationalFunction(0)})
    CHECK(zeta_from_poincare(poincare_from_zeta(Z)) == Z);
}

TEST_CASE("normalize preserves values") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> coef(-6, 6), pt(-50, 50), ptd(1, 17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<mpq_class> n(4), d(3), common(2);
    for (auto& x : n) x = coef(rng);
    for (auto& x : d) x = coef(rng);
    d[0] = 1 + std::abs(coef(rng));
    common = {1, mpq_class(coef(rng), 5)};
    const Poly N = Poly(n) * Poly(common), D = Poly(d) * Poly(common);
    if (D.is_zero()) continue;
    const RationalFunction r(N, D);
    CHECK(RationalFunction(r.num(), r.den()) == r);
    int tested = 0;
    for (int s = 0; tested < 25 && s < 1000; ++s) {
      mpq_class x(pt(rng), ptd(rng));
      x.canonicalize();
      if (D.eval(x) == 0 || r.den().eval(x) == 0) continue;
      CHECK(r.eval(x) == N.eval(x) / D.eval(x));
      ++tested;
    }
  }
}

TEST_CASE("series of a product is the Cauchy product") {
  RationalFunction a(Poly{1, 2}, Poly{1, -third}), b(Poly{mpq_class(1, 2), 0, 1}, Poly{1, 0, mpq_class(-1, 9)});
  const int K = 12;
  auto sa = a.series_prefix(K), sb = b.series_prefix(K), sab = (a * b).series_prefix(K);
  for (int n = 0; n < K; ++n) {
    mpq_class s = 0;
    for (int i = 0; i <= n; ++i) s += sa[i] * sb[n - i];
    CHECK(sab[n] == s);
  }
}

TEST_CASE("denominator shapes") {
  const mpq_class q = 3;
  std::vector<DenominatorShape> shapes;
  DenominatorShape a;
  a.factors = {{DenominatorFactor::OneMinusT, 1, 2}};
  DenominatorShape b;
  b.factors = {{DenominatorFactor::OneMinusT, 1, 1}, {DenominatorFactor::OneMinusT2, 3, 1}};
  DenominatorShape c;
  c.factors = {{DenominatorFactor::OneMinusT2, 1, 1}, {DenominatorFactor::OnePlusT, 2, 1}};
  for (const auto& s : {a, b, c}) {
    const Poly den = s.expand(q);
    const auto found = denominator_shape(den, 3);
    CHECK(found.complete());
    CHECK(found.expand(q) == den);
    CHECK(found.factors == s.factors);
  }
  CHECK(denominator_shape(Poly{1}, 3).to_string() == "1");
  CHECK(b.to_string() == "(1 - t/q)(1 - t^2/q^3)");
  auto odd = denominator_shape(Poly{1, mpq_class(-2, 7)}, 3);
  CHECK_FALSE(odd.complete());
  CHECK(odd.expand(q) == Poly{1, mpq_class(-2, 7)});
}
