#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks/checks.hpp"
#include "igusa/genfun.hpp"
#include "igusa/zeta.hpp"

using namespace igusa;
using namespace igusa::checks;

namespace {

RingElem Z(const FieldPtr& F, std::int64_t a) { return RingElem::from_int(F, F->max_precision(), a); }
RationalFunction igr(long q) { return ig_ideal(q); }
RationalFunction t(int e, mpq_class c = 1) { return RationalFunction::monomial(c, e); }
RationalFunction k(mpq_class c) { return RationalFunction(c); }

JordanForm single(const UnimodularClass& Q) {
  JordanForm J(Q.field);
  J.blocks[0] = Q;
  return J;
}

}  // namespace

TEST_CASE("odd-p table values") {
  auto F = Field::make(3);
  const RingElem zero(F, F->max_precision());
  CHECK(odd_head_ig(F, 1, Z(F, 1), zero) == k(mpq_class(2, 3)));
  CHECK(odd_head_ig(F, 0, Z(F, 1), zero).is_zero());
  CHECK(odd_head_ig(F, 0, Z(F, 1), Z(F, 1)).is_zero());
  CHECK(odd_head_ig(F, 2, Z(F, -1), Z(F, 1)) == k(mpq_class(2, 3)) * (igr(3) + k(mpq_class(1, 3))));
  CHECK_THROWS_AS(odd_head_ig(Field::make(2), 1, Z(Field::make(2), 1), zero), DomainError);
}

TEST_CASE("odd-p evaluator examples") {
  auto F = Field::make(3);
  auto z = zeta_odd(single(UnimodularClass::square(F, Z(F, 1))));
  CHECK(z.zf == RationalFunction(Poly{mpq_class(2, 3)}, Poly{1, 0, mpq_class(-1, 3)}));
  CHECK(z.dispatch.rfind("(i)", 0) == 0);
  CHECK_FALSE(z.degenerate);

  JordanForm L(F);
  L.lambda = 0;
  z = zeta_odd(L);
  CHECK(z.zf == igr(3));
  CHECK(z.dispatch.rfind("(ii)", 0) == 0);

  JordanForm C(F);
  C.c = Z(F, 2);
  z = zeta_odd(C);
  CHECK(z.zf == k(1));
  CHECK(z.dispatch.rfind("(iii)", 0) == 0);

  z = zeta_odd(JordanForm(F));
  CHECK(z.zf.is_zero());
  CHECK(z.degenerate);

  // Tie v(c) = v(b) goes to case (ii).
  JordanForm T(F);
  T.lambda = 1;
  T.c = Z(F, 3);
  CHECK(zeta_odd(T).dispatch.rfind("(ii)", 0) == 0);
  CHECK(zeta_odd(T).zf == t(1, 1) * igr(3));
}

TEST_CASE("2-adic table values") {
  auto F = Field::make(2);
  const auto zero = UnimodularClass::zero(F);
  const auto sq = UnimodularClass::square(F, Z(F, 1));
  const auto hyp = UnimodularClass::hyperbolic(F);
  CHECK(two_adic_block_ig(hyp, zero, zero) == k(mpq_class(1, 2)) * (t(1) + t(2, mpq_class(1, 2))) * igr(2));
  CHECK(two_adic_block_ig(sq, sq, zero) == k(mpq_class(1, 2)));
  CHECK(two_adic_block_ig(zero, zero, zero).is_zero());
  CHECK(two_adic_block_ig(sq, zero, zero) == k(mpq_class(1, 2)));
  CHECK(two_adic_block_ig(zero, sq, zero).is_zero());
  // The signs: sigma for a + b = 0 mod 4, phi and psi otherwise.
  CHECK(sign_sigma(Z(F, 1), Z(F, 3)) == -1);  // (1+3)/4 = 1 has odd trace
  CHECK(sign_sigma(Z(F, 1), Z(F, 7)) == 1);
  CHECK_THROWS_AS(sign_phi(Z(F, 1), Z(F, 3), Z(F, 1)), DomainError);
  CHECK_THROWS_AS(sign_psi(Z(F, 1), Z(F, 1), Z(F, 1), Z(F, 3)), DomainError);
}

TEST_CASE("2-adic evaluator examples") {
  auto F = Field::make(2);
  auto z = zeta_2unramified(single(UnimodularClass::square(F, Z(F, 1))));
  CHECK(z.zf == RationalFunction(Poly{mpq_class(1, 2)}, Poly{1, 0, mpq_class(-1, 2)}));

  JordanForm L(F);
  L.lambda = 0;
  CHECK(zeta_2unramified(L).zf == igr(2));

  z = zeta_2unramified(single(UnimodularClass::hyperbolic(F)));
  CHECK(z.zf == k(mpq_class(1, 4)) * (t(1) + t(2, mpq_class(1, 2))) /
                    (RationalFunction(Poly{1, mpq_class(-1, 2)}) * RationalFunction(Poly{1, 0, mpq_class(-1, 4)})));
  CHECK(z.zf.series_prefix(1) == std::vector<mpq_class>{0});

  JordanForm C(F);
  C.c = Z(F, 1);
  CHECK_THROWS_AS(zeta_2unramified(C), DomainError);
  CHECK_THROWS_AS(zeta_odd(L), DomainError);
}

TEST_CASE("pole examples") {
  auto F = Field::make(3);
  CHECK(poles_odd(single(UnimodularClass::square(F, Z(F, 1)))) == Poly{1, 0, mpq_class(-1, 3)});
  CHECK(poles_odd(single(UnimodularClass::hyperbolic(F))) ==
        Poly{1, mpq_class(-1, 3)} * Poly{1, mpq_class(-1, 3)});
  CHECK(poles_odd(JordanForm(F)) == Poly{1});
  JordanForm L(F);
  L.lambda = 2;
  CHECK_THROWS_AS(poles_odd(L), DomainError);
}

TEST_CASE("final block") {
  auto F = Field::make(5);
  const auto a = UnimodularClass::square(F, Z(F, 1));
  CHECK(final_block(a, a) == igr(5));
  CHECK(final_block(a, a) == final_block_raw(a, a));
  const auto z = UnimodularClass::zero(F);
  CHECK(final_block(z, UnimodularClass::hyperbolic(F)) == final_block_raw(z, UnimodularClass::hyperbolic(F)));
}

TEST_CASE("odd-p table against heads") {
  auto r = check_odd_head_ig();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("2-adic table against head products") {
  auto r = check_two_adic_block_ig();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("final block simplification") {
  auto r = check_final_block();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("closed forms against the assembled calculus") {
  auto r = check_engine_agreement();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("poles and the three-pole bound") {
  auto r = check_poles();
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("odd-p closed forms against the counting oracle") {
  auto r = check_odd_against_oracle();
  INFO(r.failure);
  CHECK(r.ok);
  CHECK(r.cases > 500);
}

TEST_CASE("2-adic closed forms against the counting oracle") {
  auto r = check_two_against_oracle();
  INFO(r.failure);
  CHECK(r.ok);
  CHECK(r.cases > 500);
}
