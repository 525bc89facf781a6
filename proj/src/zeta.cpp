#include "igusa/zeta.hpp"

#include "igusa/genfun.hpp"

namespace igusa {

namespace {

mpq_class qpow(long q, int e) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, m) : mpq_class(m);
}

RationalFunction tpow(int e, const mpq_class& c = 1) { return RationalFunction::monomial(c, e); }

// 1 + c t^e
RationalFunction one_plus(const mpq_class& c, int e) { return RationalFunction(1) + tpow(e, c); }

RingElem minus_one_pow(const FieldPtr& F, int e) {
  return RingElem::from_int(F, F->max_precision(), e % 2 ? -1 : 1);
}

RingElem elem(const FieldPtr& F, std::int64_t a) { return RingElem::from_int(F, F->max_precision(), a); }

bool is_zero_constant(const RingElem& c) { return !c.field() || c.is_zero(); }

// Copy of J without the blocks at exponents >= lambda.
JordanForm drop_from(const JordanForm& J, int lambda) {
  JordanForm out = J;
  out.blocks.erase(out.blocks.lower_bound(lambda), out.blocks.end());
  return out;
}

ZetaResult finish(const JordanForm& J, RationalFunction zf, std::string dispatch) {
  ZetaResult res;
  res.zf = std::move(zf);
  res.shape = denominator_shape(res.zf.den(), J.field->q());
  res.form = J.to_string();
  res.field = J.field->describe();
  res.dispatch = std::move(dispatch);
  return res;
}

void require_odd(const FieldPtr& F) {
  if (F->p() == 2) throw DomainError("this evaluator needs odd p");
}

// Evaluate a sign at precision 3 and confirm it does not move at precision 6.
template <class Fn>
int audited_sign(Fn&& fn) {
  const int s3 = fn(3);
  if (fn(6) != s3) throw DomainError("sign depends on digits beyond 8");
  return s3;
}

}  // namespace

RationalFunction odd_head_ig(const FieldPtr& F, int r, const RingElem& d, const RingElem& a) {
  require_odd(F);
  if (r < 0) throw DomainError("negative rank");
  if (!d.is_unit()) throw DomainError("discriminant must be a unit");
  const long q = F->q();
  const RationalFunction igr = ig_ideal(q);
  const bool divisible = is_zero_constant(a) || !a.is_unit();
  if (r % 2 == 0) {
    const mpq_class x = eta(minus_one_pow(F, r / 2) * d) * qpow(q, -r / 2);
    if (divisible) return RationalFunction(1 - x) * one_plus(x, 1) * igr;
    return RationalFunction(1 - x) * (igr + RationalFunction(x));
  }
  if (divisible) return one_plus(-qpow(q, -r), 1) * igr;
  const mpq_class x = eta(a.reduce(1) * minus_one_pow(F, (r + 1) / 2).reduce(1) * d.reduce(1)) * qpow(q, -(r + 1) / 2);
  return one_plus(x, 1) * igr - RationalFunction(qpow(q, -r) + x);
}

int sign_phi(const RingElem& a, const RingElem& b, const RingElem& c) {
  return audited_sign([&](int k) {
    const RingElem s = a.at(k) + b.at(k);
    if (s.val() != 1) throw DomainError("phi needs a + b = 2 mod 4");
    const RingElem x = s.div_p(1) * c.at(k - 1).inverse();
    const RingElem z = x.pow(static_cast<std::uint64_t>(a.field()->q())) + x;
    return trace_parity(c.at(k - 2) * z.div_p(1)) ? -1 : 1;
  });
}

int sign_psi(const RingElem& a, const RingElem& b, const RingElem& c, const RingElem& d) {
  return audited_sign([&](int k) {
    const RingElem s = a.at(k) + b.at(k);
    const RingElem u = c.at(k) + d.at(k);
    if (s.val() != 1 || u.val() != 1) throw DomainError("psi needs a + b = c + d = 2 mod 4");
    const RingElem x = s.div_p(1) * c.at(k - 1).inverse();
    const RingElem y = u.div_p(1);
    const RingElem z = y.pow(static_cast<std::uint64_t>(a.field()->q())) + x;
    if (z.val() < 1) throw DomainError("psi needs 4 | a + b + c + d");
    return trace_parity(c.at(k - 2) * z.div_p(1)) ? -1 : 1;
  });
}

RationalFunction two_adic_block_ig(const UnimodularClass& Q0, const UnimodularClass& Q1, const UnimodularClass& Q2) {
  const FieldPtr& F = Q0.field;
  if (F->p() != 2) throw DomainError("two_adic_block_ig needs p = 2");
  const long q = F->q();
  const RationalFunction igr = ig_ideal(q);
  const int r0 = Q0.rank(), r1 = Q1.rank();
  const int s0 = static_cast<int>(Q0.squares.size());
  const int s1 = static_cast<int>(Q1.squares.size());
  const int pm0 = Q0.plane_sign(), pm1 = Q1.plane_sign();
  const bool n1_full = Q1.norm() == NormIdeal::Full;
  const bool n2_full = Q2.norm() == NormIdeal::Full;
  // t^3 - t^2, t^2 - t
  const RationalFunction cube(Poly{0, 0, -1, 1});
  const RationalFunction square(Poly{0, -1, 1});
  const RationalFunction one_minus_t = one_plus(-qpow(q, -r0), 1);
  const RationalFunction one_minus_t2 = one_plus(-qpow(q, -r0), 2);

  if (s0 == 0) {
    if (!n1_full) {
      const mpq_class x = pm0 * qpow(q, -r0 / 2);
      return RationalFunction(1 - x) * (tpow(1) + tpow(2, x)) * igr;
    }
    return tpow(1, 1 - qpow(q, -r0)) * igr;
  }
  if (s0 == 1) {
    if (!n1_full) return (one_minus_t2 + square * RationalFunction(pm0 * qpow(q, -(r0 + 1) / 2))) * igr;
    return one_minus_t * igr;
  }
  if (s0 != 2) throw DomainError("unexpected shape " + Q0.to_string());
  const RingElem& a = Q0.squares[0];
  const RingElem& b = Q0.squares[1];
  const bool four_divides = (a.at(3) + b.at(3)).val() >= 2;
  auto four_divides_all = [&] {
    return (a.at(3) + b.at(3) + Q1.squares[0].at(3) + Q1.squares[1].at(3)).val() >= 2;
  };

  if (four_divides) {
    const int sigma = sign_sigma(a, b);
    if (!n1_full) {
      RationalFunction g = one_minus_t2 + square * RationalFunction(pm0 * qpow(q, -r0 / 2));
      if (!n2_full) g += cube * RationalFunction(pm1 * sigma * qpow(q, -r0 - r1 / 2));
      return g * igr;
    }
    if (n2_full) return one_minus_t * igr;
    if (s1 == 1) return (one_minus_t + cube * RationalFunction(pm1 * sigma * qpow(q, -r0 - (r1 + 1) / 2))) * igr;
    if (s1 == 2 && four_divides_all())
      return (one_minus_t + cube * RationalFunction(pm1 * sigma * qpow(q, -r0 - r1 / 2))) * igr;
    if (s1 == 2) return one_minus_t * igr;
    throw DomainError("unexpected shape " + Q1.to_string());
  }

  if (!n1_full) return one_minus_t2 * igr;
  if (n2_full) return one_minus_t * igr;
  if (s1 == 1) {
    const int phi = sign_phi(a, b, Q1.squares[0]);
    return (one_minus_t + cube * RationalFunction(pm1 * phi * qpow(q, -r0 - (r1 + 1) / 2))) * igr;
  }
  if (s1 == 2 && four_divides_all()) {
    const int psi = sign_psi(a, b, Q1.squares[0], Q1.squares[1]);
    return (one_minus_t + cube * RationalFunction(pm1 * psi * qpow(q, -r0 - r1 / 2))) * igr;
  }
  if (s1 == 2) return one_minus_t * igr;
  throw DomainError("unexpected shape " + Q1.to_string());
}

RationalFunction final_block_raw(const UnimodularClass& Qa, const UnimodularClass& Qb) {
  const FieldPtr& F = Qa.field;
  require_odd(F);
  const long q = F->q();
  const RingElem zero(F, F->max_precision());
  const int r = Qa.rank() + Qb.rank();
  const RationalFunction num = odd_head_ig(F, Qa.rank(), Qa.disc(), zero) +
                               tpow(1, qpow(q, -Qa.rank())) * odd_head_ig(F, Qb.rank(), Qb.disc(), zero);
  return num / one_plus(-qpow(q, -r), 2);
}

RationalFunction final_block(const UnimodularClass& Qa, const UnimodularClass& Qb) {
  const FieldPtr& F = Qa.field;
  require_odd(F);
  const long q = F->q();
  const RationalFunction igr = ig_ideal(q);
  const int ra = Qa.rank(), rb = Qb.rank(), r = ra + rb;
  const RingElem d = Qa.disc() * Qb.disc();
  const RationalFunction t_minus_1(Poly{-1, 1});
  const RationalFunction tt(Poly{0, -1, 1});  // t(t - 1)
  const RationalFunction quad_den = one_plus(-qpow(q, -r), 2);
  if (ra % 2 == 1 && rb % 2 == 1) return igr;
  if (ra % 2 == 0 && rb % 2 == 0) {
    const int ea = eta(minus_one_pow(F, ra / 2) * Qa.disc());
    const int e = eta(minus_one_pow(F, r / 2) * d);
    const RationalFunction den = one_plus(-e * qpow(q, -r / 2), 1);
    return (RationalFunction(1) + t_minus_1 * RationalFunction(ea * qpow(q, -ra / 2)) / den) * igr;
  }
  if (ra % 2 == 0) {
    const int ea = eta(minus_one_pow(F, ra / 2) * Qa.disc());
    return (RationalFunction(1) + t_minus_1 * RationalFunction(ea * qpow(q, -ra / 2)) / quad_den) * igr;
  }
  const int eb = eta(minus_one_pow(F, rb / 2) * Qb.disc());
  // (ra + r)/2 is an integer: ra odd, r odd.
  return (RationalFunction(1) + tt * RationalFunction(eb * qpow(q, -(ra + r) / 2)) / quad_den) * igr;
}

ZetaResult zeta_odd(const JordanForm& J0) {
  const FieldPtr& F = J0.field;
  require_odd(F);
  const long q = F->q();
  const RingElem zero(F, F->max_precision());
  const RingElem c = is_zero_constant(J0.c) ? zero : J0.c.at(F->max_precision());
  const JordanForm J = J0.lambda ? drop_from(J0, *J0.lambda) : J0;

  auto I0 = [&](int i) {
    const UnimodularClass Qi = J.folded(i);
    return odd_head_ig(F, Qi.rank(), Qi.disc(), zero);
  };
  auto weight = [&](int i) { return tpow(i, qpow(q, -J.q_paren_exponent(i))); };

  if (!J.lambda && c.is_zero()) {
    const int omega = std::max(J.max_exponent(), 1);
    RationalFunction z;
    for (int i = 0; i + 1 < omega; ++i) z += weight(i) * I0(i);
    z += weight(omega - 1) * final_block(J.folded(omega - 1), J.folded(omega));
    ZetaResult res = finish(J0, z, "(i) L = 0, c = 0");
    res.degenerate = J.total_rank() == 0;
    return res;
  }
  if (J.lambda && (c.is_zero() || c.val() >= *J.lambda)) {
    const int lambda = *J.lambda;
    RationalFunction z;
    for (int i = 0; i < lambda; ++i) z += weight(i) * I0(i);
    z += weight(lambda) * ig_ideal(q);
    return finish(J0, z, "(ii) v(b) <= v(c)");
  }
  const int kappa = c.val();
  RationalFunction z;
  for (int i = 0; i < kappa; ++i) z += weight(i) * I0(i);
  const UnimodularClass Qk = J.folded(kappa);
  z += weight(kappa) * odd_head_ig(F, Qk.rank(), Qk.disc(), c.div_p(kappa));
  z += tpow(kappa, qpow(q, -J.q_paren_exponent(kappa + 1)));
  return finish(J0, z, J.lambda ? "(iii) v(b) > v(c)" : "(iii) L = 0, c != 0");
}

ZetaResult zeta_2unramified(const JordanForm& J0) {
  const FieldPtr& F = J0.field;
  if (F->p() != 2) throw DomainError("zeta_2unramified needs p = 2");
  if (!is_zero_constant(J0.c)) throw DomainError("p = 2 with a nonzero constant term is not supported");
  const long q = F->q();
  const JordanForm J = J0.lambda ? drop_from(J0, *J0.lambda) : J0;
  const UnimodularClass zero = UnimodularClass::zero(F);
  const UnimodularClass sq = UnimodularClass::square(F, elem(F, 1));
  auto weight = [&](int i) { return tpow(i, qpow(q, -J.q_paren_exponent(i))); };
  auto I = [&](int i) { return two_adic_block_ig(J.folded(i), J.folded(i + 1), J.block(i + 2)); };

  if (!J.lambda) {
    const int omega = std::max(J.max_exponent(), 1);
    RationalFunction z;
    for (int i = 0; i + 1 < omega; ++i) z += weight(i) * I(i);
    const UnimodularClass Qa = J.folded(omega - 1), Qb = J.folded(omega);
    const RationalFunction tail = two_adic_block_ig(Qa, Qb, zero) + tpow(1, qpow(q, -Qa.rank())) * two_adic_block_ig(Qb, Qa, zero);
    z += weight(omega - 1) * tail / one_plus(-qpow(q, -J.total_rank()), 2);
    ZetaResult res = finish(J0, z, "L = 0");
    res.degenerate = J.total_rank() == 0;
    return res;
  }
  const int lambda = *J.lambda;
  RationalFunction z;
  std::string dispatch;
  if (lambda == 0) {
    z = ig_ideal(q);
    dispatch = "v(a) = 0";
  } else if (lambda == 1) {
    z = two_adic_block_ig(J.folded(0), sq, sq) + weight(1) * ig_ideal(q);
    dispatch = "v(a) = 1";
  } else {
    for (int i = 0; i < lambda - 2; ++i) z += weight(i) * I(i);
    z += weight(lambda - 2) * two_adic_block_ig(J.folded(lambda - 2), J.folded(lambda - 1), sq);
    z += weight(lambda - 1) * two_adic_block_ig(J.folded(lambda - 1), sq, sq);
    z += weight(lambda) * ig_ideal(q);
    dispatch = "v(a) >= 2";
  }
  return finish(J0, z, dispatch);
}

ZetaResult zeta(const JordanForm& J) { return J.field->p() == 2 ? zeta_2unramified(J) : zeta_odd(J); }

RationalFunction zeta_engine(const JordanForm& J) { return assemble_gf(J).ig(); }

Poly poles_odd(const JordanForm& J) {
  const FieldPtr& F = J.field;
  require_odd(F);
  if (J.lambda || !is_zero_constant(J.c)) throw DomainError("poles_odd needs a pure quadratic form");
  const long q = F->q();
  const int r = J.total_rank();
  if (r == 0) return Poly{1};
  int r_even = 0, r_odd = 0;
  RingElem d_even = elem(F, 1), d_odd = elem(F, 1);
  for (const auto& [i, Q] : J.blocks) {
    (i % 2 ? r_odd : r_even) += Q.rank();
    (i % 2 ? d_odd : d_even) *= Q.disc();
  }
  // Membership in {(0,1), (1,1), (1,alpha), (2,-alpha)}.
  auto small = [&](int n, const RingElem& d) { return n <= 1 || (n == 2 && eta(-d) == -1); };
  const Poly one_minus_t{1, -qpow(q, -1)};
  if (small(r_even, d_even) && small(r_odd, d_odd)) {
    if (r_even == r_odd) return Poly{1, -qpow(q, -r / 2)};
    return Poly{1, 0, -qpow(q, -r)};
  }
  if (r_even % 2 == 1 && r_odd % 2 == 1) return one_minus_t;
  if (r_even % 2 == 0 && r_odd % 2 == 0) {
    const int e = eta(minus_one_pow(F, r / 2) * d_even * d_odd);
    return one_minus_t * Poly{1, -e * qpow(q, -r / 2)};
  }
  return one_minus_t * Poly{1, 0, -qpow(q, -r)};
}

}  // namespace igusa
