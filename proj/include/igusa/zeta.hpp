// Closed-form Igusa zeta functions of quadratic polynomials: odd p, and
// Q + L over unramified 2-adic rings. Also the reduced denominator for odd p.
#pragma once

#include <string>

#include "igusa/quadform.hpp"
#include "igusa/ratfunc.hpp"

namespace igusa {

struct ZetaResult {
  RationalFunction zf;
  DenominatorShape shape;
  std::string form;      // standard form used
  std::string field;
  std::string dispatch;  // which case of the evaluator fired
  bool degenerate = false;
};

// Ig(z^a H_Q) for a unimodular Q of rank r and discriminant d, odd p.
// a is only inspected for divisibility by p and its square class.
RationalFunction odd_head_ig(const FieldPtr& F, int r, const RingElem& d, const RingElem& a);

// Ig(H_{Q0}(z) G_{Q1}(z^2) G_{Q2}(z^4)) for unramified p = 2, in closed form.
RationalFunction two_adic_block_ig(const UnimodularClass& Q0, const UnimodularClass& Q1, const UnimodularClass& Q2);
// Signs used by two_adic_block_ig, a = b = c = d = 1 mod 2.
int sign_phi(const RingElem& a, const RingElem& b, const RingElem& c);
int sign_psi(const RingElem& a, const RingElem& b, const RingElem& c, const RingElem& d);

// Final self-similar block: Ig(G_{Qa + p Qb}) for odd p, in the simplified
// four-case form, and the same quantity assembled from two I_0 terms.
RationalFunction final_block(const UnimodularClass& Qa, const UnimodularClass& Qb);
RationalFunction final_block_raw(const UnimodularClass& Qa, const UnimodularClass& Qb);

ZetaResult zeta_odd(const JordanForm& J);
ZetaResult zeta_2unramified(const JordanForm& J);
// Dispatches on p.
ZetaResult zeta(const JordanForm& J);
// The same function from the generating-function calculus.
RationalFunction zeta_engine(const JordanForm& J);

// Reduced denominator of Z for a pure quadratic form, odd p.
Poly poles_odd(const JordanForm& J);

}  // namespace igusa
