// Quadratic polynomials over R, Jordan splittings, classification of
// unimodular forms and reduction to the standard shape
//   (+)_i pi^i Q_i  (+)  pi^lambda x  +  c.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igusa/padic.hpp"

namespace igusa {

using Matrix = std::vector<std::vector<RingElem>>;

// Q(x) = x M x^T + b . x + c with M symmetric.
struct QuadPoly {
  FieldPtr field;
  int precision = 0;
  Matrix M;
  std::vector<RingElem> b;
  RingElem c;

  QuadPoly() = default;
  QuadPoly(FieldPtr field, int precision, int n);

  int n() const { return static_cast<int>(M.size()); }
  void validate() const;
  // Value at x; the result has the precision of x (at most `precision`).
  RingElem eval(const std::vector<RingElem>& x) const;
  bool has_linear() const;
  std::string to_string() const;
};

enum class NormIdeal { Zero, Even, Full };  // 0, 2R, R

// One entry of the tables of unimodular forms: squares (+) Ell? (+) Hyp^hyp.
struct UnimodularClass {
  FieldPtr field;
  int hyp = 0;
  bool ell = false;
  std::vector<RingElem> squares;  // canonical representatives, full precision

  UnimodularClass() = default;
  explicit UnimodularClass(FieldPtr f) : field(std::move(f)) {}

  static UnimodularClass zero(FieldPtr f) { return UnimodularClass(std::move(f)); }
  static UnimodularClass square(FieldPtr f, const RingElem& a);
  static UnimodularClass hyperbolic(FieldPtr f, int count = 1);
  static UnimodularClass elliptic(FieldPtr f);

  int rank() const { return 2 * hyp + 2 * (ell ? 1 : 0) + static_cast<int>(squares.size()); }
  bool is_zero() const { return rank() == 0; }
  NormIdeal norm() const;
  // Discriminant as an element (product of the canonical Gram determinants).
  RingElem disc() const;
  // p odd: eta of the discriminant.
  int disc_eta() const;
  // The "Planes" sign: -1 when an elliptic plane is present.
  int plane_sign() const { return ell ? -1 : 1; }
  // Canonical Gram matrix at precision k.
  Matrix gram(int k) const;
  std::string to_string() const;
  bool operator==(const UnimodularClass& o) const;
};

struct Invariants {
  int rank;
  RingElem disc;
  NormIdeal norm;
};
Invariants invariants(const UnimodularClass& U);
RingElem canonical_disc(const UnimodularClass& U);

// Canonical representative of the square class of a unit.
RingElem canonical_square(const RingElem& u);
// Are there r, s, t with a r^2 + b s^2 + c t^2 = -abc mod 8?
bool three_squares_split(const RingElem& a, const RingElem& b, const RingElem& c);

UnimodularClass add_forms(const UnimodularClass& a, const UnimodularClass& b);
// Isometry of classes. Shapes over p = 2 are not unique (two squares can be
// rewritten), so even-rank classes with squares are compared after adding Sq(1).
bool equivalent(const UnimodularClass& a, const UnimodularClass& b);
UnimodularClass classify_unimodular(const FieldPtr& field, const Matrix& block);

// Canonical square-class representatives of units (p = 2: all = 1 mod 2).
std::vector<RingElem> square_class_reps(const FieldPtr& field);
// Every tabulated shape of rank <= max_rank. For p = 2 this keeps the
// duplicated two-square shapes (a <= b in representative order).
std::vector<UnimodularClass> unimodular_classes(const FieldPtr& field, int max_rank);

struct RawBlock {
  int exponent;
  std::vector<int> vars;
  Matrix unit;  // the block is p^exponent * unit
};

struct JordanSplit {
  Matrix basis;      // C with C M C^T block diagonal
  Matrix transformed;
  std::vector<RingElem> linear;  // C b
  std::vector<RawBlock> blocks;
  std::vector<int> radical;
  int precision;  // digits still determined after elimination
};

JordanSplit jordan_split(const QuadPoly& Q);
std::vector<std::pair<int, UnimodularClass>> jordan_decompose(const QuadPoly& Q);

struct JordanForm {
  FieldPtr field;
  std::map<int, UnimodularClass> blocks;  // nonzero blocks only
  std::optional<int> lambda;              // valuation of the linear coefficient
  RingElem c;                              // constant; zero means exactly zero

  explicit JordanForm(FieldPtr f = nullptr);

  UnimodularClass block(int i) const;
  UnimodularClass folded(int j) const;  // Q_(j)
  int folded_rank(int j) const;
  // exponent e of q_(j) = q^e
  int q_paren_exponent(int j) const;
  int total_rank() const;
  int max_exponent() const;  // -1 when there are no blocks
  bool standard() const;
  std::string to_string() const;
};

struct Reduction {
  JordanForm form;
  std::vector<std::string> audit;
};

Reduction reduce_standard(const QuadPoly& Q);
// A concrete polynomial with the given standard form.
QuadPoly realize(const JordanForm& J, int precision);

std::string norm_name(NormIdeal n);

}  // namespace igusa
