// Generating functions over R: truncated modular generating functions
// (dense, one level) and finite combinations of coset terms z^{a + p^j R},
// with products, coalescing, uniformization, scaling and the map to zeta
// functions.
#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "igusa/padic.hpp"
#include "igusa/quadform.hpp"
#include "igusa/ratfunc.hpp"

namespace igusa {

// ---------------------------------------------------------------------------
// Modular generating functions: mass on each value of R/p^k.

struct ModularGF {
  FieldPtr field;
  int k = 0;
  std::vector<mpq_class> coeffs;  // indexed by RingElem::index() at precision k

  ModularGF() = default;
  ModularGF(FieldPtr f, int level);

  static ModularGF point(const RingElem& a, int level);

  mpq_class mass() const;
  bool normalized() const { return mass() == 1; }
  mpq_class at(const RingElem& a) const;
  mpq_class& operator[](std::uint64_t idx) { return coeffs[idx]; }
  // phi_{k,j}
  ModularGF project(int j) const;
  bool operator==(const ModularGF& o) const { return k == o.k && coeffs == o.coeffs; }
  // "value : mass" lines, zero masses omitted
  std::string to_string() const;
};

// Histogram of f over (R/p^k)^n divided by q^{nk}. Guarded at q^{nk} <= 1e8.
ModularGF modular_gf(const QuadPoly& f, int k);
// Group-ring product (additive convolution).
ModularGF gr_mul(const ModularGF& a, const ModularGF& b);
// family[k] at level k for k = 0..K; returns the first K series coefficients.
std::vector<mpq_class> ig_truncated(const std::vector<ModularGF>& family);

// ---------------------------------------------------------------------------
// Coset combinations.

constexpr int kPoint = std::numeric_limits<int>::max();  // level of a singleton {a}

struct CosetTerm {
  RingElem rep;  // working precision, reduced mod p^level
  int level = 0;

  bool singleton() const { return level == kPoint; }
  bool operator==(const CosetTerm& o) const { return level == o.level && rep == o.rep; }
  bool operator<(const CosetTerm& o) const {
    if (level != o.level) return level < o.level;
    return rep < o.rep;
  }
  std::string to_string() const;
};

// z^{A} z^{B} = z^{A+B}
CosetTerm coset_mul(const CosetTerm& a, const CosetTerm& b);

class CosetCombination {
 public:
  CosetCombination() = default;
  explicit CosetCombination(FieldPtr field);

  // z^{a + p^level R}; a may have any precision >= min(level, working precision).
  static CosetCombination coset(const RingElem& a, int level, const mpq_class& coeff = 1);
  static CosetCombination ideal(const FieldPtr& field, int level, const mpq_class& coeff = 1);
  // z^{a}, a singleton; a zero RingElem is the exact zero.
  static CosetCombination point(const RingElem& a, const mpq_class& coeff = 1);

  const FieldPtr& field() const { return field_; }
  int precision() const { return field_->max_precision(); }
  const std::map<CosetTerm, mpq_class>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add(const CosetTerm& t, const mpq_class& c);
  mpq_class mass() const;  // F(1)
  int max_level() const;   // largest finite level, -1 if none
  bool has_points() const;
  bool is_uniform(int j) const;

  CosetCombination operator+(const CosetCombination& b) const;
  CosetCombination operator-(const CosetCombination& b) const;
  CosetCombination operator*(const CosetCombination& b) const;
  CosetCombination operator*(const mpq_class& c) const;
  CosetCombination& operator+=(const CosetCombination& b);
  bool operator==(const CosetCombination& b) const { return terms_ == b.terms_; }

  // "coeff * z^{a + p^j R}" lines, level ascending then representative.
  std::string to_string() const;

 private:
  FieldPtr field_;
  std::map<CosetTerm, mpq_class> terms_;
};

// Merge complete families of sibling cosets with equal coefficients.
CosetCombination coalesce(const CosetCombination& F);
// The p^j-uniformization: each term replaced by the level-j coset containing it.
CosetCombination uniformize(const CosetCombination& F, int j);
// F(z^s); a zero s is the exact zero and gives F(1) z^0.
CosetCombination scale(const CosetCombination& F, const RingElem& s);
CosetCombination scale_pi(const CosetCombination& F, int j);  // F(z^{p^j})
// phi_k of the element.
ModularGF project(const CosetCombination& F, int k);
// Equality in the group ring limit (point parts exactly, coset parts by projection).
bool same_element(const CosetCombination& a, const CosetCombination& b);

RationalFunction ig(const CosetCombination& F);
// (1 - 1/q)/(1 - t/q)
RationalFunction ig_ideal(long q, int j = 0);

// ---------------------------------------------------------------------------
// Heads of unimodular forms.

// Enumeration over (R/p^{l+1})^n minus the all-nonunit block, values mod p^{2l+1}.
CosetCombination head_unimodular(const UnimodularClass& Q);
// Closed form for the class's shape; the enumeration above is the reference.
CosetCombination head_closed_form(const UnimodularClass& Q);

// Individual closed forms. a, b are units (p = 2: a = b = 1 mod 2).
CosetCombination head_square_odd(const FieldPtr& F, const RingElem& a);
CosetCombination head_square_two(const FieldPtr& F, const RingElem& a);
CosetCombination head_planes(const FieldPtr& F, int rank, int sign);
CosetCombination head_even_rank_odd(const FieldPtr& F, int rank, const RingElem& disc);
CosetCombination head_odd_rank_odd(const FieldPtr& F, int rank, const RingElem& disc);
CosetCombination head_two_squares(const FieldPtr& F, const RingElem& a, const RingElem& b);
CosetCombination head_square_planes_two(const FieldPtr& F, const RingElem& a, int rank, int sign);
CosetCombination head_two_squares_planes(const FieldPtr& F, const RingElem& a, const RingElem& b, int rank,
                                         int sign);

// (-1)^{Tr((a+b)/(4a))} for units a, b = 1 mod 2 with 4 | a+b.
int sign_sigma(const RingElem& a, const RingElem& b);

enum class Region { All, NotAllDivisible };

// Partial generating function of f on a p^{j+1}-regular region, assuming the
// derivative has valuation exactly j there (checked at every representative).
CosetCombination hensel_head(const QuadPoly& f, Region region, int j,
                             const std::function<bool(const std::vector<RingElem>&)>& extra = nullptr);

// ---------------------------------------------------------------------------
// Whole generating functions.

// p^m-uniformization of G_Q for a unimodular Q, via G = H + q^{-r} G(z^{p^2}).
CosetCombination uniformized_gf(const UnimodularClass& Q, int m);
// p^m-uniformization of G_Q(z^{p^s}).
CosetCombination uniformized_scaled_gf(const UnimodularClass& Q, int s, int m);

// Ig(z^{a + p^mu R} H_{P_0}(z) G_{P_1}(z^p) ... G_{P_n}(z^{p^n})); mu = kPoint for z^a.
RationalFunction head_product_ig(const std::vector<UnimodularClass>& P, const RingElem& a, int mu = kPoint);
// The same product as a finite combination (the head makes it uniform).
CosetCombination head_product(const std::vector<UnimodularClass>& P, const RingElem& a, int mu = kPoint);

// Ig(G_{A + p B}) from the two-block splitting of the self-similar tail.
RationalFunction ig_two_block(const UnimodularClass& A, const UnimodularClass& B);

struct AssembledGF {
  FieldPtr field;
  CosetCombination body;
  // tail_coeff * z^c * G_{A}(z^{p^s}) G_{B}(z^{p^{s+1}}); present only when L = 0.
  bool has_tail = false;
  mpq_class tail_coeff;
  RingElem c;
  int tail_shift = 0;
  UnimodularClass tail_a, tail_b;

  // p^K-uniformization of the whole element.
  CosetCombination uniformized(int K) const;
  RationalFunction ig() const;
};

AssembledGF assemble_gf(const JordanForm& J);

}  // namespace igusa
