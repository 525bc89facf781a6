// Exact univariate polynomials and rational functions in t over Q.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace igusa {

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<mpq_class> coeffs);
  Poly(std::initializer_list<mpq_class> coeffs) : Poly(std::vector<mpq_class>(coeffs)) {}

  static Poly constant(const mpq_class& c) { return Poly(std::vector<mpq_class>{c}); }
  static Poly monomial(const mpq_class& c, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  mpq_class coeff(int i) const;
  const mpq_class& lead() const { return c_.back(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  mpq_class eval(const mpq_class& x) const;

  Poly operator+(const Poly& b) const;
  Poly operator-(const Poly& b) const;
  Poly operator-() const;
  Poly operator*(const Poly& b) const;
  Poly scaled(const mpq_class& s) const;
  bool operator==(const Poly& b) const { return c_ == b.c_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

// Quotient and remainder; b nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);

class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Poly::constant(1)) {}
  RationalFunction(const mpq_class& c) : num_(Poly::constant(c)), den_(Poly::constant(1)) { normalize(); }
  RationalFunction(Poly num, Poly den = Poly::constant(1));

  // c * t^d
  static RationalFunction monomial(const mpq_class& c, int degree);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunction operator+(const RationalFunction& b) const;
  RationalFunction operator-(const RationalFunction& b) const;
  RationalFunction operator-() const;
  RationalFunction operator*(const RationalFunction& b) const;
  RationalFunction operator/(const RationalFunction& b) const;
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  bool operator==(const RationalFunction& b) const { return num_ == b.num_ && den_ == b.den_; }

  mpq_class eval(const mpq_class& x) const;
  std::vector<mpq_class> series_prefix(int K) const;

  // "(2/3) / (1 - (1/3)*t^2)"
  std::string to_string() const;

 private:
  void normalize();
  Poly num_, den_;
};

RationalFunction poincare_from_zeta(const RationalFunction& Z);
RationalFunction zeta_from_poincare(const RationalFunction& P);

// Rendering of a single coefficient or polynomial in the text format.
std::string render_rational(const mpq_class& c);
std::string render_poly(const Poly& p);

struct DenominatorFactor {
  enum Kind { OneMinusT, OnePlusT, OneMinusT2 };
  Kind kind;
  int exponent;  // q-exponent: 1 - t/q^e, 1 + t/q^e, 1 - t^2/q^e
  int multiplicity;

  Poly expand(const mpq_class& q) const;
  std::string to_string() const;
  bool operator==(const DenominatorFactor&) const = default;
};

struct DenominatorShape {
  std::vector<DenominatorFactor> factors;
  Poly residual = Poly::constant(1);  // 1 when fully recognised

  bool complete() const { return residual == Poly::constant(1); }
  Poly expand(const mpq_class& q) const;
  std::string to_string() const;
};

DenominatorShape denominator_shape(const Poly& den, long q);

}  // namespace igusa
