// Arithmetic in R/p^k R for R the ring of integers of an unramified
// extension of Q_p, modelled as the Galois ring GR(p^k, f).
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace igusa {

constexpr int kMaxDegree = 4;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field : public std::enable_shared_from_this<Field> {
 public:
  // modulus: monic degree-f polynomial, low degree first (length f+1).
  // Empty means the least monic irreducible in digit order.
  static FieldPtr make(std::int64_t p, int f = 1, std::vector<std::int64_t> modulus = {});

  std::int64_t p() const { return p_; }
  int f() const { return f_; }
  std::int64_t q() const { return q_; }
  int ell() const { return p_ == 2 ? 1 : 0; }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }
  // Largest k with p^k usable as a modulus.
  int max_precision() const { return max_k_; }
  std::int64_t pk(int k) const;
  bool same(const Field& other) const;
  std::string describe() const;

  Field(std::int64_t p, int f, std::vector<std::int64_t> modulus);

 private:
  std::int64_t p_;
  int f_;
  std::int64_t q_;
  int max_k_;
  std::vector<std::int64_t> modulus_;
  std::vector<std::int64_t> powers_;
};

bool is_prime(std::int64_t n);

struct ExtValuation {
  enum Kind { Finite, AtLeast, Infinite };
  Kind kind = Finite;
  int value = 0;

  static ExtValuation finite(int v) { return {Finite, v}; }
  static ExtValuation at_least(int v) { return {AtLeast, v}; }
  static ExtValuation infinity() { return {Infinite, 0}; }
  bool is_infinite() const { return kind == Infinite; }
  bool is_finite() const { return kind == Finite; }
  // Lower bound usable in comparisons; infinity maps to a large int.
  int bound() const { return kind == Infinite ? 1 << 28 : value; }
  std::string to_string() const;
  bool operator==(const ExtValuation&) const = default;
};

ExtValuation operator+(ExtValuation a, ExtValuation b);
ExtValuation min(ExtValuation a, ExtValuation b);

class RingElem {
 public:
  using Coeffs = std::array<std::int64_t, kMaxDegree>;

  RingElem() = default;
  RingElem(FieldPtr field, int k);  // zero

  static RingElem from_int(FieldPtr field, int k, std::int64_t a);
  static RingElem from_mpz(FieldPtr field, int k, const mpz_class& a);
  // Denominator must be prime to p.
  static RingElem from_rational(FieldPtr field, int k, const mpq_class& a);
  static RingElem from_coeffs(FieldPtr field, int k, const std::vector<std::int64_t>& c);
  // Inverse of index().
  static RingElem from_index(FieldPtr field, int k, std::uint64_t idx);

  const FieldPtr& field() const { return field_; }
  int precision() const { return k_; }
  std::int64_t coeff(int i) const { return c_[i]; }
  const Coeffs& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_unit() const;
  bool is_one() const;
  // exact_zero: the caller asserts a zero value is an exact 0.
  ExtValuation valuation(bool exact_zero = false) const;
  // Finite valuation, or precision() when zero.
  int val() const;

  RingElem operator+(const RingElem& b) const;
  RingElem operator-(const RingElem& b) const;
  RingElem operator-() const;
  RingElem operator*(const RingElem& b) const;
  RingElem& operator+=(const RingElem& b) { return *this = *this + b; }
  RingElem& operator-=(const RingElem& b) { return *this = *this - b; }
  RingElem& operator*=(const RingElem& b) { return *this = *this * b; }
  RingElem scaled(std::int64_t s) const;
  RingElem pow(std::uint64_t e) const;
  RingElem inverse() const;
  // a / b for a unit b.
  RingElem operator/(const RingElem& b) const { return *this * b.inverse(); }

  // Multiply by p^j at the same precision.
  RingElem mul_p(int j) const;
  // Exact division by p^j; result has precision k - j.
  RingElem div_p(int j) const;
  // Reduce to precision k2 <= k.
  RingElem reduce(int k2) const;
  // Same representative at precision k2 >= k.
  RingElem lift(int k2) const;
  RingElem at(int k2) const { return k2 <= k_ ? reduce(k2) : lift(k2); }

  // Dense encoding sum c_i (p^k)^i.
  std::uint64_t index() const;
  std::string to_string() const;

  bool operator==(const RingElem& b) const;
  bool operator!=(const RingElem& b) const { return !(*this == b); }
  bool operator<(const RingElem& b) const;

 private:
  void check_compatible(const RingElem& b) const;
  FieldPtr field_;
  int k_ = 0;
  Coeffs c_{};
};

std::uint64_t ring_size(const FieldPtr& field, int k);

RingElem teichmuller(const RingElem& a);
RingElem frobenius(const RingElem& a);
// Absolute trace to Z/2^k; p = 2 only.
RingElem trace(const RingElem& a);
int trace_parity(const RingElem& a);
bool is_square_unit(const RingElem& a);
int eta(const RingElem& a);
RingElem pick_nonsquare(const FieldPtr& field, int k);
RingElem pick_xi(const FieldPtr& field, int k);

// Teichmüller representatives at precision k, listed by residue index.
std::vector<RingElem> teichmuller_set(const FieldPtr& field, int k);
// Nonzero representatives.
std::vector<RingElem> teichmuller_units(const FieldPtr& field, int k);
// Representatives with even trace (p = 2).
std::vector<RingElem> trace_zero_set(const FieldPtr& field, int k);

}  // namespace igusa
