#include "igusa/padic.hpp"

#include <sstream>

namespace igusa {

namespace {

using i128 = __int128;

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<i128>(a) * b % m);
}

std::int64_t modp(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// Polynomials over F_p, low degree first, trimmed.
using FpPoly = std::vector<std::int64_t>;

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::int64_t inv_mod_p(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, e = p - 2, b = modp(a, p);
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

FpPoly fp_rem(FpPoly a, const FpPoly& b, std::int64_t p) {
  trim(a);
  const std::int64_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::int64_t c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = modp(a[shift + i] - mulmod(c, b[i], p), p);
    trim(a);
  }
  return a;
}

bool fp_irreducible(const FpPoly& m, std::int64_t p) {
  const int f = static_cast<int>(m.size()) - 1;
  for (int d = 1; d <= f / 2; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      FpPoly g(d + 1);
      std::int64_t t = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = t % p;
        t /= p;
      }
      g[d] = 1;
      if (fp_rem(m, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> default_modulus(std::int64_t p, int f) {
  if (f == 1) return {0, 1};
  std::int64_t count = 1;
  for (int i = 0; i < f; ++i) count *= p;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    FpPoly g(f + 1);
    std::int64_t t = idx;
    for (int i = 0; i < f; ++i) {
      g[i] = t % p;
      t /= p;
    }
    g[f] = 1;
    if (fp_irreducible(g, p)) return g;
  }
  throw DomainError("no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(std::int64_t p, int f, std::vector<std::int64_t> modulus)
    : p_(p), f_(f), modulus_(std::move(modulus)) {
  q_ = 1;
  for (int i = 0; i < f_; ++i) q_ *= p_;
  powers_.push_back(1);
  const i128 limit = static_cast<i128>(1) << 62;
  while (static_cast<i128>(powers_.back()) * p_ <= limit) powers_.push_back(powers_.back() * p_);
  max_k_ = static_cast<int>(powers_.size()) - 1;
}

FieldPtr Field::make(std::int64_t p, int f, std::vector<std::int64_t> modulus) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (p > 1000003) throw DomainError("p is too large");
  if (f < 1 || f > kMaxDegree)
    throw DomainError("residue degree f must lie in [1, " + std::to_string(kMaxDegree) + "]");
  if (modulus.empty()) {
    modulus = default_modulus(p, f);
  } else {
    if (static_cast<int>(modulus.size()) != f + 1 || modulus.back() != 1)
      throw DomainError("modulus must be monic of degree f");
    FpPoly m(modulus.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = modp(modulus[i], p);
    if (f > 1 && !fp_irreducible(m, p)) throw DomainError("modulus is reducible mod p");
    modulus = m;
  }
  return std::make_shared<const Field>(p, f, std::move(modulus));
}

std::int64_t Field::pk(int k) const {
  if (k < 0 || k > max_k_)
    throw DomainError("precision " + std::to_string(k) + " out of range for p = " + std::to_string(p_));
  return powers_[k];
}

bool Field::same(const Field& other) const {
  return p_ == other.p_ && f_ == other.f_ && modulus_ == other.modulus_;
}

std::string Field::describe() const {
  std::ostringstream out;
  out << "p=" << p_ << " f=" << f_;
  if (f_ > 1) {
    out << " modulus=[";
    for (std::size_t i = 0; i < modulus_.size(); ++i) out << (i ? "," : "") << modulus_[i];
    out << "]";
  }
  return out.str();
}

std::string ExtValuation::to_string() const {
  switch (kind) {
    case Infinite: return "inf";
    case AtLeast: return ">=" + std::to_string(value);
    default: return std::to_string(value);
  }
}

ExtValuation operator+(ExtValuation a, ExtValuation b) {
  if (a.is_infinite() || b.is_infinite()) return ExtValuation::infinity();
  const bool lower = a.kind == ExtValuation::AtLeast || b.kind == ExtValuation::AtLeast;
  return {lower ? ExtValuation::AtLeast : ExtValuation::Finite, a.value + b.value};
}

ExtValuation min(ExtValuation a, ExtValuation b) {
  if (a.is_infinite()) return b;
  if (b.is_infinite()) return a;
  return a.value <= b.value ? a : b;
}

RingElem::RingElem(FieldPtr field, int k) : field_(std::move(field)), k_(k) {
  if (!field_) throw DomainError("missing field");
  if (k < 0) throw DomainError("negative precision");
  field_->pk(k);
}

RingElem RingElem::from_int(FieldPtr field, int k, std::int64_t a) {
  RingElem r(std::move(field), k);
  r.c_[0] = modp(a, r.field_->pk(k));
  return r;
}

RingElem RingElem::from_mpz(FieldPtr field, int k, const mpz_class& a) {
  RingElem r(std::move(field), k);
  mpz_class m = a % mpz_class(static_cast<long>(r.field_->pk(k)));
  if (m < 0) m += static_cast<long>(r.field_->pk(k));
  r.c_[0] = m.get_si();
  return r;
}

RingElem RingElem::from_rational(FieldPtr field, int k, const mpq_class& a) {
  const mpz_class den = a.get_den();
  if (den % mpz_class(static_cast<long>(field->p())) == 0)
    throw DomainError("rational " + a.get_str() + " is not p-integral");
  RingElem n = from_mpz(field, k, a.get_num());
  RingElem d = from_mpz(field, k, den);
  return n * d.inverse();
}

RingElem RingElem::from_coeffs(FieldPtr field, int k, const std::vector<std::int64_t>& c) {
  RingElem r(std::move(field), k);
  if (static_cast<int>(c.size()) > r.field_->f()) throw DomainError("too many coefficients");
  for (std::size_t i = 0; i < c.size(); ++i) r.c_[i] = modp(c[i], r.field_->pk(k));
  return r;
}

RingElem RingElem::from_index(FieldPtr field, int k, std::uint64_t idx) {
  RingElem r(std::move(field), k);
  const auto m = static_cast<std::uint64_t>(r.field_->pk(k));
  for (int i = 0; i < r.field_->f(); ++i) {
    r.c_[i] = static_cast<std::int64_t>(idx % m);
    idx /= m;
  }
  return r;
}

bool RingElem::is_zero() const {
  for (auto c : c_)
    if (c != 0) return false;
  return true;
}

bool RingElem::is_unit() const {
  if (k_ == 0) return true;
  const std::int64_t p = field_->p();
  for (int i = 0; i < field_->f(); ++i)
    if (c_[i] % p != 0) return true;
  return false;
}

bool RingElem::is_one() const {
  if (c_[0] != (k_ == 0 ? 0 : 1)) return false;
  for (int i = 1; i < kMaxDegree; ++i)
    if (c_[i] != 0) return false;
  return true;
}

ExtValuation RingElem::valuation(bool exact_zero) const {
  if (is_zero()) return exact_zero ? ExtValuation::infinity() : ExtValuation::at_least(k_);
  return ExtValuation::finite(val());
}

int RingElem::val() const {
  const std::int64_t p = field_->p();
  int best = k_;
  for (int i = 0; i < field_->f(); ++i) {
    std::int64_t c = c_[i];
    if (c == 0) continue;
    int v = 0;
    while (c % p == 0) {
      c /= p;
      ++v;
    }
    if (v < best) best = v;
  }
  return best;
}

void RingElem::check_compatible(const RingElem& b) const {
  if (!field_ || !b.field_) throw DomainError("uninitialised ring element");
  if (field_ != b.field_ && !field_->same(*b.field_)) throw DomainError("field mismatch");
  if (k_ != b.k_)
    throw DomainError("precision mismatch: " + std::to_string(k_) + " vs " + std::to_string(b.k_));
}

RingElem RingElem::operator+(const RingElem& b) const {
  check_compatible(b);
  RingElem r(field_, k_);
  const std::int64_t m = field_->pk(k_);
  for (int i = 0; i < field_->f(); ++i) {
    std::int64_t s = c_[i] + b.c_[i];
    r.c_[i] = s >= m ? s - m : s;
  }
  return r;
}

RingElem RingElem::operator-() const {
  RingElem r(field_, k_);
  const std::int64_t m = field_->pk(k_);
  for (int i = 0; i < field_->f(); ++i) r.c_[i] = c_[i] == 0 ? 0 : m - c_[i];
  return r;
}

RingElem RingElem::operator-(const RingElem& b) const { return *this + (-b); }

RingElem RingElem::operator*(const RingElem& b) const {
  check_compatible(b);
  const int f = field_->f();
  const std::int64_t m = field_->pk(k_);
  RingElem r(field_, k_);
  if (f == 1) {
    r.c_[0] = mulmod(c_[0], b.c_[0], m);
    return r;
  }
  std::array<std::int64_t, 2 * kMaxDegree> prod{};
  for (int i = 0; i < f; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + mulmod(c_[i], b.c_[j], m)) % m;
  }
  const auto& mod = field_->modulus();
  for (int d = 2 * f - 2; d >= f; --d) {
    const std::int64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (int i = 0; i < f; ++i) prod[d - f + i] = modp(prod[d - f + i] - mulmod(c, mod[i] % m, m), m);
  }
  for (int i = 0; i < f; ++i) r.c_[i] = prod[i];
  return r;
}

RingElem RingElem::scaled(std::int64_t s) const { return *this * from_int(field_, k_, s); }

RingElem RingElem::pow(std::uint64_t e) const {
  RingElem r = from_int(field_, k_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

RingElem RingElem::inverse() const {
  if (!is_unit()) throw DomainError("element " + to_string() + " is not a unit");
  const RingElem one = from_int(field_, k_, 1);
  const RingElem two = from_int(field_, k_, 2);
  // Inverse mod p from the multiplicative group of the residue field,
  // then Newton iteration doubles the precision each step.
  RingElem x = pow(static_cast<std::uint64_t>(field_->q() - 2));
  for (int i = 0; i < 64 && !(*this * x).is_one(); ++i) x = x * (two - *this * x);
  if (!(*this * x).is_one()) throw DomainError("inverse did not converge");
  return x;
}

RingElem RingElem::mul_p(int j) const {
  if (j >= k_) return RingElem(field_, k_);
  return scaled(field_->pk(j));
}

RingElem RingElem::div_p(int j) const {
  if (j > k_) throw DomainError("division exceeds precision");
  const std::int64_t d = field_->pk(j);
  RingElem r(field_, k_ - j);
  for (int i = 0; i < field_->f(); ++i) {
    if (c_[i] % d != 0) throw DomainError("element " + to_string() + " not divisible by p^" + std::to_string(j));
    r.c_[i] = c_[i] / d;
  }
  return r;
}

RingElem RingElem::reduce(int k2) const {
  if (k2 > k_) throw DomainError("cannot reduce to higher precision");
  RingElem r(field_, k2);
  const std::int64_t m = field_->pk(k2);
  for (int i = 0; i < field_->f(); ++i) r.c_[i] = c_[i] % m;
  return r;
}

RingElem RingElem::lift(int k2) const {
  if (k2 < k_) throw DomainError("lift to lower precision");
  RingElem r(field_, k2);
  r.c_ = c_;
  return r;
}

std::uint64_t RingElem::index() const {
  const auto m = static_cast<unsigned __int128>(field_->pk(k_));
  unsigned __int128 idx = 0, scale = 1;
  for (int i = 0; i < field_->f(); ++i) {
    idx += scale * static_cast<unsigned __int128>(c_[i]);
    scale *= m;
  }
  if (idx >> 64) throw DomainError("index overflow");
  return static_cast<std::uint64_t>(idx);
}

std::uint64_t ring_size(const FieldPtr& field, int k) {
  unsigned __int128 s = 1;
  const auto m = static_cast<unsigned __int128>(field->pk(k));
  for (int i = 0; i < field->f(); ++i) {
    s *= m;
    if (s >> 63) throw DomainError("ring too large to enumerate");
  }
  return static_cast<std::uint64_t>(s);
}

std::string RingElem::to_string() const {
  if (!field_) return "<null>";
  if (field_->f() == 1) return std::to_string(c_[0]);
  std::ostringstream out;
  out << "[";
  for (int i = 0; i < field_->f(); ++i) out << (i ? "," : "") << c_[i];
  out << "]";
  return out.str();
}

bool RingElem::operator==(const RingElem& b) const {
  if (!field_ || !b.field_) return !field_ && !b.field_;
  return k_ == b.k_ && c_ == b.c_ && (field_ == b.field_ || field_->same(*b.field_));
}

bool RingElem::operator<(const RingElem& b) const {
  if (k_ != b.k_) return k_ < b.k_;
  for (int i = kMaxDegree - 1; i >= 0; --i)
    if (c_[i] != b.c_[i]) return c_[i] < b.c_[i];
  return false;
}

RingElem teichmuller(const RingElem& a) {
  const auto q = static_cast<std::uint64_t>(a.field()->q());
  RingElem x = a;
  for (int i = 0; i <= a.precision() + 1; ++i) {
    RingElem y = x.pow(q);
    if (y == x) return x;
    x = y;
  }
  throw DomainError("Teichmuller iteration did not converge");
}

RingElem frobenius(const RingElem& a) {
  const int k = a.precision();
  const auto p = static_cast<std::uint64_t>(a.field()->p());
  RingElem rest = a, out(a.field(), k);
  for (int j = 0; j < k && !rest.is_zero(); ++j) {
    const RingElem tau = teichmuller(rest.div_p(j).lift(k));
    rest -= tau.mul_p(j);
    out += tau.pow(p).mul_p(j);
  }
  return out;
}

RingElem trace(const RingElem& a) {
  if (a.field()->p() != 2) throw DomainError("trace is only provided for p = 2");
  RingElem sum = a, cur = a;
  for (int i = 1; i < a.field()->f(); ++i) {
    cur = frobenius(cur);
    sum += cur;
  }
  for (int i = 1; i < a.field()->f(); ++i)
    if (sum.coeff(i) != 0) throw DomainError("trace left the prime ring");
  static const FieldPtr q2 = Field::make(2, 1);
  return RingElem::from_int(q2, a.precision(), sum.coeff(0));
}

int trace_parity(const RingElem& a) { return static_cast<int>(trace(a.reduce(1)).coeff(0) & 1); }

bool is_square_unit(const RingElem& a) {
  if (!a.is_unit()) throw DomainError("square test needs a unit, got " + a.to_string());
  if (a.field()->p() != 2) {
    const RingElem r = a.reduce(1);
    return r.pow(static_cast<std::uint64_t>((a.field()->q() - 1) / 2)).is_one();
  }
  if (a.precision() < 3) throw DomainError("square test over p = 2 needs precision >= 3");
  const RingElem b = a.reduce(3);
  const RingElem u = b / teichmuller(b);
  const RingElem w = u - RingElem::from_int(a.field(), 3, 1);
  if (w.val() < 2) return false;
  return trace_parity(w.div_p(2)) == 0;
}

int eta(const RingElem& a) {
  if (a.field()->p() == 2) throw DomainError("eta is only defined for odd p");
  if (!a.is_unit()) return 0;
  return is_square_unit(a) ? 1 : -1;
}

RingElem pick_nonsquare(const FieldPtr& field, int k) {
  if (field->p() == 2) throw DomainError("pick_nonsquare needs odd p");
  for (std::uint64_t i = 1; i < static_cast<std::uint64_t>(field->q()); ++i) {
    RingElem r = RingElem::from_index(field, 1, i);
    if (r.is_unit() && !is_square_unit(r)) return r.lift(k);
  }
  throw DomainError("no nonsquare found");
}

RingElem pick_xi(const FieldPtr& field, int k) {
  if (field->p() != 2) throw DomainError("pick_xi needs p = 2");
  for (std::uint64_t i = 1; i < static_cast<std::uint64_t>(field->q()); ++i) {
    RingElem r = RingElem::from_index(field, 1, i);
    if (trace_parity(r) == 1) return r.lift(k);
  }
  throw DomainError("no odd-trace unit found");
}

std::vector<RingElem> teichmuller_set(const FieldPtr& field, int k) {
  std::vector<RingElem> out;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(field->q()); ++i)
    out.push_back(teichmuller(RingElem::from_index(field, 1, i).lift(k)));
  return out;
}

std::vector<RingElem> teichmuller_units(const FieldPtr& field, int k) {
  auto all = teichmuller_set(field, k);
  all.erase(all.begin());
  return all;
}

std::vector<RingElem> trace_zero_set(const FieldPtr& field, int k) {
  std::vector<RingElem> out;
  for (const auto& t : teichmuller_set(field, k))
    if (trace_parity(t) == 0) out.push_back(t);
  return out;
}

}  // namespace igusa
