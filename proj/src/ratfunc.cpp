#include "igusa/ratfunc.hpp"

#include <sstream>

#include "igusa/padic.hpp"

namespace igusa {

Poly::Poly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

Poly Poly::monomial(const mpq_class& c, int degree) {
  if (degree < 0) throw DomainError("negative degree");
  std::vector<mpq_class> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

mpq_class Poly::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::operator+(const Poly& b) const {
  std::vector<mpq_class> v(std::max(c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return Poly(std::move(v));
}

Poly Poly::operator-() const {
  std::vector<mpq_class> v(c_);
  for (auto& x : v) x = -x;
  return Poly(std::move(v));
}

Poly Poly::operator-(const Poly& b) const { return *this + (-b); }

Poly Poly::operator*(const Poly& b) const {
  if (is_zero() || b.is_zero()) return Poly();
  std::vector<mpq_class> v(c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += c_[i] * b.c_[j];
  }
  return Poly(std::move(v));
}

Poly Poly::scaled(const mpq_class& s) const {
  std::vector<mpq_class> v(c_);
  for (auto& x : v) x *= s;
  return Poly(std::move(v));
}

std::string Poly::to_string() const { return render_poly(*this); }

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<mpq_class> rem(a.coeffs());
  const int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<mpq_class> quo(a.degree() - db + 1);
  for (int d = a.degree(); d >= db; --d) {
    if (rem[d] == 0) continue;
    const mpq_class c = rem[d] / b.lead();
    quo[d - db] = c;
    for (int i = 0; i <= db; ++i) rem[d - db + i] -= c * b.coeffs()[i];
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  return x.scaled(1 / mpq_class(x.lead()));
}

bool divides(const Poly& d, const Poly& a) { return divmod(a, d).second.is_zero(); }

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RationalFunction::normalize() {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  const Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divmod(num_, g).first;
    den_ = divmod(den_, g).first;
  }
  const mpq_class d0 = den_.coeff(0);
  if (d0 == 0) throw DomainError("rational function has a pole at t = 0");
  if (d0 != 1) {
    num_ = num_.scaled(1 / d0);
    den_ = den_.scaled(1 / d0);
  }
}

RationalFunction RationalFunction::monomial(const mpq_class& c, int degree) {
  return RationalFunction(Poly::monomial(c, degree));
}

RationalFunction RationalFunction::operator+(const RationalFunction& b) const {
  if (den_ == b.den_) return RationalFunction(num_ + b.num_, den_);
  return RationalFunction(num_ * b.den_ + b.num_ * den_, den_ * b.den_);
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction RationalFunction::operator-(const RationalFunction& b) const { return *this + (-b); }

RationalFunction RationalFunction::operator*(const RationalFunction& b) const {
  return RationalFunction(num_ * b.num_, den_ * b.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& b) const {
  if (b.is_zero()) throw DomainError("division by the zero rational function");
  return RationalFunction(num_ * b.den_, den_ * b.num_);
}

mpq_class RationalFunction::eval(const mpq_class& x) const {
  const mpq_class d = den_.eval(x);
  if (d == 0) throw DomainError("evaluation at a pole");
  return num_.eval(x) / d;
}

std::vector<mpq_class> RationalFunction::series_prefix(int K) const {
  std::vector<mpq_class> out(std::max(K, 0));
  const mpq_class d0 = den_.coeff(0);
  for (int n = 0; n < K; ++n) {
    mpq_class s = num_.coeff(n);
    for (int i = 1; i <= std::min(n, den_.degree()); ++i) s -= den_.coeffs()[i] * out[n - i];
    out[n] = s / d0;
  }
  return out;
}

std::string render_rational(const mpq_class& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return "(" + c.get_str() + ")";
}

std::string render_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int d = 0; d <= p.degree(); ++d) {
    const mpq_class c = p.coeffs()[d];
    if (c == 0) continue;
    const mpq_class a = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (d == 0) {
      out << render_rational(a);
      continue;
    }
    if (a != 1) out << render_rational(a) << "*";
    out << "t";
    if (d > 1) out << "^" << d;
  }
  return out.str();
}

namespace {

std::string render_side(const Poly& p) {
  int terms = 0;
  for (const auto& c : p.coeffs())
    if (c != 0) ++terms;
  const std::string s = render_poly(p);
  return terms > 1 ? "(" + s + ")" : s;
}

}  // namespace

std::string RationalFunction::to_string() const {
  if (den_ == Poly::constant(1)) return render_poly(num_);
  return render_side(num_) + " / " + render_side(den_);
}

RationalFunction poincare_from_zeta(const RationalFunction& Z) {
  const RationalFunction t = RationalFunction::monomial(1, 1);
  return (RationalFunction(1) - t * Z) / (RationalFunction(1) - t);
}

RationalFunction zeta_from_poincare(const RationalFunction& P) {
  const RationalFunction t = RationalFunction::monomial(1, 1);
  const RationalFunction top = RationalFunction(1) - (RationalFunction(1) - t) * P;
  if (top.is_zero()) return top;
  // Divide by t at the polynomial level; the constant term must vanish.
  if (top.num().coeff(0) != 0) throw DomainError("Poincare series does not start with 1");
  std::vector<mpq_class> shifted(top.num().coeffs().begin() + 1, top.num().coeffs().end());
  return RationalFunction(Poly(std::move(shifted)), top.den());
}

Poly DenominatorFactor::expand(const mpq_class& q) const {
  mpq_class qe = 1;
  for (int i = 0; i < exponent; ++i) qe *= q;
  Poly base;
  switch (kind) {
    case OneMinusT: base = Poly{1, -1 / qe}; break;
    case OnePlusT: base = Poly{1, 1 / qe}; break;
    case OneMinusT2: base = Poly{1, 0, -1 / qe}; break;
  }
  Poly out = Poly::constant(1);
  for (int i = 0; i < multiplicity; ++i) out = out * base;
  return out;
}

std::string DenominatorFactor::to_string() const {
  std::string q = exponent == 1 ? "q" : "q^" + std::to_string(exponent);
  std::string s;
  switch (kind) {
    case OneMinusT: s = "(1 - t/" + q + ")"; break;
    case OnePlusT: s = "(1 + t/" + q + ")"; break;
    case OneMinusT2: s = "(1 - t^2/" + q + ")"; break;
  }
  if (multiplicity > 1) s += "^" + std::to_string(multiplicity);
  return s;
}

Poly DenominatorShape::expand(const mpq_class& q) const {
  Poly out = residual;
  for (const auto& f : factors) out = out * f.expand(q);
  return out;
}

std::string DenominatorShape::to_string() const {
  if (factors.empty() && complete()) return "1";
  std::string s;
  for (const auto& f : factors) s += f.to_string();
  if (!complete()) s += (s.empty() ? "" : "*") + std::string("(") + render_poly(residual) + ")";
  return s;
}

DenominatorShape denominator_shape(const Poly& den, long q) {
  DenominatorShape shape;
  Poly rest = den;
  auto take = [&](DenominatorFactor::Kind kind, int e) {
    DenominatorFactor f{kind, e, 1};
    const Poly base = f.expand(mpq_class(q));
    int m = 0;
    while (rest.degree() >= base.degree()) {
      auto [quo, rem] = divmod(rest, base);
      if (!rem.is_zero()) break;
      rest = quo;
      ++m;
    }
    if (m > 0) shape.factors.push_back({kind, e, m});
  };
  take(DenominatorFactor::OneMinusT, 1);
  const int bound = 4 * std::max(den.degree(), 1) + 64;
  for (int e = 1; e <= bound && rest.degree() >= 2; ++e) take(DenominatorFactor::OneMinusT2, e);
  for (int e = 1; e <= bound && rest.degree() >= 1; ++e) {
    take(DenominatorFactor::OneMinusT, e);
    take(DenominatorFactor::OnePlusT, e);
  }
  shape.residual = rest;
  return shape;
}

}  // namespace igusa
