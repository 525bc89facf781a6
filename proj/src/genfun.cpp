#include "igusa/genfun.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace igusa {

namespace {

constexpr std::uint64_t kEnumerationLimit = 100000000;

mpq_class qpow(long q, int e) {
  mpz_class r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= q;
  return e >= 0 ? mpq_class(r) : mpq_class(1, 1) / mpq_class(r);
}

RingElem working(const FieldPtr& F, const RingElem& a) { return a.at(F->max_precision()); }

// All elements of R/p^k in index order.
std::vector<RingElem> elements(const FieldPtr& F, int k) {
  const std::uint64_t n = ring_size(F, k);
  if (n > kEnumerationLimit) throw DomainError("residue ring too large to enumerate");
  std::vector<RingElem> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(RingElem::from_index(F, k, i));
  return out;
}

std::string power_of_p(const FieldPtr& F, int j) {
  if (j == 0) return "";
  mpz_class r = 1;
  for (int i = 0; i < j; ++i) r *= static_cast<long>(F->p());
  return r.get_str();
}

RationalFunction tpow(int e, const mpq_class& c = 1) { return RationalFunction::monomial(c, e); }

}  // namespace

// ---------------------------------------------------------------------------
// ModularGF

ModularGF::ModularGF(FieldPtr f, int level) : field(std::move(f)), k(level) {
  const std::uint64_t n = ring_size(field, k);
  if (n > kEnumerationLimit) throw DomainError("residue ring too large for a dense generating function");
  coeffs.assign(n, 0);
}

ModularGF ModularGF::point(const RingElem& a, int level) {
  ModularGF g(a.field(), level);
  g.coeffs[a.at(level).index()] = 1;
  return g;
}

mpq_class ModularGF::mass() const {
  mpq_class s = 0;
  for (const auto& c : coeffs) s += c;
  return s;
}

mpq_class ModularGF::at(const RingElem& a) const { return coeffs[a.at(k).index()]; }

ModularGF ModularGF::project(int j) const {
  if (j > k) throw DomainError("projection to a finer level");
  ModularGF g(field, j);
  for (std::uint64_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    g.coeffs[RingElem::from_index(field, k, i).reduce(j).index()] += coeffs[i];
  }
  return g;
}

std::string ModularGF::to_string() const {
  std::ostringstream out;
  for (std::uint64_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    out << RingElem::from_index(field, k, i).to_string() << " : " << render_rational(coeffs[i]) << "\n";
  }
  return out.str();
}

ModularGF modular_gf(const QuadPoly& f, int k) {
  if (k > f.precision) throw DomainError("polynomial known only to precision " + std::to_string(f.precision));
  const int n = f.n();
  const auto elems = elements(f.field, k);
  const std::uint64_t V = elems.size();
  unsigned __int128 total = 1;
  for (int i = 0; i < n; ++i) {
    total *= V;
    if (total > kEnumerationLimit) throw DomainError("domain too large for exhaustive enumeration");
  }
  std::vector<std::uint64_t> counts(V, 0);
  std::vector<std::uint64_t> idx(n, 0);
  std::vector<RingElem> x(n);
  for (std::uint64_t step = 0; step < static_cast<std::uint64_t>(total); ++step) {
    for (int i = 0; i < n; ++i) x[i] = elems[idx[i]];
    ++counts[f.eval(x).at(k).index()];
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < V) break;
      idx[i] = 0;
    }
  }
  ModularGF g(f.field, k);
  const mpq_class w = 1 / mpq_class(mpz_class(std::to_string(static_cast<std::uint64_t>(total))));
  for (std::uint64_t i = 0; i < V; ++i)
    if (counts[i]) g.coeffs[i] = w * mpz_class(std::to_string(counts[i]));
  return g;
}

ModularGF gr_mul(const ModularGF& a, const ModularGF& b) {
  if (a.k != b.k) throw DomainError("group ring product of different levels");
  const auto elems = elements(a.field, a.k);
  ModularGF g(a.field, a.k);
  for (std::uint64_t i = 0; i < elems.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::uint64_t j = 0; j < elems.size(); ++j) {
      if (b.coeffs[j] == 0) continue;
      g.coeffs[(elems[i] + elems[j]).index()] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return g;
}

std::vector<mpq_class> ig_truncated(const std::vector<ModularGF>& family) {
  if (family.empty()) return {};
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].k != static_cast<int>(k)) throw DomainError("family entry has the wrong level");
    if (k > 0 && !(family[k].project(static_cast<int>(k) - 1) == family[k - 1]))
      throw DomainError("family is not projectively consistent at level " + std::to_string(k));
  }
  const FieldPtr& F = family[0].field;
  std::vector<mpq_class> vol;
  for (std::size_t k = 0; k < family.size(); ++k) vol.push_back(family[k].at(RingElem(F, static_cast<int>(k))));
  std::vector<mpq_class> out;
  for (std::size_t k = 0; k + 1 < vol.size(); ++k) out.push_back(vol[k] - vol[k + 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Coset terms

std::string CosetTerm::to_string() const {
  const FieldPtr& F = rep.field();
  if (singleton()) return "z^{" + rep.to_string() + "}";
  const std::string ideal = power_of_p(F, level) + "R";
  const RingElem r = rep.reduce(level);
  if (r.is_zero()) return "z^{" + ideal + "}";
  return "z^{" + r.to_string() + " + " + ideal + "}";
}

CosetTerm coset_mul(const CosetTerm& a, const CosetTerm& b) {
  const int level = std::min(a.level, b.level);
  RingElem s = a.rep + b.rep;
  if (level != kPoint) s = s.reduce(level).lift(s.precision());
  return {s, level};
}

CosetCombination::CosetCombination(FieldPtr field) : field_(std::move(field)) {}

CosetCombination CosetCombination::coset(const RingElem& a, int level, const mpq_class& coeff) {
  const FieldPtr& F = a.field();
  const int W = F->max_precision();
  if (level < 0) throw DomainError("negative coset level");
  if (level > W) throw DomainError("coset level beyond the working precision");
  if (a.precision() < level) throw DomainError("coset representative known to too few digits");
  CosetCombination out(F);
  out.add({a.reduce(level).lift(W), level}, coeff);
  return out;
}

CosetCombination CosetCombination::ideal(const FieldPtr& field, int level, const mpq_class& coeff) {
  return coset(RingElem(field, field->max_precision()), level, coeff);
}

CosetCombination CosetCombination::point(const RingElem& a, const mpq_class& coeff) {
  CosetCombination out(a.field());
  out.add({working(a.field(), a), kPoint}, coeff);
  return out;
}

void CosetCombination::add(const CosetTerm& t, const mpq_class& c) {
  if (c == 0) return;
  if (!field_) field_ = t.rep.field();
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    mpq_class v = c;
    v.canonicalize();
    terms_.emplace(t, v);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

mpq_class CosetCombination::mass() const {
  mpq_class s = 0;
  for (const auto& [t, c] : terms_) s += c;
  return s;
}

int CosetCombination::max_level() const {
  int m = -1;
  for (const auto& [t, c] : terms_)
    if (!t.singleton()) m = std::max(m, t.level);
  return m;
}

bool CosetCombination::has_points() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& e) { return e.first.singleton(); });
}

bool CosetCombination::is_uniform(int j) const {
  return std::all_of(terms_.begin(), terms_.end(), [j](const auto& e) { return e.first.level <= j; });
}

CosetCombination CosetCombination::operator+(const CosetCombination& b) const {
  CosetCombination out = *this;
  out += b;
  return out;
}

CosetCombination& CosetCombination::operator+=(const CosetCombination& b) {
  for (const auto& [t, c] : b.terms_) add(t, c);
  return *this;
}

CosetCombination CosetCombination::operator-(const CosetCombination& b) const { return *this + b * mpq_class(-1); }

CosetCombination CosetCombination::operator*(const mpq_class& s) const {
  CosetCombination out(field_);
  if (s == 0) return out;
  for (const auto& [t, c] : terms_) out.terms_.emplace(t, c * s);
  return out;
}

CosetCombination CosetCombination::operator*(const CosetCombination& b) const {
  CosetCombination out(field_ ? field_ : b.field_);
  for (const auto& [ta, ca] : terms_)
    for (const auto& [tb, cb] : b.terms_) out.add(coset_mul(ta, tb), ca * cb);
  return out;
}

std::string CosetCombination::to_string() const {
  if (terms_.empty()) return "0\n";
  std::ostringstream out;
  for (const auto& [t, c] : terms_) out << render_rational(c) << " * " << t.to_string() << "\n";
  return out.str();
}

CosetCombination coalesce(const CosetCombination& F) {
  if (F.is_zero()) return F;
  const FieldPtr& field = F.field();
  const long q = field->q();
  std::map<int, std::map<RingElem, mpq_class>> by_level;
  CosetCombination out(field);
  for (const auto& [t, c] : F.terms()) {
    if (t.singleton())
      out.add(t, c);
    else
      by_level[t.level][t.rep] += c;
  }
  if (by_level.empty()) return out;
  for (int j = by_level.rbegin()->first; j >= 1; --j) {
    auto it = by_level.find(j);
    if (it == by_level.end()) continue;
    std::map<RingElem, std::vector<std::pair<RingElem, mpq_class>>> families;
    for (const auto& [rep, c] : it->second) {
      if (c == 0) continue;
      families[rep.reduce(j - 1).lift(rep.precision())].push_back({rep, c});
    }
    std::map<RingElem, mpq_class> keep;
    for (auto& [parent, kids] : families) {
      const bool complete = static_cast<long>(kids.size()) == q &&
                            std::all_of(kids.begin(), kids.end(), [&](const auto& e) { return e.second == kids[0].second; });
      if (complete)
        by_level[j - 1][parent] += kids[0].second * q;
      else
        for (auto& [rep, c] : kids) keep[rep] += c;
    }
    it->second = std::move(keep);
  }
  for (const auto& [j, reps] : by_level)
    for (const auto& [rep, c] : reps) out.add({rep, j}, c);
  return out;
}

CosetCombination uniformize(const CosetCombination& F, int j) {
  CosetCombination out(F.field());
  for (const auto& [t, c] : F.terms()) {
    if (t.level <= j)
      out.add(t, c);
    else
      out.add({t.rep.reduce(j).lift(t.rep.precision()), j}, c);
  }
  return out;
}

CosetCombination scale(const CosetCombination& F, const RingElem& s) {
  if (F.is_zero()) return F;
  const FieldPtr& field = F.field();
  const RingElem sw = working(field, s);
  if (sw.is_zero()) return CosetCombination::point(RingElem(field, field->max_precision()), F.mass());
  const int v = sw.val();
  CosetCombination out(field);
  for (const auto& [t, c] : F.terms()) {
    if (t.singleton()) {
      out.add({t.rep * sw, kPoint}, c);
      continue;
    }
    if (t.level + v > field->max_precision()) throw DomainError("scaled coset beyond the working precision");
    const int level = t.level + v;
    out.add({(t.rep * sw).reduce(level).lift(field->max_precision()), level}, c);
  }
  return out;
}

CosetCombination scale_pi(const CosetCombination& F, int j) {
  if (F.is_zero() || j == 0) return F;
  const FieldPtr& field = F.field();
  const int W = field->max_precision();
  CosetCombination out(field);
  for (const auto& [t, c] : F.terms()) {
    if (t.singleton()) {
      out.add({t.rep.mul_p(j), kPoint}, c);
      continue;
    }
    if (t.level + j > W) throw DomainError("scaled coset beyond the working precision");
    out.add({t.rep.mul_p(j), t.level + j}, c);
  }
  return out;
}

ModularGF project(const CosetCombination& F, int k) {
  if (!F.field()) throw DomainError("projection of an empty combination needs a field");
  ModularGF g(F.field(), k);
  for (const auto& [t, c] : F.terms()) {
    if (t.level >= k) {
      g.coeffs[t.rep.reduce(k).index()] += c;
      continue;
    }
    const int gap = k - t.level;
    const auto fill = elements(F.field(), gap);
    const mpq_class share = c / mpq_class(static_cast<unsigned long>(fill.size()));
    const RingElem base = t.rep.reduce(k);
    for (const auto& x : fill) g.coeffs[(base + x.lift(k).mul_p(t.level)).index()] += share;
  }
  return g;
}

bool same_element(const CosetCombination& a, const CosetCombination& b) {
  CosetCombination pa(a.field()), pb(b.field()), ca(a.field()), cb(b.field());
  for (const auto& [t, c] : a.terms()) (t.singleton() ? pa : ca).add(t, c);
  for (const auto& [t, c] : b.terms()) (t.singleton() ? pb : cb).add(t, c);
  if (!(pa == pb)) return false;
  if (ca.is_zero() && cb.is_zero()) return true;
  const FieldPtr field = ca.field() ? ca.field() : cb.field();
  if (!ca.field()) ca = CosetCombination(field);
  if (!cb.field()) cb = CosetCombination(field);
  const int k = std::max({ca.max_level(), cb.max_level(), 0});
  return project(ca, k) == project(cb, k);
}

RationalFunction ig_ideal(long q, int j) {
  const RationalFunction igr(Poly{1 - mpq_class(1, q)}, Poly{1, -mpq_class(1, q)});
  return tpow(j) * igr;
}

RationalFunction ig(const CosetCombination& F) {
  if (F.is_zero()) return RationalFunction();
  const long q = F.field()->q();
  // Collect t-power coefficients, then the ideal terms.
  std::map<int, mpq_class> mono, ideal;
  for (const auto& [t, c] : F.terms()) {
    if (t.singleton()) {
      if (!t.rep.is_zero()) mono[t.rep.val()] += c;
      continue;
    }
    const RingElem r = t.rep.reduce(t.level);
    if (r.is_zero())
      ideal[t.level] += c;
    else
      mono[r.val()] += c;
  }
  int top = 0;
  for (const auto& [e, c] : mono) top = std::max(top, e);
  std::vector<mpq_class> m(top + 1);
  for (const auto& [e, c] : mono) m[e] += c;
  int itop = 0;
  for (const auto& [e, c] : ideal) itop = std::max(itop, e);
  std::vector<mpq_class> id(itop + 1);
  for (const auto& [e, c] : ideal) id[e] += c;
  return RationalFunction(Poly(m)) + RationalFunction(Poly(id)) * ig_ideal(q);
}

// ---------------------------------------------------------------------------
// Heads

namespace {

std::mutex head_mutex;
std::unordered_map<std::string, CosetCombination>& head_cache() {
  static std::unordered_map<std::string, CosetCombination> cache;
  return cache;
}

CosetCombination enumerate_head(const UnimodularClass& Q) {
  const FieldPtr& F = Q.field;
  const int ell = F->ell();
  const int L = 2 * ell + 1;
  const int n = Q.rank();
  CosetCombination out(F);
  if (n == 0) return out;
  const Matrix M = Q.gram(L);
  const auto elems = elements(F, ell + 1);
  const std::uint64_t V = elems.size();
  unsigned __int128 total = 1;
  for (int i = 0; i < n; ++i) {
    total *= V;
    if (total > kEnumerationLimit) throw DomainError("head enumeration too large for " + Q.to_string());
  }
  std::vector<RingElem> lifted;
  for (const auto& e : elems) lifted.push_back(e.lift(L));
  std::map<RingElem, std::uint64_t> counts;
  std::vector<std::uint64_t> idx(n, 0);
  for (std::uint64_t step = 0; step < static_cast<std::uint64_t>(total); ++step) {
    bool unit = false;
    for (int i = 0; i < n && !unit; ++i) unit = elems[idx[i]].reduce(1).is_unit();
    if (unit) {
      RingElem v(F, L);
      for (int i = 0; i < n; ++i) {
        if (idx[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
          if (idx[j] == 0 || M[i][j].is_zero()) continue;
          v += M[i][j] * lifted[idx[i]] * lifted[idx[j]];
        }
      }
      ++counts[v];
    }
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < V) break;
      idx[i] = 0;
    }
  }
  const mpq_class w = qpow(F->q(), -n * (ell + 1));
  for (const auto& [v, c] : counts) out.add({v.lift(F->max_precision()), L}, w * static_cast<unsigned long>(c));
  return coalesce(out);
}

}  // namespace

CosetCombination head_unimodular(const UnimodularClass& Q) {
  const std::string key = Q.field->describe() + "|" + Q.to_string();
  {
    std::lock_guard<std::mutex> lock(head_mutex);
    auto it = head_cache().find(key);
    if (it != head_cache().end()) return it->second;
  }
  CosetCombination h = enumerate_head(Q);
  std::lock_guard<std::mutex> lock(head_mutex);
  head_cache().emplace(key, h);
  return h;
}

namespace {

void require_two(const FieldPtr& F) {
  if (F->p() != 2) throw DomainError("closed form needs p = 2");
}
void require_odd(const FieldPtr& F) {
  if (F->p() == 2) throw DomainError("closed form needs odd p");
}

RingElem minus_one_power(const FieldPtr& F, int e, int k) {
  return RingElem::from_int(F, k, (e % 2 == 0) ? 1 : -1);
}

// (2/q^e) sum_{tau in T*, s in S} z^{tau (u + 4 s) + 8R}, u given mod 8.
CosetCombination unit_sum_level3(const FieldPtr& F, const RingElem& u, int e) {
  CosetCombination out(F);
  const RingElem u3 = u.at(3);
  const mpq_class w = mpq_class(2) * qpow(F->q(), -e);
  const auto S = trace_zero_set(F, 3);
  for (const auto& tau : teichmuller_units(F, 3))
    for (const auto& s : S) out += CosetCombination::coset(tau * (u3 + s.mul_p(2)), 3, w);
  return out;
}

// (2/q^e) sum z^{tau (a + v s) + 4R}
CosetCombination unit_sum_level2(const FieldPtr& F, const RingElem& a, const RingElem& v, int e) {
  CosetCombination out(F);
  const mpq_class w = mpq_class(2) * qpow(F->q(), -e);
  const auto S = trace_zero_set(F, 2);
  for (const auto& tau : teichmuller_units(F, 2))
    for (const auto& s : S) out += CosetCombination::coset(tau * (a.at(2) + v.at(2) * s), 2, w);
  return out;
}

}  // namespace

CosetCombination head_square_odd(const FieldPtr& F, const RingElem& a) {
  require_odd(F);
  const long q = F->q();
  CosetCombination h = CosetCombination::ideal(F, 0) - CosetCombination::ideal(F, 1, mpq_class(1, q));
  for (const auto& tau : teichmuller_units(F, 1))
    h += CosetCombination::coset(tau, 1, mpq_class(eta(a.at(1) * tau), q));
  return h;
}

CosetCombination head_square_two(const FieldPtr& F, const RingElem& a) {
  require_two(F);
  return unit_sum_level3(F, a, 2);
}

CosetCombination head_planes(const FieldPtr& F, int rank, int sign) {
  require_two(F);
  if (rank == 0) return CosetCombination(F);
  const mpq_class x = sign * qpow(F->q(), -rank / 2);
  return (CosetCombination::ideal(F, 1) + CosetCombination::ideal(F, 2, x)) * (1 - x);
}

CosetCombination head_even_rank_odd(const FieldPtr& F, int rank, const RingElem& disc) {
  require_odd(F);
  if (rank == 0) return CosetCombination(F);
  const int e = eta(minus_one_power(F, rank / 2, disc.precision()) * disc);
  const mpq_class x = e * qpow(F->q(), -rank / 2);
  return (CosetCombination::ideal(F, 0) + CosetCombination::ideal(F, 1, x)) * (1 - x);
}

CosetCombination head_odd_rank_odd(const FieldPtr& F, int rank, const RingElem& disc) {
  require_odd(F);
  const long q = F->q();
  CosetCombination h = CosetCombination::ideal(F, 0) - CosetCombination::ideal(F, 1, qpow(q, -rank));
  const int e = eta(minus_one_power(F, (rank - 1) / 2, disc.precision()) * disc);
  const mpq_class w = e * qpow(q, -(rank + 1) / 2);
  for (const auto& tau : teichmuller_units(F, 1)) h += CosetCombination::coset(tau, 1, w * eta(tau));
  return h;
}

int sign_sigma(const RingElem& a, const RingElem& b) {
  const RingElem s = a.at(3) + b.at(3);
  if (s.val() < 2) throw DomainError("sigma needs 4 | a + b");
  return trace_parity(s.div_p(2) * a.at(1).inverse()) ? -1 : 1;
}

namespace {

// 2 / ((a+b)/2)^{-1} mod 4, i.e. the element 4/(a+b) for a + b = 2 mod 4.
RingElem four_over(const RingElem& a, const RingElem& b) {
  const RingElem s = a.at(3) + b.at(3);
  if (s.val() != 1) throw DomainError("expected a + b = 2 mod 4");
  return s.div_p(1).inverse().at(3).mul_p(1);
}

}  // namespace

CosetCombination head_two_squares(const FieldPtr& F, const RingElem& a, const RingElem& b) {
  require_two(F);
  const long q = F->q();
  const RingElem s = a.at(3) + b.at(3);
  if (s.val() >= 2) {
    const int sigma = sign_sigma(a, b);
    return CosetCombination::ideal(F, 0) - CosetCombination::ideal(F, 1, mpq_class(1, q)) +
           CosetCombination::ideal(F, 2, mpq_class(q - 1 - sigma, q * q)) +
           CosetCombination::ideal(F, 3, mpq_class(sigma, q * q));
  }
  return unit_sum_level2(F, a, four_over(a, b), 2) + unit_sum_level3(F, s, 3);
}

CosetCombination head_square_planes_two(const FieldPtr& F, const RingElem& a, int rank, int sign) {
  require_two(F);
  const long q = F->q();
  const mpq_class x = sign * qpow(q, -(rank - 1) / 2);
  CosetCombination inner = CosetCombination::ideal(F, 0);
  const mpq_class y = sign * qpow(q, -(rank + 1) / 2);
  for (const auto& tau : teichmuller_set(F, 2)) inner += CosetCombination::coset(a.at(2) * tau, 2, y);
  return inner * (1 - x) + unit_sum_level3(F, a, rank + 1);
}

CosetCombination head_two_squares_planes(const FieldPtr& F, const RingElem& a, const RingElem& b, int rank,
                                         int sign) {
  require_two(F);
  const long q = F->q();
  const RingElem s = a.at(3) + b.at(3);
  const mpq_class x = sign * qpow(q, -rank / 2);
  if (s.val() >= 2) {
    const int sigma = sign_sigma(a, b);
    return CosetCombination::ideal(F, 0) - CosetCombination::ideal(F, 1, x) + CosetCombination::ideal(F, 2, x) -
           CosetCombination::ideal(F, 2, (sigma + 1) * qpow(q, -rank)) +
           CosetCombination::ideal(F, 3, sigma * qpow(q, -rank));
  }
  const mpq_class y = sign * qpow(q, -(rank - 2) / 2);
  CosetCombination h = (CosetCombination::ideal(F, 0) + CosetCombination::ideal(F, 1, x)) * (1 - y);
  h += unit_sum_level2(F, a, four_over(a, b), (rank + 2) / 2) * mpq_class(sign);
  h += unit_sum_level3(F, s, rank + 1);
  return h;
}

CosetCombination head_closed_form(const UnimodularClass& Q) {
  const FieldPtr& F = Q.field;
  const int r = Q.rank();
  if (r == 0) return CosetCombination(F);
  if (F->p() != 2) return r % 2 == 0 ? head_even_rank_odd(F, r, Q.disc()) : head_odd_rank_odd(F, r, Q.disc());
  const int sign = Q.plane_sign();
  switch (Q.squares.size()) {
    case 0: return head_planes(F, r, sign);
    case 1: return r == 1 ? head_square_two(F, Q.squares[0]) : head_square_planes_two(F, Q.squares[0], r, sign);
    case 2:
      return r == 2 ? head_two_squares(F, Q.squares[0], Q.squares[1])
                    : head_two_squares_planes(F, Q.squares[0], Q.squares[1], r, sign);
    default: throw DomainError("no closed form for " + Q.to_string());
  }
}

CosetCombination hensel_head(const QuadPoly& f, Region region, int j,
                             const std::function<bool(const std::vector<RingElem>&)>& extra) {
  const FieldPtr& F = f.field;
  const int L = 2 * j + 1;
  if (f.precision < L) throw DomainError("polynomial known to too few digits for this head");
  const int n = f.n();
  const auto elems = elements(F, j + 1);
  const std::uint64_t V = elems.size();
  unsigned __int128 total = 1;
  for (int i = 0; i < n; ++i) {
    total *= V;
    if (total > kEnumerationLimit) throw DomainError("region too large to enumerate");
  }
  const mpq_class w = qpow(F->q(), -n * (j + 1));
  CosetCombination out(F);
  std::vector<std::uint64_t> idx(n, 0);
  std::vector<RingElem> x(n);
  for (std::uint64_t step = 0; step < static_cast<std::uint64_t>(total); ++step) {
    bool inside = true;
    if (region == Region::NotAllDivisible) {
      inside = false;
      for (int i = 0; i < n; ++i) inside = inside || elems[idx[i]].reduce(1).is_unit();
    }
    for (int i = 0; i < n; ++i) x[i] = elems[idx[i]].lift(L);
    if (inside && extra) inside = extra(x);
    if (inside) {
      int vmin = L;
      for (int i = 0; i < n; ++i) {
        RingElem g = f.b[i].at(L);
        for (int k = 0; k < n; ++k) g += f.M[i][k].at(L) * x[k] * RingElem::from_int(F, L, 2);
        vmin = std::min(vmin, g.val());
      }
      if (vmin != j) {
        std::string pt;
        for (int i = 0; i < n; ++i) pt += (i ? "," : "") + elems[idx[i]].to_string();
        throw DomainError("derivative has valuation " + std::to_string(vmin) + " != " + std::to_string(j) +
                          " at (" + pt + ")");
      }
      out.add({f.eval(x).at(F->max_precision()).reduce(L).lift(F->max_precision()), L}, w);
    }
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < V) break;
      idx[i] = 0;
    }
  }
  return coalesce(out);
}

// ---------------------------------------------------------------------------
// Whole generating functions

CosetCombination uniformized_gf(const UnimodularClass& Q, int m) {
  const FieldPtr& F = Q.field;
  if (m <= 0) return CosetCombination::ideal(F, 0);
  if (Q.rank() == 0) return CosetCombination::ideal(F, m);
  CosetCombination tail =
      m <= 2 ? CosetCombination::ideal(F, m) : scale_pi(uniformized_gf(Q, m - 2), 2);
  return coalesce(uniformize(head_unimodular(Q), m) + tail * qpow(F->q(), -Q.rank()));
}

CosetCombination uniformized_scaled_gf(const UnimodularClass& Q, int s, int m) {
  if (m <= s) return CosetCombination::ideal(Q.field, std::max(m, 0));
  return scale_pi(uniformized_gf(Q, m - s), s);
}

CosetCombination head_product(const std::vector<UnimodularClass>& P, const RingElem& a, int mu) {
  if (P.empty()) throw DomainError("head product needs at least the head block");
  const FieldPtr& F = P[0].field;
  const int L = 2 * F->ell() + 1;
  CosetCombination acc =
      mu == kPoint ? CosetCombination::point(a) : CosetCombination::coset(a.at(std::max(a.precision(), mu)), mu);
  acc = acc * head_unimodular(P[0]);
  for (std::size_t j = 1; j < P.size() && static_cast<int>(j) < L; ++j)
    acc = coalesce(acc * uniformized_scaled_gf(P[j], static_cast<int>(j), L));
  return coalesce(acc);
}

RationalFunction head_product_ig(const std::vector<UnimodularClass>& P, const RingElem& a, int mu) {
  return ig(head_product(P, a, mu));
}

RationalFunction ig_two_block(const UnimodularClass& A, const UnimodularClass& B) {
  const FieldPtr& F = A.field;
  const long q = F->q();
  const int ell = F->ell();
  const RationalFunction i1 = ig(head_unimodular(A) * scale_pi(uniformized_gf(B, 2 * ell), 1));
  const RationalFunction i2 = ig(head_unimodular(B) * scale_pi(uniformized_gf(A, 2 * ell), 1));
  const RationalFunction num = i1 + tpow(1, qpow(q, -A.rank())) * i2;
  const RationalFunction den(Poly{1, 0, -qpow(q, -(A.rank() + B.rank()))});
  return num / den;
}

namespace {

// p^m-uniformization of G_{A + p B}.
CosetCombination uniformized_two_block(const UnimodularClass& A, const UnimodularClass& B, int m) {
  const FieldPtr& F = A.field;
  if (m <= 0) return CosetCombination::ideal(F, 0);
  const int L = 2 * F->ell() + 1;
  CosetCombination first = uniformize(head_unimodular(A) * uniformized_scaled_gf(B, 1, std::max(m, L)), m);
  CosetCombination rest = m <= 1 ? CosetCombination::ideal(F, m) : scale_pi(uniformized_two_block(B, A, m - 1), 1);
  return coalesce(first + rest * qpow(F->q(), -A.rank()));
}

}  // namespace

CosetCombination AssembledGF::uniformized(int K) const {
  CosetCombination out = uniformize(body, K);
  if (has_tail) {
    CosetCombination t = K <= tail_shift ? CosetCombination::ideal(field, K)
                                         : scale_pi(uniformized_two_block(tail_a, tail_b, K - tail_shift), tail_shift);
    out += uniformize(CosetCombination::point(c) * t, K) * tail_coeff;
  }
  return coalesce(out);
}

RationalFunction AssembledGF::ig() const {
  RationalFunction z = igusa::ig(body);
  if (!has_tail) return z;
  RationalFunction tail;
  if (c.is_zero())
    tail = tpow(tail_shift) * ig_two_block(tail_a, tail_b);
  else if (c.val() < tail_shift)
    tail = tpow(c.val());
  else
    throw DomainError("constant too deep for the assembled tail");
  return z + tail * RationalFunction(Poly{tail_coeff});
}

AssembledGF assemble_gf(const JordanForm& J) {
  const FieldPtr& F = J.field;
  const long q = F->q();
  const int ell = F->ell();
  const int W = F->max_precision();
  AssembledGF out;
  out.field = F;
  out.body = CosetCombination(F);
  out.c = J.c.field() ? J.c.at(W) : RingElem(F, W);
  const bool c_zero = out.c.is_zero();

  // Term i: z^{shift} / q_(i) * H_{Q(i)}(z^{p^i}) * G_{Q(i+1)}(z^{p^{i+1}}) * prod G_{Q_{i+j}}(z^{p^{i+j}})
  auto term = [&](int i, const CosetCombination& shift) {
    const UnimodularClass Qi = J.folded(i);
    if (Qi.rank() == 0) return CosetCombination(F);
    CosetCombination acc = shift * scale_pi(head_unimodular(Qi), i);
    acc = coalesce(acc * scale_pi(uniformized_gf(J.folded(i + 1), 2 * ell), i + 1));
    for (int j = 2; j <= 2 * ell; ++j)
      acc = coalesce(acc * scale_pi(uniformized_gf(J.block(i + j), 2 * ell + 1 - j), i + j));
    return acc * qpow(q, -J.q_paren_exponent(i));
  };

  const CosetCombination zc = CosetCombination::point(out.c);
  if (!J.lambda) {
    int omega = std::max(J.max_exponent(), 1);
    if (!c_zero) omega = std::max(omega, out.c.val() + 2);
    for (int i = 0; i + 1 < omega; ++i) out.body += term(i, zc);
    out.has_tail = true;
    out.tail_coeff = qpow(q, -J.q_paren_exponent(omega - 1));
    out.tail_shift = omega - 1;
    out.tail_a = J.folded(omega - 1);
    out.tail_b = J.folded(omega);
  } else {
    const int lambda = *J.lambda;
    const CosetCombination zcl = CosetCombination::coset(out.c, lambda);
    for (int i = 0; i < lambda; ++i) out.body += term(i, i < lambda - 2 * ell ? zc : zcl);
    out.body += zcl * qpow(q, -J.q_paren_exponent(lambda));
  }
  out.body = coalesce(out.body);
  return out;
}

}  // namespace igusa
