#include "igusa/oracle.hpp"

#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

namespace igusa {

namespace {

using u128 = unsigned __int128;

constexpr double kEnumerationLimit = 1e8;

mpz_class to_mpz(u128 v) {
  mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
  return (hi << 64) + lo;
}

// Index arithmetic on R/p^k: an index packs f digits base p^k.
struct Residues {
  FieldPtr field;
  int k;
  int f;
  std::uint64_t m;
  std::uint64_t size;

  int shift = 0;  // log2(m) when p = 2, else 0
  std::uint64_t mask = 0;

  Residues(FieldPtr F, int level) : field(std::move(F)), k(level), f(field->f()) {
    m = static_cast<std::uint64_t>(field->pk(k));
    size = ring_size(field, k);
    if (field->p() == 2) {
      shift = k;
      mask = m - 1;
    }
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    if (f == 1) return a >= b ? a - b : a + m - b;
    std::uint64_t out = 0;
    if (shift) {
      for (int i = 0; i < f; ++i) out |= (((a >> (shift * i)) - (b >> (shift * i))) & mask) << (shift * i);
      return out;
    }
    std::uint64_t scale = 1;
    for (int i = 0; i < f; ++i) {
      const std::uint64_t x = a % m, y = b % m;
      out += (x >= y ? x - y : x + m - y) * scale;
      a /= m;
      b /= m;
      scale *= m;
    }
    return out;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return sub(a, sub(0, b)); }
  // Valuation of the element with index i (k for zero).
  int val(std::uint64_t i) const {
    int v = k;
    const std::uint64_t p = static_cast<std::uint64_t>(field->p());
    for (int j = 0; j < f; ++j, i /= m) {
      std::uint64_t x = i % m;
      if (x == 0) continue;
      int e = 0;
      while (x % p == 0) {
        x /= p;
        ++e;
      }
      v = std::min(v, e);
    }
    return v;
  }
  RingElem elem(std::uint64_t i) const { return RingElem::from_index(field, k, i); }
};

// Orbits of R/p^k under multiplication by the unit squares.
struct Orbits {
  std::vector<std::uint32_t> id;
  std::vector<std::uint64_t> rep;
  std::vector<std::uint64_t> size;
};

std::mutex orbit_mutex;

const Orbits& square_orbits(const FieldPtr& F, int k) {
  static std::map<std::string, Orbits> cache;
  const std::string key = F->describe() + "#" + std::to_string(k);
  std::lock_guard<std::mutex> lock(orbit_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const Residues R(F, k);
  if (static_cast<double>(R.size) > kEnumerationLimit) throw DomainError("residue ring too large for the oracle");
  std::vector<RingElem> squares;
  {
    std::vector<char> seen(R.size, 0);
    for (std::uint64_t i = 0; i < R.size; ++i) {
      const RingElem u = R.elem(i);
      if (!u.is_unit()) continue;
      const std::uint64_t s = (u * u).index();
      if (!seen[s]) {
        seen[s] = 1;
        squares.push_back(R.elem(s));
      }
    }
  }
  Orbits o;
  const auto none = std::numeric_limits<std::uint32_t>::max();
  o.id.assign(R.size, none);
  for (std::uint64_t v = 0; v < R.size; ++v) {
    if (o.id[v] != none) continue;
    const auto oid = static_cast<std::uint32_t>(o.rep.size());
    o.rep.push_back(v);
    o.size.push_back(0);
    const RingElem x = R.elem(v);
    if (k == 0 || x.is_zero()) {
      o.id[v] = oid;
      o.size[oid] = 1;
      continue;
    }
    for (const auto& s : squares) {
      const std::uint64_t w = (s * x).index();
      if (o.id[w] == none) {
        o.id[w] = oid;
        ++o.size[oid];
      }
    }
  }
  return cache.emplace(key, std::move(o)).first->second;
}

struct Dense {
  int n = 0;
  std::vector<u128> counts;
};

struct Component {
  std::vector<int> vars;
  bool invariant;  // purely quadratic or purely linear
};

std::vector<Component> components(const QuadPoly& f) {
  const int n = f.n();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!f.M[i][j].is_zero()) parent[root(i)] = root(j);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[root(i)].push_back(i);
  std::vector<Component> out;
  for (auto& [r, vars] : groups) {
    bool quad = false, lin = false;
    for (int i : vars) {
      lin = lin || !f.b[i].is_zero();
      for (int j : vars) quad = quad || !f.M[i][j].is_zero();
    }
    out.push_back({vars, !(quad && lin)});
  }
  return out;
}

QuadPoly restrict(const QuadPoly& f, const std::vector<int>& vars) {
  QuadPoly g(f.field, f.precision, static_cast<int>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = 0; j < vars.size(); ++j) g.M[i][j] = f.M[vars[i]][vars[j]];
    g.b[i] = f.b[vars[i]];
  }
  g.c = RingElem(f.field, f.precision);
  return g;
}

Dense brute_force(const QuadPoly& g, int k) {
  const Residues R(g.field, k);
  const int n = g.n();
  double total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(R.size);
  if (total > kEnumerationLimit)
    throw DomainError("component with " + std::to_string(n) + " variables too large to enumerate at level " +
                      std::to_string(k));
  Dense d{n, std::vector<u128>(R.size, 0)};
  if (g.field->f() == 1 && n > 0) {
    // Integer arithmetic mod p^k; for f = 1 the index is the residue itself.
    const std::int64_t m = static_cast<std::int64_t>(R.m);
    std::vector<std::vector<std::int64_t>> M(n, std::vector<std::int64_t>(n));
    std::vector<std::int64_t> b(n);
    for (int i = 0; i < n; ++i) {
      b[i] = static_cast<std::int64_t>(g.b[i].at(k).index());
      for (int j = 0; j < n; ++j) M[i][j] = static_cast<std::int64_t>(g.M[i][j].at(k).index());
    }
    std::vector<std::int64_t> x(n, 0);
    const auto steps = static_cast<std::uint64_t>(total);
    for (std::uint64_t s = 0; s < steps; ++s) {
      std::int64_t v = 0;
      for (int i = 0; i < n; ++i) {
        std::int64_t row = b[i];
        for (int j = 0; j < n; ++j) row = (row + M[i][j] * x[j]) % m;
        v = (v + row * x[i]) % m;
      }
      ++d.counts[static_cast<std::uint64_t>(v)];
      for (int i = 0; i < n; ++i) {
        if (++x[i] < m) break;
        x[i] = 0;
      }
    }
    return d;
  }
  std::vector<RingElem> elems;
  for (std::uint64_t i = 0; i < R.size; ++i) elems.push_back(R.elem(i));
  std::vector<std::uint64_t> idx(n, 0);
  std::vector<RingElem> x(n);
  const auto steps = static_cast<std::uint64_t>(total);
  for (std::uint64_t s = 0; s < steps; ++s) {
    for (int i = 0; i < n; ++i) x[i] = elems[idx[i]];
    if (n == 0)
      ++d.counts[0];
    else
      ++d.counts[g.eval(x).index()];
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < R.size) break;
      idx[i] = 0;
    }
  }
  return d;
}

// Binary quadratic form without linear part. Split by the variable of least
// valuation m and substitute x = p^m u, y = p^m u y' (or the mirror image);
// summing over the unit u averages the y'-histogram over square orbits.
Dense binary_form(const QuadPoly& g, int k) {
  const FieldPtr& F = g.field;
  const Residues R(F, k);
  const Orbits& O = square_orbits(F, k);
  const RingElem a = g.M[0][0].at(k), b = g.M[0][1].at(k), c = g.M[1][1].at(k);
  const RingElem two = RingElem::from_int(F, k, 2);
  const u128 q = static_cast<u128>(F->q());
  Dense d{2, std::vector<u128>(R.size, 0)};
  d.counts[0] += 1;  // (0, 0)
  std::vector<u128> g_counts(R.size);
  std::vector<u128> tot(O.rep.size());
  for (int m = 0; m < k; ++m) {
    const int rest = k - m;
    u128 units = 1;
    for (int i = 0; i < rest; ++i) units *= q;
    units -= units / q;
    for (int side = 0; side < 2; ++side) {
      std::fill(g_counts.begin(), g_counts.end(), 0);
      // side 0: Q(1, y'), y' mod p^rest;  side 1: Q(x', 1), x' in pR mod p^rest
      const std::uint64_t range = ring_size(F, side == 0 ? rest : rest - 1);
      for (std::uint64_t i = 0; i < range; ++i) {
        RingElem y = RingElem::from_index(F, side == 0 ? rest : rest - 1, i).lift(k);
        if (side == 1) y = y.mul_p(1);
        const RingElem v = side == 0 ? a + two * b * y + c * y * y : a * y * y + two * b * y + c;
        ++g_counts[v.mul_p(2 * m).index()];
      }
      std::fill(tot.begin(), tot.end(), 0);
      for (std::uint64_t v = 0; v < R.size; ++v) tot[O.id[v]] += g_counts[v];
      for (std::uint64_t v = 0; v < R.size; ++v) {
        const auto oid = O.id[v];
        if (tot[oid] == 0) continue;
        const u128 num = units * tot[oid];
        if (num % O.size[oid] != 0) throw std::logic_error("orbit average is not integral");
        d.counts[v] += num / O.size[oid];
      }
    }
  }
  return d;
}

Dense component_histogram_uncached(const QuadPoly& g, bool invariant, int k) {
  bool linear = false;
  for (const auto& x : g.b) linear = linear || !x.is_zero();
  if (g.n() == 2 && invariant && !linear) return binary_form(g, k);
  return brute_force(g, k);
}

// Corpus sweeps meet the same small components over and over.
std::mutex component_mutex;

Dense component_histogram(const QuadPoly& g, bool invariant, int k) {
  static std::map<std::string, Dense> cache;
  const std::string key = g.field->describe() + "#" + std::to_string(k) + "#" + g.to_string();
  {
    std::lock_guard<std::mutex> lock(component_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Dense d = component_histogram_uncached(g, invariant, k);
  std::lock_guard<std::mutex> lock(component_mutex);
  if (cache.size() > 256) cache.clear();
  cache.emplace(key, d);
  return d;
}

// Convolution where both factors (hence the result) are constant on orbits:
// evaluate only at orbit representatives.
Dense convolve_invariant(const Dense& a, const Dense& b, const Residues& R, const Orbits& O) {
  Dense out{a.n + b.n, std::vector<u128>(R.size, 0)};
  std::vector<std::uint64_t> sa, sb;
  for (std::uint64_t u = 0; u < R.size; ++u) {
    if (a.counts[u]) sa.push_back(u);
    if (b.counts[u]) sb.push_back(u);
  }
  // Sum over the smaller support.
  const bool swap = sb.size() < sa.size();
  const Dense& x = swap ? b : a;
  const Dense& y = swap ? a : b;
  const auto& support = swap ? sb : sa;
  std::vector<u128> at_rep(O.rep.size(), 0);
  for (std::size_t o = 0; o < O.rep.size(); ++o) {
    const std::uint64_t w = O.rep[o];
    u128 s = 0;
    for (std::uint64_t u : support) s += x.counts[u] * y.counts[R.sub(w, u)];
    at_rep[o] = s;
  }
  for (std::uint64_t v = 0; v < R.size; ++v) out.counts[v] = at_rep[O.id[v]];
  return out;
}

Dense convolve_dense(const Dense& a, const Dense& b, const Residues& R) {
  double work = 0;
  std::uint64_t sa = 0, sb = 0;
  for (auto c : a.counts) sa += c != 0;
  for (auto c : b.counts) sb += c != 0;
  work = static_cast<double>(sa) * static_cast<double>(sb);
  if (work > 2e9) throw DomainError("convolution too large for the oracle");
  Dense out{a.n + b.n, std::vector<u128>(R.size, 0)};
  for (std::uint64_t u = 0; u < R.size; ++u) {
    if (!a.counts[u]) continue;
    for (std::uint64_t v = 0; v < R.size; ++v)
      if (b.counts[v]) out.counts[R.add(u, v)] += a.counts[u] * b.counts[v];
  }
  return out;
}

Dense histogram_without_constant(const QuadPoly& f, int k) {
  if (k > f.precision) throw DomainError("polynomial known only to precision " + std::to_string(f.precision));
  const FieldPtr& F = f.field;
  double dom = 1;
  for (int i = 0; i < f.n() * k; ++i) dom *= static_cast<double>(F->q());
  if (dom > 1e36) throw DomainError("domain too large for exact 128-bit counts");
  const Residues R(F, k);
  if (static_cast<double>(R.size) > kEnumerationLimit) throw DomainError("residue ring too large for the oracle");
  Dense acc{0, std::vector<u128>(R.size, 0)};
  acc.counts[0] = 1;
  const auto comps = components(f);
  bool all_invariant = true;
  for (const auto& c : comps) all_invariant = all_invariant && c.invariant;
  const Orbits* O = all_invariant && k > 0 ? &square_orbits(F, k) : nullptr;
  for (const auto& c : comps) {
    const Dense h = component_histogram(restrict(f, c.vars), c.invariant, k);
    if (acc.n == 0)
      acc = h;
    else
      acc = O ? convolve_invariant(acc, h, R, *O) : convolve_dense(acc, h, R);
  }
  return acc;
}

ValueHistogram to_histogram(const FieldPtr& F, int k, const Dense& d, const RingElem& shift) {
  const Residues R(F, k);
  const std::uint64_t s = shift.at(k).index();
  ValueHistogram h{F, k, d.n, std::vector<mpz_class>(R.size, 0)};
  for (std::uint64_t v = 0; v < R.size; ++v)
    if (d.counts[v]) h.counts[R.add(v, s)] = to_mpz(d.counts[v]);
  return h;
}

}  // namespace

mpz_class ValueHistogram::domain_size() const {
  mpz_class r = 1;
  for (int i = 0; i < n * k; ++i) r *= static_cast<long>(field->q());
  return r;
}

mpz_class ValueHistogram::total() const {
  mpz_class s = 0;
  for (const auto& c : counts) s += c;
  return s;
}

mpz_class ValueHistogram::zeros(int j) const {
  if (j > k) throw DomainError("zero count beyond the histogram level");
  mpz_class s = 0;
  for (std::uint64_t v = 0; v < counts.size(); ++v)
    if (counts[v] != 0 && RingElem::from_index(field, k, v).val() >= j) s += counts[v];
  mpz_class fibre = 1;
  for (int i = 0; i < n * (k - j); ++i) fibre *= static_cast<long>(field->q());
  return s / fibre;
}

ValueHistogram count_exhaustive(const QuadPoly& f, int k) {
  if (k > f.precision) throw DomainError("polynomial known only to precision " + std::to_string(f.precision));
  const Dense d = brute_force(restrict(f, [&] {
                                std::vector<int> all(f.n());
                                std::iota(all.begin(), all.end(), 0);
                                return all;
                              }()),
                              k);
  return to_histogram(f.field, k, d, f.c);
}

ValueHistogram convolve(const ValueHistogram& a, const ValueHistogram& b) {
  if (a.k != b.k || !a.field->same(*b.field)) throw DomainError("convolving histograms of different levels");
  const Residues R(a.field, a.k);
  ValueHistogram out{a.field, a.k, a.n + b.n, std::vector<mpz_class>(R.size, 0)};
  for (std::uint64_t u = 0; u < R.size; ++u) {
    if (a.counts[u] == 0) continue;
    for (std::uint64_t v = 0; v < R.size; ++v)
      if (b.counts[v] != 0) out.counts[R.add(u, v)] += a.counts[u] * b.counts[v];
  }
  return out;
}

ValueHistogram value_histogram(const QuadPoly& f, int k) {
  return to_histogram(f.field, k, histogram_without_constant(f, k), f.c);
}

std::vector<mpq_class> zeta_series_oracle(const QuadPoly& f, int K) {
  const Dense d = histogram_without_constant(f, K);
  const Residues R(f.field, K);
  const std::uint64_t shift = f.c.at(K).index();
  std::vector<u128> by_val(K + 1, 0);
  for (std::uint64_t v = 0; v < d.counts.size(); ++v)
    if (d.counts[v]) by_val[R.val(R.add(v, shift))] += d.counts[v];
  mpz_class dom = 1;
  for (int i = 0; i < f.n() * K; ++i) dom *= static_cast<long>(f.field->q());
  std::vector<mpq_class> out;
  for (int j = 0; j < K; ++j) {
    mpq_class x(to_mpz(by_val[j]), dom);
    x.canonicalize();
    out.push_back(x);
  }
  return out;
}

VerifyReport verify(const QuadPoly& f, const RationalFunction& Z, int K) {
  VerifyReport r;
  r.oracle_prefix = zeta_series_oracle(f, K);
  r.closed_form_prefix = Z.series_prefix(K);
  r.pass = true;
  for (int j = 0; j < K; ++j)
    if (r.oracle_prefix[j] != r.closed_form_prefix[j]) {
      r.pass = false;
      r.first_mismatch = j;
      break;
    }
  return r;
}

}  // namespace igusa
