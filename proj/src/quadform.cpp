#include "igusa/quadform.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace igusa {

namespace {

int full(const FieldPtr& F) { return F->max_precision(); }

RingElem one(const FieldPtr& F, int k) { return RingElem::from_int(F, k, 1); }

Matrix zero_matrix(const FieldPtr& F, int k, int n) { return Matrix(n, std::vector<RingElem>(n, RingElem(F, k))); }

void require_p2_precision(const RingElem& a) {
  if (a.precision() < 3) throw DomainError("square classes over p = 2 need precision >= 3");
}

}  // namespace

QuadPoly::QuadPoly(FieldPtr f, int k, int n) : field(std::move(f)), precision(k) {
  M = zero_matrix(field, k, n);
  b.assign(n, RingElem(field, k));
  c = RingElem(field, k);
}

void QuadPoly::validate() const {
  if (!field) throw DomainError("quadratic polynomial without a field");
  const int n = this->n();
  if (static_cast<int>(b.size()) != n) throw DomainError("linear part has the wrong length");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(M[i].size()) != n) throw DomainError("matrix is not square");
    for (int j = 0; j < n; ++j) {
      if (M[i][j].precision() != precision) throw DomainError("matrix entries must share one precision");
      if (M[i][j] != M[j][i]) throw DomainError("matrix is not symmetric");
    }
    if (b[i].precision() != precision) throw DomainError("linear entries must share the matrix precision");
  }
  if (c.precision() != precision) throw DomainError("constant must share the matrix precision");
}

RingElem QuadPoly::eval(const std::vector<RingElem>& x) const {
  const int n = this->n();
  const int k = x.empty() ? precision : x[0].precision();
  RingElem s = c.reduce(k);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    RingElem row = M[i][i].reduce(k) * x[i] + b[i].reduce(k);
    for (int j = i + 1; j < n; ++j) {
      if (M[i][j].is_zero()) continue;
      row += (M[i][j].reduce(k) * x[j]).scaled(2);
    }
    s += row * x[i];
  }
  return s;
}

bool QuadPoly::has_linear() const {
  for (const auto& x : b)
    if (!x.is_zero()) return true;
  return false;
}

std::string QuadPoly::to_string() const {
  std::ostringstream out;
  out << "M=[";
  for (int i = 0; i < n(); ++i) {
    out << (i ? "," : "") << "[";
    for (int j = 0; j < n(); ++j) out << (j ? "," : "") << M[i][j].to_string();
    out << "]";
  }
  out << "] b=[";
  for (int i = 0; i < n(); ++i) out << (i ? "," : "") << b[i].to_string();
  out << "] c=" << c.to_string();
  return out.str();
}

std::string norm_name(NormIdeal n) {
  switch (n) {
    case NormIdeal::Zero: return "0";
    case NormIdeal::Even: return "2R";
    default: return "R";
  }
}

UnimodularClass UnimodularClass::square(FieldPtr f, const RingElem& a) {
  UnimodularClass u(f);
  u.squares.push_back(canonical_square(a));
  return u;
}

UnimodularClass UnimodularClass::hyperbolic(FieldPtr f, int count) {
  UnimodularClass u(std::move(f));
  u.hyp = count;
  return u;
}

UnimodularClass UnimodularClass::elliptic(FieldPtr f) {
  UnimodularClass u(std::move(f));
  u.ell = true;
  return u;
}

NormIdeal UnimodularClass::norm() const {
  if (!squares.empty()) return NormIdeal::Full;
  if (rank() == 0) return NormIdeal::Zero;
  // For odd p, 2R = R.
  return field->p() == 2 ? NormIdeal::Even : NormIdeal::Full;
}

Matrix UnimodularClass::gram(int k) const {
  const int n = rank();
  Matrix G = zero_matrix(field, k, n);
  int pos = 0;
  for (const auto& a : squares) {
    G[pos][pos] = a.reduce(k);
    ++pos;
  }
  const bool two = field->p() == 2;
  auto plane = [&](bool elliptic) {
    if (two) {
      G[pos][pos + 1] = G[pos + 1][pos] = one(field, k);
      if (elliptic) {
        G[pos][pos] = RingElem::from_int(field, k, 2);
        G[pos + 1][pos + 1] = pick_xi(field, k).scaled(2);
      }
    } else {
      G[pos][pos] = one(field, k);
      G[pos + 1][pos + 1] = elliptic ? -pick_nonsquare(field, k) : -one(field, k);
    }
    pos += 2;
  };
  if (ell) plane(true);
  for (int i = 0; i < hyp; ++i) plane(false);
  return G;
}

RingElem UnimodularClass::disc() const {
  const int k = full(field);
  RingElem d = one(field, k);
  for (const auto& a : squares) d *= a;
  if (hyp % 2) d = -d;
  if (ell) {
    if (field->p() == 2)
      d *= pick_xi(field, k).scaled(4) - one(field, k);
    else
      d *= -pick_nonsquare(field, k);
  }
  return d;
}

int UnimodularClass::disc_eta() const { return eta(disc()); }

std::string UnimodularClass::to_string() const {
  if (is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& a : squares) parts.push_back("Sq(" + a.to_string() + ")");
  if (ell) parts.push_back("Ell");
  if (hyp == 1) parts.push_back("Hyp");
  if (hyp > 1) parts.push_back("Hyp^" + std::to_string(hyp));
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

bool UnimodularClass::operator==(const UnimodularClass& o) const {
  return hyp == o.hyp && ell == o.ell && squares == o.squares;
}

RingElem canonical_disc(const UnimodularClass& U) { return canonical_square(U.disc()); }

Invariants invariants(const UnimodularClass& U) { return {U.rank(), canonical_disc(U), U.norm()}; }

RingElem canonical_square(const RingElem& u) {
  const FieldPtr& F = u.field();
  const int k = full(F);
  if (!u.is_unit()) throw DomainError("square coefficient " + u.to_string() + " is not a unit");
  if (F->p() != 2) return is_square_unit(u) ? one(F, k) : pick_nonsquare(F, k);
  require_p2_precision(u);
  const RingElem a = u.reduce(3);
  const RingElem v = a / teichmuller(a);  // v = 1 mod 2, same class as a
  const RingElem w = (v - one(F, 3)).div_p(1);  // precision 2
  const RingElem tau = teichmuller(w.reduce(1).lift(2));
  const int eps = trace_parity((w - tau).div_p(1));
  RingElem rep = one(F, k) + teichmuller(w.reduce(1).lift(k)).scaled(2);
  if (eps) rep += pick_xi(F, k).scaled(4);
  // Keep the representative short: its class only depends on it mod 8.
  return rep.reduce(3).lift(k);
}

bool three_squares_split(const RingElem& a, const RingElem& b, const RingElem& c) {
  const FieldPtr& F = a.field();
  const RingElem a8 = a.reduce(3), b8 = b.reduce(3), c8 = c.reduce(3);
  const RingElem target = -(a8 * b8 * c8);
  const std::uint64_t n4 = ring_size(F, 2);
  auto values = [&](const RingElem& s) {
    std::vector<RingElem> out;
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < n4; ++i) {
      const RingElem r = RingElem::from_index(F, 2, i).lift(3);
      const RingElem v = s * r * r;
      if (seen.insert(v.index()).second) out.push_back(v);
    }
    return out;
  };
  const auto A = values(a8), B = values(b8), C = values(c8);
  std::unordered_set<std::uint64_t> cset;
  for (const auto& v : C) cset.insert(v.index());
  for (const auto& x : A)
    for (const auto& y : B)
      if (cset.count((target - x - y).index())) return true;
  return false;
}

namespace {

struct SplitKey {
  std::uint64_t a, b, c;
  bool operator<(const SplitKey& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
};

// Rule for three squares, cached per field description and triple.
std::pair<RingElem, bool> reduce_three(const RingElem& a, const RingElem& b, const RingElem& c) {
  static std::mutex mu;
  static std::map<std::pair<std::string, SplitKey>, bool> cache;
  const FieldPtr& F = a.field();
  std::array<std::uint64_t, 3> idx{a.reduce(3).index(), b.reduce(3).index(), c.reduce(3).index()};
  std::sort(idx.begin(), idx.end());
  const auto key = std::make_pair(F->describe(), SplitKey{idx[0], idx[1], idx[2]});
  bool split;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      split = it->second;
    } else {
      split = three_squares_split(a, b, c);
      cache[key] = split;
    }
  }
  const int k = full(F);
  RingElem d = -(a * b * c);
  if (!split) d *= one(F, k) + pick_xi(F, k).scaled(4);
  return {canonical_square(d), split};
}

void sort_squares(std::vector<RingElem>& s) {
  std::sort(s.begin(), s.end(), [](const RingElem& x, const RingElem& y) {
    return x.reduce(3).index() < y.reduce(3).index();
  });
}

UnimodularClass fold(UnimodularClass u) {
  const FieldPtr F = u.field;
  if (F->p() != 2) {
    // Rank and discriminant determine the class.
    const int r = u.rank();
    const int e = eta(u.disc());
    UnimodularClass out(F);
    if (r % 2) {
      // disc = (-1)^((r-1)/2) a
      const int sign = ((r - 1) / 2) % 2 ? -1 : 1;
      const int ea = e * (sign == -1 ? eta(-one(F, full(F))) : 1);
      out.squares.push_back(ea == 1 ? one(F, full(F)) : pick_nonsquare(F, full(F)));
      out.hyp = (r - 1) / 2;
    } else if (r > 0) {
      const int sign = (r / 2) % 2 ? -1 : 1;
      const int eh = sign == -1 ? eta(-one(F, full(F))) : 1;
      out.ell = e != eh;
      out.hyp = out.ell ? r / 2 - 1 : r / 2;
    }
    return out;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    sort_squares(u.squares);
    if (u.squares.size() >= 3) {
      const RingElem a = u.squares[0], b = u.squares[1], c = u.squares[2];
      auto [d, split] = reduce_three(a, b, c);
      u.squares.erase(u.squares.begin(), u.squares.begin() + 3);
      u.squares.push_back(d);
      if (split) {
        ++u.hyp;
      } else if (u.ell) {
        u.ell = false;
        u.hyp += 2;
      } else {
        u.ell = true;
      }
      changed = true;
    }
  }
  sort_squares(u.squares);
  return u;
}

}  // namespace

UnimodularClass add_forms(const UnimodularClass& a, const UnimodularClass& b) {
  if (!a.field) return b;
  if (!b.field) return a;
  if (!a.field->same(*b.field)) throw DomainError("adding forms over different fields");
  UnimodularClass u(a.field);
  u.hyp = a.hyp + b.hyp;
  if (a.ell && b.ell) {
    u.hyp += 2;
  } else {
    u.ell = a.ell || b.ell;
  }
  u.squares = a.squares;
  u.squares.insert(u.squares.end(), b.squares.begin(), b.squares.end());
  return fold(u);
}

bool equivalent(const UnimodularClass& a, const UnimodularClass& b) {
  if (a.rank() != b.rank() || a.norm() != b.norm()) return false;
  if (a.rank() == 0) return true;
  if (canonical_disc(a) != canonical_disc(b)) return false;
  if (a.field->p() != 2 || a.squares.size() != 2) return a == b;
  const UnimodularClass one_sq = UnimodularClass::square(a.field, one(a.field, full(a.field)));
  return add_forms(a, one_sq) == add_forms(b, one_sq);
}

std::vector<RingElem> square_class_reps(const FieldPtr& field) {
  const int k = full(field);
  if (field->p() != 2) return {one(field, k), pick_nonsquare(field, k)};
  std::set<RingElem> reps;
  for (std::uint64_t i = 0; i < ring_size(field, 3); ++i) {
    const RingElem u = RingElem::from_index(field, 3, i);
    if (u.is_unit()) reps.insert(canonical_square(u.lift(k)));
  }
  return {reps.begin(), reps.end()};
}

std::vector<UnimodularClass> unimodular_classes(const FieldPtr& field, int max_rank) {
  std::vector<UnimodularClass> out{UnimodularClass::zero(field)};
  const auto reps = square_class_reps(field);
  auto planes = [&](int rank, bool ell) {
    UnimodularClass u(field);
    u.ell = ell;
    u.hyp = rank / 2 - (ell ? 1 : 0);
    return u;
  };
  if (field->p() != 2) {
    for (int r = 1; r <= max_rank; ++r) {
      if (r % 2 == 0) {
        out.push_back(planes(r, false));
        out.push_back(planes(r, true));
      } else {
        for (const auto& a : reps) {
          UnimodularClass u = planes(r - 1, false);
          u.squares.push_back(a);
          out.push_back(u);
        }
      }
    }
    return out;
  }
  for (int r = 1; r <= max_rank; ++r) {
    if (r % 2 == 0) {
      out.push_back(planes(r, false));
      out.push_back(planes(r, true));
      for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i; j < reps.size(); ++j)
          for (bool ell : {false, true}) {
            if (r == 2 && ell) continue;
            UnimodularClass u = planes(r - 2, ell);
            u.squares = {reps[i], reps[j]};
            out.push_back(u);
          }
    } else {
      for (const auto& a : reps)
        for (bool ell : {false, true}) {
          if (r == 1 && ell) continue;
          UnimodularClass u = planes(r - 1, ell);
          u.squares = {a};
          out.push_back(u);
        }
    }
  }
  return out;
}

namespace {

// Elimination state shared by classification and the Jordan splitting.
struct Eliminator {
  FieldPtr F;
  int k;
  Matrix M, C;
  std::vector<RingElem> b;
  std::vector<bool> done;

  void row_add(int dst, int src, const RingElem& m) {  // row_dst += m row_src, then columns
    const int n = static_cast<int>(M.size());
    for (int j = 0; j < n; ++j) M[dst][j] += m * M[src][j];
    for (int j = 0; j < n; ++j) M[j][dst] += m * M[j][src];
    for (int j = 0; j < n; ++j) C[dst][j] += m * C[src][j];
    b[dst] += m * b[src];
  }

  void lower_precision(int k2) {
    if (k2 >= k) return;
    if (k2 < 1) throw DomainError("precision exhausted during Jordan splitting; raise the input precision");
    for (auto& row : M)
      for (auto& x : row) x = x.reduce(k2);
    for (auto& row : C)
      for (auto& x : row) x = x.reduce(k2);
    for (auto& x : b) x = x.reduce(k2);
    k = k2;
  }
};

// Multiplier a / u with v(a) >= v(u) = v, computed to full working precision.
RingElem quotient(const RingElem& a, const RingElem& u, int v) {
  const int k = a.precision();
  if (a.is_zero()) return RingElem(a.field(), k);
  return (a.div_p(v) * u.div_p(v).inverse()).lift(k);
}

}  // namespace

JordanSplit jordan_split(const QuadPoly& Q) {
  Q.validate();
  const FieldPtr F = Q.field;
  const int n = Q.n();
  Eliminator E{F, Q.precision, Q.M, zero_matrix(F, Q.precision, n), Q.b, std::vector<bool>(n, false)};
  for (int i = 0; i < n; ++i) E.C[i][i] = one(F, Q.precision);
  const bool two = F->p() == 2;
  std::vector<RawBlock> blocks;

  while (true) {
    int best = E.k, bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (E.done[i]) continue;
      for (int j = i; j < n; ++j) {
        if (E.done[j]) continue;
        const int v = E.M[i][j].val();
        // Prefer diagonal entries on ties.
        if (v < best || (v == best && v < E.k && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    if (bi != bj && !two) {
      E.row_add(bi, bj, one(F, E.k));
      bj = bi;
    }
    if (bi == bj) {
      const int v = best;
      const RingElem piv = E.M[bi][bi];
      for (int r = 0; r < n; ++r) {
        if (r == bi || E.done[r] || E.M[r][bi].is_zero()) continue;
        E.row_add(r, bi, -quotient(E.M[r][bi], piv, v));
      }
      E.done[bi] = true;
      blocks.push_back({v, {bi}, {{piv.div_p(v)}}});
      continue;
    }
    // 2x2 pivot on (bi, bj): off-diagonal strictly dominates both diagonals.
    const int v = best, i = bi, j = bj;
    const RingElem a = E.M[i][i], bb = E.M[i][j], cc = E.M[j][j];
    const RingElem det = a * cc - bb * bb;
    if (det.val() != 2 * v) throw DomainError("unexpected determinant valuation in 2x2 pivot");
    const RingElem det_unit_inv = det.div_p(2 * v).inverse();
    for (int r = 0; r < n; ++r) {
      if (r == i || r == j || E.done[r]) continue;
      const RingElem x = E.M[r][i], y = E.M[r][j];
      if (x.is_zero() && y.is_zero()) continue;
      // [x y] B^{-1} = [x c - y b, -x b + y a] / det
      const RingElem ni = x * cc - y * bb, nj = y * a - x * bb;
      const int kk = E.k;
      const RingElem mi = ni.is_zero() ? RingElem(F, kk) : (ni.div_p(2 * v) * det_unit_inv.lift(kk - 2 * v)).lift(kk);
      const RingElem mj = nj.is_zero() ? RingElem(F, kk) : (nj.div_p(2 * v) * det_unit_inv.lift(kk - 2 * v)).lift(kk);
      E.row_add(r, i, -mi);
      E.row_add(r, j, -mj);
    }
    // Multipliers were only known to k - 2v digits; rows they touched lose v digits.
    E.lower_precision(E.k - v);
    E.done[i] = E.done[j] = true;
    Matrix unit{{E.M[i][i].div_p(v), E.M[i][j].div_p(v)}, {E.M[j][i].div_p(v), E.M[j][j].div_p(v)}};
    blocks.push_back({v, {i, j}, unit});
  }

  JordanSplit out;
  out.precision = E.k;
  std::vector<int> radical;
  for (int i = 0; i < n; ++i)
    if (!E.done[i]) radical.push_back(i);
  // Blocks recorded before a precision drop carry more digits than the rest.
  for (auto& blk : blocks)
    for (auto& row : blk.unit)
      for (auto& x : row) x = x.reduce(std::min(x.precision(), E.k - blk.exponent));
  out.basis = E.C;
  out.transformed = E.M;
  out.linear = E.b;
  out.blocks = std::move(blocks);
  out.radical = std::move(radical);
  return out;
}

namespace {

UnimodularClass classify_raw(const FieldPtr& F, const RawBlock& blk) {
  if (blk.vars.size() == 1) {
    const RingElem u = blk.unit[0][0];
    if (F->p() == 2 && u.precision() < 3)
      throw DomainError("precision insufficient to classify a square coefficient over p = 2");
    return UnimodularClass::square(F, u);
  }
  const RingElem det = blk.unit[0][0] * blk.unit[1][1] - blk.unit[0][1] * blk.unit[0][1];
  if (det.precision() < 3) throw DomainError("precision insufficient to classify a plane over p = 2");
  return is_square_unit(-det) ? UnimodularClass::hyperbolic(F) : UnimodularClass::elliptic(F);
}

}  // namespace

UnimodularClass classify_unimodular(const FieldPtr& F, const Matrix& block) {
  const int n = static_cast<int>(block.size());
  if (n == 0) return UnimodularClass::zero(F);
  QuadPoly Q(F, block[0][0].precision(), n);
  Q.M = block;
  const JordanSplit J = jordan_split(Q);
  UnimodularClass u(F);
  if (!J.radical.empty()) throw DomainError("block is not unimodular (singular at the given precision)");
  for (const auto& blk : J.blocks) {
    if (blk.exponent != 0) throw DomainError("block is not unimodular");
    u = add_forms(u, classify_raw(F, blk));
  }
  return u;
}

std::vector<std::pair<int, UnimodularClass>> jordan_decompose(const QuadPoly& Q) {
  const JordanSplit J = jordan_split(Q);
  std::map<int, UnimodularClass> by_exp;
  for (const auto& blk : J.blocks) {
    auto it = by_exp.find(blk.exponent);
    UnimodularClass c = classify_raw(Q.field, blk);
    if (it == by_exp.end())
      by_exp.emplace(blk.exponent, c);
    else
      it->second = add_forms(it->second, c);
  }
  return {by_exp.begin(), by_exp.end()};
}

JordanForm::JordanForm(FieldPtr f) : field(std::move(f)) {
  if (field) c = RingElem(field, field->max_precision());
}

UnimodularClass JordanForm::block(int i) const {
  auto it = blocks.find(i);
  return it == blocks.end() ? UnimodularClass::zero(field) : it->second;
}

UnimodularClass JordanForm::folded(int j) const {
  UnimodularClass u = UnimodularClass::zero(field);
  for (int i = j % 2; i <= j; i += 2) {
    auto it = blocks.find(i);
    if (it != blocks.end()) u = add_forms(u, it->second);
  }
  return u;
}

int JordanForm::folded_rank(int j) const {
  int r = 0;
  for (const auto& [i, u] : blocks)
    if (i <= j && (j - i) % 2 == 0) r += u.rank();
  return r;
}

int JordanForm::q_paren_exponent(int j) const {
  int e = 0;
  for (int i = 0; i < j; ++i) e += folded_rank(i);
  return e;
}

int JordanForm::total_rank() const {
  int r = 0;
  for (const auto& [i, u] : blocks) r += u.rank();
  return r;
}

int JordanForm::max_exponent() const { return blocks.empty() ? -1 : blocks.rbegin()->first; }

bool JordanForm::standard() const { return !lambda || *lambda > max_exponent(); }

std::string JordanForm::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [i, u] : blocks) parts.push_back(u.to_string() + (i ? " @ pi^" + std::to_string(i) : ""));
  if (lambda) parts.push_back(*lambda ? "pi^" + std::to_string(*lambda) + " x" : "x");
  if (!c.is_zero()) parts.push_back("const " + c.to_string() + " (valuation " + std::to_string(c.val()) + ")");
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "\n" : "") + parts[i];
  return s;
}

Reduction reduce_standard(const QuadPoly& Q) {
  const FieldPtr F = Q.field;
  const bool two = F->p() == 2;
  const JordanSplit J = jordan_split(Q);
  const int k = J.precision;
  Reduction out{JordanForm(F), {}};
  std::vector<RingElem> linear;  // coefficients of variables that end up linear
  RingElem c = Q.c.reduce(k);
  std::vector<std::pair<int, UnimodularClass>> quadratic;

  for (const auto& blk : J.blocks) {
    std::vector<RingElem> ell;
    bool mixed = false;
    for (int v : blk.vars) {
      ell.push_back(J.linear[v].reduce(k));
      mixed = mixed || !ell.back().is_zero();
    }
    const UnimodularClass cls = classify_raw(F, blk);
    if (!mixed) {
      quadratic.emplace_back(blk.exponent, cls);
      continue;
    }
    if (two && F->f() > 1)
      throw DomainError("reduction of mixed linear/quadratic variables is only supported for p odd or Z_2");
    const int e = blk.exponent;
    const int v2 = e + F->ell();  // v(2 * block scale)
    if (blk.vars.size() == 1) {
      const RingElem a = J.transformed[blk.vars[0]][blk.vars[0]].reduce(k);
      const RingElem beta = ell[0];
      const int vb = beta.val();
      if (vb < e) {
        out.audit.push_back("a x^2 + b x with v(b) < v(a): replaced by b x");
        linear.push_back(beta);
      } else if (vb == e && two) {
        out.audit.push_back("a x^2 + b x with v(b) = v(a) over Z_2: replaced by 2 b x");
        linear.push_back(beta.scaled(2));
      } else {
        // beta = 2 a gamma; completing the square leaves -a gamma^2.
        const RingElem twoa = a.scaled(2);
        const RingElem gamma = quotient(beta, twoa, v2);
        c -= a * gamma * gamma;
        out.audit.push_back("a x^2 + b x with v(b) >= v(2a): completed the square");
        quadratic.emplace_back(e, cls);
      }
      continue;
    }
    // Plane block (p = 2): complete the square when the linear part lies in 2B R^2.
    const int i = blk.vars[0], j = blk.vars[1];
    const RingElem a = J.transformed[i][i].reduce(k), bb = J.transformed[i][j].reduce(k),
                   cc = J.transformed[j][j].reduce(k);
    const int vmin = std::min(ell[0].val(), ell[1].val());
    if (vmin >= v2) {
      // gamma = (2B)^{-1} l ; constant -gamma^T B gamma
      const RingElem det2 = (a * cc - bb * bb).scaled(4);
      const int vd = 2 * v2;
      const RingElem gi = quotient(cc.scaled(2) * ell[0] - bb.scaled(2) * ell[1], det2, vd);
      const RingElem gj = quotient(a.scaled(2) * ell[1] - bb.scaled(2) * ell[0], det2, vd);
      c -= a * gi * gi + (bb * gi * gj).scaled(2) + cc * gj * gj;
      out.audit.push_back("plane plus linear form: completed the square");
      quadratic.emplace_back(e, cls);
    } else {
      out.audit.push_back("plane plus linear form with small linear valuation: replaced by the linear form");
      linear.push_back(ell[0]);
      linear.push_back(ell[1]);
    }
  }
  for (int v : J.radical) linear.push_back(J.linear[v].reduce(k));

  std::optional<int> lambda;
  for (const auto& x : linear)
    if (!x.is_zero()) lambda = std::min(lambda.value_or(x.val()), x.val());
  if (lambda) out.audit.push_back("linear part collapsed to pi^" + std::to_string(*lambda) + " x");
  for (const auto& [e, cls] : quadratic) {
    if (lambda && e >= *lambda) {
      out.audit.push_back("dropped block at pi^" + std::to_string(e) + " dominated by the linear term");
      continue;
    }
    auto it = out.form.blocks.find(e);
    if (it == out.form.blocks.end())
      out.form.blocks.emplace(e, cls);
    else
      it->second = add_forms(it->second, cls);
  }
  if (lambda && !c.is_zero() && c.val() >= *lambda) {
    out.audit.push_back("constant absorbed by the linear term");
    c = RingElem(F, k);
  }
  out.form.lambda = lambda;
  out.form.c = c.lift(F->max_precision());
  for (auto it = out.form.blocks.begin(); it != out.form.blocks.end();)
    it = it->second.is_zero() ? out.form.blocks.erase(it) : std::next(it);
  return out;
}

QuadPoly realize(const JordanForm& J, int precision) {
  const FieldPtr F = J.field;
  int n = J.lambda ? 1 : 0;
  for (const auto& [e, u] : J.blocks) n += u.rank();
  QuadPoly Q(F, precision, n);
  int pos = 0;
  for (const auto& [e, u] : J.blocks) {
    const Matrix G = u.gram(precision);
    for (int i = 0; i < u.rank(); ++i)
      for (int j = 0; j < u.rank(); ++j) Q.M[pos + i][pos + j] = G[i][j].mul_p(e);
    pos += u.rank();
  }
  if (J.lambda) Q.b[pos] = one(F, precision).mul_p(*J.lambda);
  Q.c = J.c.reduce(std::min(precision, J.c.precision())).lift(precision);
  return Q;
}

}  // namespace igusa
