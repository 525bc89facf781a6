#include "corpus.hpp"

#include <cmath>
#include <functional>

namespace igusa::checks {

namespace {

RingElem Z(const FieldPtr& F, std::int64_t a) { return RingElem::from_int(F, F->max_precision(), a); }

QuadPoly poly(const FieldPtr& F, std::vector<std::vector<std::int64_t>> m, std::vector<std::int64_t> b,
              std::int64_t c) {
  const int n = static_cast<int>(m.size());
  QuadPoly Q(F, F->max_precision(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Q.M[i][j] = Z(F, m[i][j]);
  for (int i = 0; i < n; ++i) Q.b[i] = Z(F, b[i]);
  Q.c = Z(F, c);
  return Q;
}

}  // namespace

std::vector<FieldPtr> head_fields() { return {Field::make(2), Field::make(2, 2), Field::make(3), Field::make(5)}; }

mpq_class pow_q(const FieldPtr& F, int e) {
  mpz_class r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<long>(F->q());
  return r;
}

double domain_size(const FieldPtr& F, int n, int k) { return std::pow(static_cast<double>(F->q()), n * k); }

std::vector<QuadPoly> small_polynomials(const FieldPtr& F) {
  const std::int64_t p = F->p();
  return {
      poly(F, {{1}}, {0}, 0),
      poly(F, {{p}}, {0}, 0),
      poly(F, {{0}}, {1}, 0),
      poly(F, {{1}}, {1}, 1),
      poly(F, {{0, 1}, {1, 0}}, {0, 0}, 0),
      poly(F, {{1, 0}, {0, p == 2 ? 3 : 2}}, {0, 0}, 0),
      poly(F, {{1, 1}, {1, 2}}, {0, p}, 0),
  };
}

QuadPoly direct_sum(const QuadPoly& a, const QuadPoly& b) {
  const int n = a.n() + b.n();
  const int k = std::min(a.precision, b.precision);
  QuadPoly Q(a.field, k, n);
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) Q.M[i][j] = a.M[i][j].at(k);
    Q.b[i] = a.b[i].at(k);
  }
  for (int i = 0; i < b.n(); ++i) {
    for (int j = 0; j < b.n(); ++j) Q.M[a.n() + i][a.n() + j] = b.M[i][j].at(k);
    Q.b[a.n() + i] = b.b[i].at(k);
  }
  Q.c = a.c.at(k) + b.c.at(k);
  return Q;
}

std::vector<JordanForm> pure_forms(const FieldPtr& F, int max_rank, int max_exponent) {
  const auto classes = unimodular_classes(F, max_rank);
  std::vector<JordanForm> out;
  std::function<void(int, int, JordanForm)> go = [&](int e, int rank, JordanForm J) {
    if (e > max_exponent) {
      out.push_back(J);
      return;
    }
    for (const auto& U : classes) {
      if (rank + U.rank() > max_rank) continue;
      JordanForm next = J;
      if (!U.is_zero()) next.blocks[e] = U;
      go(e + 1, rank + U.rank(), next);
    }
  };
  go(0, 0, JordanForm(F));
  return out;
}

std::vector<JordanForm> odd_dispatch_corpus(const FieldPtr& F) {
  const RingElem alpha = pick_nonsquare(F, F->max_precision());
  auto pi_pow = [&](int e, const RingElem& u) { return u.mul_p(e); };
  std::vector<JordanForm> out;
  for (const auto& P : pure_forms(F, 3, 2)) {
    const int top = std::max(P.max_exponent(), 0);
    auto with = [&](std::optional<int> lambda, const RingElem& c) {
      JordanForm J = P;
      J.lambda = lambda;
      J.c = c;
      out.push_back(J);
    };
    const RingElem zero(F, F->max_precision());
    with(std::nullopt, zero);
    with(top + 1, zero);
    with(top + 1, pi_pow(top + 1, alpha));
    with(1, pi_pow(2, Z(F, 1)));
    with(std::nullopt, Z(F, 1));
    with(std::nullopt, pi_pow(1, alpha));
    with(top + 2, pi_pow(top + 1, Z(F, 1)));
  }
  return out;
}

std::vector<JordanForm> two_dispatch_corpus(const FieldPtr& F) {
  std::vector<JordanForm> out;
  for (const auto& P : pure_forms(F, 3, 1))
    for (int lambda = -1; lambda <= 4; ++lambda) {
      JordanForm J = P;
      if (lambda >= 0) J.lambda = lambda;
      out.push_back(J);
    }
  return out;
}

std::vector<QuadPoly> reduction_corpus() {
  struct Case {
    std::int64_t p;
    std::vector<std::vector<std::int64_t>> m;
    std::vector<std::int64_t> b;
    std::int64_t c;
  };
  const std::vector<Case> coupled = {
      {2, {{1, 0, 0}, {0, 2, 0}, {0, 0, 4}}, {0, 0, 2}, 0},
      {2, {{1, 1, 0}, {1, 2, 1}, {0, 1, 4}}, {2, 0, 1}, 1},
      {2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 3}}, {4, 2, 0}, 2},
      {2, {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}}, {0, 0, 0}, 0},
      {2, {{1, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, {0, 2, 0, 4}, 0},
      {2, {{3, 1, 0, 0}, {1, 5, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 6}}, {4, 0, 0, 8}, 4},
      {3, {{1, 0, 0}, {0, 3, 0}, {0, 0, 0}}, {0, 0, 9}, 1},
      {3, {{1, 1, 0}, {1, 2, 3}, {0, 3, 6}}, {3, 0, 1}, 2},
      {3, {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}}, {0, 3, 0}, 0},
      {3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 9}}, {0, 0, 3}, 3},
      {5, {{2, 1}, {1, 3}}, {5, 0}, 1},
      {5, {{5, 1}, {1, 0}}, {0, 25}, 5},
  };
  std::vector<QuadPoly> out;
  for (const auto& cs : coupled) {
    out.push_back(poly(Field::make(cs.p), cs.m, cs.b, cs.c));
  }
  for (std::int64_t p : {2, 3}) {
    const FieldPtr F = Field::make(p);
    const std::vector<std::int64_t> e = {0, 1, p};
    for (auto a : e)
      for (auto b : e)
        for (auto c : e)
          for (auto u : e)
            for (auto v : e)
              for (std::int64_t k : {0, 1}) out.push_back(poly(F, {{a, b}, {b, c}}, {u, v}, k));
  }
  // Z_5 at level 5 costs 5^10 evaluations per polynomial: a thinner grid.
  const FieldPtr F5 = Field::make(5);
  for (std::int64_t a : {1, 5})
    for (std::int64_t b : {0, 1})
      for (std::int64_t c : {0, 1, 5})
        for (std::int64_t u : {0, 1, 5})
          for (std::int64_t v : {0, 5})
            for (std::int64_t k : {0, 1}) out.push_back(poly(F5, {{a, b}, {b, c}}, {u, v}, k));
  return out;
}

std::vector<JordanForm> assembled_corpus() {
  std::vector<JordanForm> out;
  for (const auto& F : {Field::make(3), Field::make(2), Field::make(2, 2)}) {
    const auto classes = unimodular_classes(F, 2);
    const std::vector<std::int64_t> constants = {0, 1, static_cast<std::int64_t>(F->p()),
                                                 static_cast<std::int64_t>(F->p() * F->p())};
    for (const auto& A : classes)
      for (const auto& B : classes) {
        if (A.rank() + B.rank() > 2 || (F->f() > 1 && A.rank() + B.rank() > 1)) continue;
        for (int lam = -1; lam <= 2; ++lam)
          for (auto c : constants) {
            if (lam >= 0 && F->f() > 1 && c != 0) continue;
            JordanForm J(F);
            if (!A.is_zero()) J.blocks[0] = A;
            if (!B.is_zero()) J.blocks[1] = B;
            if (lam >= 0) J.lambda = lam;
            J.c = Z(F, c);
            out.push_back(J);
          }
      }
  }
  return out;
}

}  // namespace igusa::checks
