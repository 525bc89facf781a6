#include <map>

#include "checks.hpp"
#include "corpus.hpp"
#include "igusa/genfun.hpp"
#include "igusa/oracle.hpp"

namespace igusa::checks {

namespace {

RingElem Z(const FieldPtr& F, std::int64_t a) { return RingElem::from_int(F, F->max_precision(), a); }

std::string where(const FieldPtr& F, const std::string& what) { return F->describe() + ": " + what; }

// Zeta coefficients of an element straight from its coset masses:
// Vol(U_k) - Vol(U_{k+1}) with Vol(U_k) the mass of project(F, k) at 0.
std::vector<mpq_class> series_by_projection(const CosetCombination& F, int K) {
  std::vector<mpq_class> vol;
  for (int k = 0; k <= K; ++k) vol.push_back(project(F, k).at(RingElem(F.field(), k)));
  std::vector<mpq_class> out;
  for (int k = 0; k < K; ++k) out.push_back(vol[k] - vol[k + 1]);
  return out;
}

// A few combinations per field used by the algebraic identities.
std::vector<CosetCombination> sample_combinations(const FieldPtr& F) {
  std::vector<CosetCombination> out;
  for (const auto& Q : unimodular_classes(F, 2))
    if (!Q.is_zero()) out.push_back(head_unimodular(Q));
  out.push_back(CosetCombination::coset(Z(F, 1), 2, mpq_class(1, 2)) + CosetCombination::ideal(F, 1, 3));
  out.push_back(CosetCombination::point(Z(F, F->p())) - CosetCombination::coset(Z(F, 1), 1));
  out.push_back(uniformized_gf(UnimodularClass::hyperbolic(F), 4));
  return out;
}

}  // namespace

Report check_closed_form_heads() {
  Report rep;
  for (const auto& F : head_fields()) {
    for (const auto& Q : unimodular_classes(F, 4)) {
      const CosetCombination h = head_unimodular(Q);
      rep.expect(h.mass() == 1 - 1 / pow_q(F, Q.rank()), where(F, "head mass of " + Q.to_string()));
      if (Q.is_zero()) continue;
      rep.expect(h.is_uniform(2 * F->ell() + 1), where(F, "head not uniform for " + Q.to_string()));
      rep.expect(same_element(h, head_closed_form(Q)), where(F, "closed-form head of " + Q.to_string()));
    }
    if (F->p() == 2) {
      // Two special cases must agree with their general relatives.
      const auto reps = square_class_reps(F);
      for (const auto& a : reps) {
        rep.expect(same_element(head_square_planes_two(F, a, 1, 1), head_square_two(F, a)),
                   where(F, "one-square head, a = " + a.to_string()));
        for (const auto& b : reps)
          rep.expect(same_element(head_two_squares_planes(F, a, b, 2, 1), head_two_squares(F, a, b)),
                     where(F, "two-square head, a, b = " + a.to_string() + ", " + b.to_string()));
      }
    } else {
      for (const auto& a : square_class_reps(F))
        rep.expect(same_element(head_square_odd(F, a), head_odd_rank_odd(F, 1, a)),
                   where(F, "rank one head, a = " + a.to_string()));
    }
  }
  return rep;
}

Report check_calculus_properties() {
  Report rep;
  // Sum-product and projection compatibility on modular generating functions.
  for (long p : {2L, 3L, 5L}) {
    const FieldPtr F = Field::make(p);
    const auto corpus = small_polynomials(F);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const QuadPoly& f = corpus[i];
      for (int k = 1; k <= 4; ++k) {
        if (domain_size(F, f.n(), k) > 2000000) break;
        const ModularGF g = modular_gf(f, k);
        for (int j = 0; j < k; ++j)
          rep.expect(g.project(j) == modular_gf(f, j), where(F, "projection of " + f.to_string()));
      }
      for (std::size_t j = i; j < corpus.size(); ++j) {
        const QuadPoly sum = direct_sum(f, corpus[j]);
        for (int k = 1; k <= 4; ++k) {
          if (domain_size(F, sum.n(), k) > 2000000) break;
          rep.expect(modular_gf(sum, k) == gr_mul(modular_gf(f, k), modular_gf(corpus[j], k)),
                     where(F, "sum-product for " + sum.to_string() + " at level " + std::to_string(k)));
        }
      }
    }
  }

  for (const auto& F : head_fields()) {
    const auto samples = sample_combinations(F);
    const CosetCombination zR = CosetCombination::ideal(F, 0);
    for (const auto& A : samples) {
      // z^R absorbs everything.
      rep.expect(coalesce(A * zR) == CosetCombination::ideal(F, 0, A.mass()), where(F, "z^R absorption"));
      // Uniform factors see only the uniformization of the other factor.
      const int i = std::max(A.max_level(), 0);
      if (!A.has_points())
        for (const auto& B : samples)
          for (int j = i; j <= i + 2; ++j)
            rep.expect(same_element(A * B, A * uniformize(B, j)), where(F, "uniform product at level " + std::to_string(j)));
      // Scaling multiplies the zeta function by t^{v(s)}.
      const RationalFunction base = ig(A);
      for (int v = 0; v <= 2; ++v)
        rep.expect(ig(scale(A, Z(F, 1).mul_p(v))) == RationalFunction::monomial(1, v) * base,
                   where(F, "ig of scaled element, v = " + std::to_string(v)));
      rep.expect(ig(scale(A, RingElem(F, F->max_precision()))).is_zero(), where(F, "ig of F(z^0)"));
      // ig agrees with the coefficients read off the coset masses.
      if (!A.has_points()) {
        const int K = std::max(A.max_level(), 0) + 3;
        rep.expect(ig(A).series_prefix(K) == series_by_projection(A, K), where(F, "ig against projections"));
      }
    }
    // Single cosets, every representative at levels 0..2.
    for (int j = 0; j <= 2; ++j)
      for (std::uint64_t idx = 0; idx < ring_size(F, j); ++idx) {
        const auto C = CosetCombination::coset(RingElem::from_index(F, j, idx), j);
        rep.expect(ig(C).series_prefix(j + 4) == series_by_projection(C, j + 4), where(F, "ig of a single coset"));
      }
  }
  return rep;
}

Report check_head_recursion(int K) {
  Report rep;
  for (const auto& F : head_fields()) {
    for (const auto& Q : unimodular_classes(F, 3)) {
      if (Q.is_zero()) continue;
      const RationalFunction den(Poly{1, 0, -1 / pow_q(F, Q.rank())});
      const RationalFunction z = ig(head_unimodular(Q)) / den;
      JordanForm J(F);
      J.blocks[0] = Q;
      rep.expect(z.series_prefix(K) == zeta_series_oracle(realize(J, F->max_precision()), K),
                 where(F, "head recursion for " + Q.to_string()));
    }
  }
  return rep;
}

Report check_assembled_gf() {
  Report rep;
  for (const auto& J : assembled_corpus()) {
    const FieldPtr& F = J.field;
    const AssembledGF A = assemble_gf(J);
    const int n = J.total_rank() + (J.lambda ? 1 : 0);
    for (int K = 1; K <= 5; ++K) {
      if (domain_size(F, n, K) > 400000) break;
      const QuadPoly f = realize(J, F->max_precision());
      rep.expect(project(A.uniformized(K), K) == modular_gf(f, K),
                 where(F, "assembled generating function of " + J.to_string() + " at level " + std::to_string(K)));
    }
  }
  return rep;
}

}  // namespace igusa::checks
