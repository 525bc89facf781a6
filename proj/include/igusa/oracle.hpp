// Ground truth by counting: value histograms of polynomials over (R/p^k)^n
// and the truncated zeta series they determine. Nothing here uses the
// closed forms; the only reductions are splitting off variable-disjoint
// components and bijective changes of variables.
#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "igusa/padic.hpp"
#include "igusa/quadform.hpp"
#include "igusa/ratfunc.hpp"

namespace igusa {

struct ValueHistogram {
  FieldPtr field;
  int k = 0;
  int n = 0;                       // number of variables
  std::vector<mpz_class> counts;   // indexed by RingElem::index() at precision k

  mpz_class domain_size() const;   // q^{nk}
  mpz_class total() const;
  mpz_class count(const RingElem& v) const { return counts[v.at(k).index()]; }
  // Points with f = 0 mod p^j, j <= k, counted mod p^j.
  mpz_class zeros(int j) const;
  bool operator==(const ValueHistogram& o) const { return k == o.k && n == o.n && counts == o.counts; }
};

// Full enumeration; guarded at q^{nk} <= 1e8.
ValueHistogram count_exhaustive(const QuadPoly& f, int k);
// Additive convolution (histogram of a variable-disjoint sum).
ValueHistogram convolve(const ValueHistogram& a, const ValueHistogram& b);
// Histogram at level k via the component decomposition; handles forms far
// beyond the exhaustive guard when every block has at most two variables.
ValueHistogram value_histogram(const QuadPoly& f, int k);

// Vol(v(f) = j) for j < K.
std::vector<mpq_class> zeta_series_oracle(const QuadPoly& f, int K);

struct VerifyReport {
  bool pass = false;
  int first_mismatch = -1;
  std::vector<mpq_class> oracle_prefix;
  std::vector<mpq_class> closed_form_prefix;
};

VerifyReport verify(const QuadPoly& f, const RationalFunction& Z, int K);

}  // namespace igusa
