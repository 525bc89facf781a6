#include "igusa/commands.hpp"

#include <cmath>
#include <sstream>

namespace igusa {

namespace {

std::string join_series(const std::vector<mpq_class>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + render_rational(s[i]);
  return out;
}

Json series_json(const std::vector<mpq_class>& s) {
  Json out = Json::array();
  for (const auto& c : s) out.push_back(to_json(c));
  return out;
}

std::string indent_lines(const std::string& s, const std::string& prefix) {
  std::string out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out += prefix + line + "\n";
  return out;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

Output run_classify(const QuadPoly& Q) {
  const auto blocks = jordan_decompose(Q);
  Json arr = Json::array();
  for (const auto& [i, u] : blocks) arr.push_back({{"exponent", std::to_string(i)}, {"class", u.to_string()}});
  return {render_blocks(blocks), Json{{"field", Q.field->describe()}, {"blocks", arr}}};
}

Output run_reduce(const QuadPoly& Q) {
  const Reduction red = reduce_standard(Q);
  std::string text = red.form.to_string() + "\n";
  for (const auto& a : red.audit) text += "# " + a + "\n";
  return {text, Json{{"form", to_json(red.form)}, {"audit", red.audit}}};
}

Output run_zeta(const QuadPoly& Q, int K) {
  const ZetaResult z = zeta(reduce_standard(Q).form);
  std::string text = z.zf.to_string() + "\n";
  text += "dispatch: " + z.dispatch + "\n";
  text += "denominator: " + z.shape.to_string() + "\n";
  text += "form:\n" + indent_lines(z.form, "  ");
  if (z.degenerate) text += "degenerate: the polynomial is identically zero\n";
  if (K > 0) text += "series: " + join_series(z.zf.series_prefix(K)) + "\n";
  return {text, to_json(z, K)};
}

Output run_poles(const QuadPoly& Q) {
  const JordanForm J = reduce_standard(Q).form;
  const long q = J.field->q();
  Poly g;
  std::string source;
  if (J.field->p() == 2) {
    if (J.lambda || !J.c.is_zero()) throw DomainError("poles needs a pure quadratic form");
    g = zeta_2unramified(J).zf.den();
    source = "reduced denominator of the closed form";
  } else {
    g = poles_odd(J);
    source = "pole classification";
  }
  const DenominatorShape shape = denominator_shape(g, q);
  const std::string text = render_poly(g) + "\nfactored: " + shape.to_string() + "\nsource: " + source + "\n";
  return {text, Json{{"denominator", to_json(g)}, {"text", render_poly(g)}, {"shape", to_json(shape)}, {"source", source}}};
}

Output run_poincare(const QuadPoly& Q, int K) {
  const ZetaResult z = zeta(reduce_standard(Q).form);
  const RationalFunction P = poincare_from_zeta(z.zf);
  std::string text = P.to_string() + "\n";
  Json j{{"poincare", to_json(P)}, {"zeta", to_json(z.zf)}};
  if (K > 0) {
    const auto s = P.series_prefix(K);
    text += "series: " + join_series(s) + "\n";
    j["series"] = series_json(s);
  }
  return {text, j};
}

Output run_gf(const QuadPoly& Q, int K) {
  const JordanForm J = reduce_standard(Q).form;
  const AssembledGF A = assemble_gf(J);
  std::string text = "body:\n" + indent_lines(A.body.to_string(), "  ");
  Json j{{"body", lines_of(A.body.to_string())}};
  if (A.has_tail) {
    std::ostringstream tail;
    tail << render_rational(A.tail_coeff) << " * z^{" << A.c.to_string() << "} * G[" << A.tail_a.to_string()
         << "](z^{p^" << A.tail_shift << "}) * G[" << A.tail_b.to_string() << "](z^{p^" << A.tail_shift + 1 << "})";
    text += "tail:\n  " + tail.str() + "\n";
    j["tail"] = tail.str();
  } else {
    j["tail"] = nullptr;
  }
  if (K > 0) {
    if (std::pow(double(Q.field->q()), K) > 1e6)
      throw DomainError("gf --K: the projection to R/p^K has more than 10^6 values");
    const ModularGF g = project(A.uniformized(K), K);
    text += "modulo p^" + std::to_string(K) + ":\n" + indent_lines(g.to_string(), "  ");
    j["modular"] = lines_of(g.to_string());
    j["level"] = std::to_string(K);
  }
  return {text, j};
}

Output run_verify(const QuadPoly& Q, int K) {
  if (K <= 0) K = 8;
  const JordanForm J = reduce_standard(Q).form;
  const ZetaResult z = zeta(J);
  VerifyReport v;
  std::string counted = "input";
  try {
    v = verify(Q, z.zf, K);
  } catch (const DomainError&) {
    // Coupled inputs beyond the enumeration guard: count the standard form instead.
    v = verify(realize(J, Q.field->max_precision()), z.zf, K);
    counted = "standard form";
  }
  Json j = to_json(v);
  j["counted"] = counted;
  std::string text = std::string(v.pass ? "PASS" : "FAIL") + "\n";
  if (!v.pass) text += "first mismatch: " + std::to_string(v.first_mismatch) + "\n";
  text += "counted: " + counted + "\n";
  text += "oracle:      " + join_series(v.oracle_prefix) + "\n";
  text += "closed form: " + join_series(v.closed_form_prefix) + "\n";
  return {text, j, v.pass ? 0 : 2};
}


Output run_command(const std::string& command, const QuadPoly& Q, int K) {
  if (command == "classify") return run_classify(Q);
  if (command == "reduce") return run_reduce(Q);
  if (command == "zeta") return run_zeta(Q, K);
  if (command == "poles") return run_poles(Q);
  if (command == "poincare") return run_poincare(Q, K);
  if (command == "gf") return run_gf(Q, K);
  if (command == "verify") return run_verify(Q, K);
  throw ParseError("unknown command " + command);
}

}  // namespace igusa
