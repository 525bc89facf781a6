#include "igusa/io.hpp"

#include <algorithm>

namespace igusa {

namespace {

std::int64_t small_int(const Json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw ParseError("");
      return v;
    }
  } catch (const std::exception&) {
  }
  throw ParseError(what + " must be an integer string, got " + j.dump());
}

mpq_class parse_rational(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
    throw ParseError(what + " is not an integer or rational: \"" + s + "\"");
  mpq_class x;
  try {
    x = mpq_class(s[0] == '+' ? s.substr(1) : s, 10);
  } catch (const std::exception&) {
    throw ParseError(what + " is not an integer or rational: \"" + s + "\"");
  }
  if (x.get_den() == 0) throw ParseError(what + " has zero denominator");
  x.canonicalize();
  return x;
}

RingElem parse_entry(const FieldPtr& F, int k, const Json& j, const std::string& what) {
  if (j.is_array()) {
    std::vector<std::int64_t> c;
    for (const auto& x : j) c.push_back(small_int(x, what));
    return RingElem::from_coeffs(F, k, c);
  }
  if (j.is_number_integer()) return RingElem::from_int(F, k, j.get<std::int64_t>());
  if (!j.is_string()) throw ParseError(what + " must be a string, got " + j.dump());
  return RingElem::from_rational(F, k, parse_rational(j.get<std::string>(), what));
}

}  // namespace

QuadPoly parse_polynomial(const Json& j, std::optional<int> precision) {
  if (!j.is_object()) throw ParseError("input must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    static const std::vector<std::string> known = {"p", "f", "modulus", "precision", "matrix", "linear", "constant"};
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ParseError("unknown field \"" + key + "\"");
  }
  if (!j.contains("p")) throw ParseError("missing field \"p\"");
  const std::int64_t p = small_int(j["p"], "p");
  const int f = j.contains("f") ? static_cast<int>(small_int(j["f"], "f")) : 1;
  std::vector<std::int64_t> modulus;
  if (j.contains("modulus")) {
    if (!j["modulus"].is_array()) throw ParseError("modulus must be a list");
    for (const auto& x : j["modulus"]) modulus.push_back(small_int(x, "modulus coefficient"));
  }
  const FieldPtr F = Field::make(p, f, modulus);
  int k = F->max_precision();
  if (j.contains("precision")) k = static_cast<int>(small_int(j["precision"], "precision"));
  if (precision) k = *precision;
  if (k < 1 || k > F->max_precision())
    throw DomainError("precision must lie in 1.." + std::to_string(F->max_precision()) + " for " + F->describe());

  const Json matrix = j.contains("matrix") ? j["matrix"] : Json::array();
  if (!matrix.is_array()) throw ParseError("matrix must be a list of rows");
  const int n = static_cast<int>(matrix.size());
  QuadPoly Q(F, k, n);
  for (int r = 0; r < n; ++r) {
    if (!matrix[r].is_array() || static_cast<int>(matrix[r].size()) != n) throw ParseError("matrix must be square");
    for (int c = 0; c < n; ++c)
      Q.M[r][c] = parse_entry(F, k, matrix[r][c], "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  if (j.contains("linear")) {
    const Json& lin = j["linear"];
    if (!lin.is_array() || static_cast<int>(lin.size()) != n)
      throw ParseError("linear must have one entry per variable");
    for (int i = 0; i < n; ++i) Q.b[i] = parse_entry(F, k, lin[i], "linear[" + std::to_string(i) + "]");
  }
  if (j.contains("constant")) Q.c = parse_entry(F, k, j["constant"], "constant");
  Q.validate();
  return Q;
}

QuadPoly parse_polynomial(const std::string& text, std::optional<int> precision) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_polynomial(j, precision);
}

Json to_json(const mpq_class& c) { return Json::array({c.get_num().get_str(), c.get_den().get_str()}); }

Json to_json(const Poly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

Json to_json(const RationalFunction& r) {
  return Json{{"text", r.to_string()}, {"num", to_json(r.num())}, {"den", to_json(r.den())}};
}

Json to_json(const DenominatorShape& s) {
  Json factors = Json::array();
  for (const auto& f : s.factors) {
    const char* kind = f.kind == DenominatorFactor::OneMinusT   ? "1 - t/q^e"
                       : f.kind == DenominatorFactor::OnePlusT ? "1 + t/q^e"
                                                               : "1 - t^2/q^e";
    factors.push_back(
        {{"kind", kind}, {"exponent", std::to_string(f.exponent)}, {"multiplicity", std::to_string(f.multiplicity)}});
  }
  return Json{{"text", s.to_string()}, {"factors", factors}, {"residual", to_json(s.residual)}};
}

Json to_json(const JordanForm& J) {
  Json blocks = Json::array();
  for (const auto& [i, u] : J.blocks) blocks.push_back({{"exponent", std::to_string(i)}, {"class", u.to_string()}});
  Json out{{"field", J.field->describe()}, {"blocks", blocks}};
  out["lambda"] = J.lambda ? Json(std::to_string(*J.lambda)) : Json(nullptr);
  out["constant"] = J.c.to_string();
  return out;
}

Json to_json(const ZetaResult& z, int series_terms) {
  Json out{{"zeta", to_json(z.zf)},
           {"denominator", to_json(z.shape)},
           {"field", z.field},
           {"form", z.form},
           {"dispatch", z.dispatch},
           {"degenerate", z.degenerate}};
  if (series_terms > 0) {
    Json s = Json::array();
    for (const auto& c : z.zf.series_prefix(series_terms)) s.push_back(to_json(c));
    out["series"] = s;
  }
  return out;
}

Json to_json(const VerifyReport& v) {
  Json o = Json::array(), c = Json::array();
  for (const auto& x : v.oracle_prefix) o.push_back(to_json(x));
  for (const auto& x : v.closed_form_prefix) c.push_back(to_json(x));
  return Json{{"status", v.pass ? "PASS" : "FAIL"},
              {"first_mismatch", v.first_mismatch < 0 ? Json(nullptr) : Json(std::to_string(v.first_mismatch))},
              {"oracle_prefix", o},
              {"closed_form_prefix", c}};
}

mpq_class rational_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw ParseError("a rational is a pair of integer strings, got " + j.dump());
  const mpq_class n = parse_rational(j[0].get<std::string>(), "numerator");
  const mpq_class d = parse_rational(j[1].get<std::string>(), "denominator");
  if (n.get_den() != 1 || d.get_den() != 1 || d == 0) throw ParseError("bad rational " + j.dump());
  mpq_class x(n.get_num(), d.get_num());
  x.canonicalize();
  return x;
}

Poly poly_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("a polynomial is a list of coefficients");
  std::vector<mpq_class> c;
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return Poly(c);
}

RationalFunction rational_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) throw ParseError("expected {num, den}");
  return RationalFunction(poly_from_json(j["num"]), poly_from_json(j["den"]));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string render_blocks(const std::vector<std::pair<int, UnimodularClass>>& blocks) {
  if (blocks.empty()) return "0\n";
  std::string s;
  for (const auto& [i, u] : blocks) s += u.to_string() + (i ? " @ pi^" + std::to_string(i) : "") + "\n";
  return s;
}

}  // namespace igusa
