// JSON input schema and canonical rendering shared by the CLI and the Python module.
//
// Input: {"p": "3", "f": "1", "modulus": [...], "precision": "8",
//         "matrix": [["1","0"],["0","3"]], "linear": ["0","1"], "constant": "0"}
// Entries are integer or p-integral rational strings; over GR(p^k, f) an entry
// may also be a list of f coefficient strings. Output numbers are strings.
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "igusa/genfun.hpp"
#include "igusa/oracle.hpp"
#include "igusa/quadform.hpp"
#include "igusa/ratfunc.hpp"
#include "igusa/zeta.hpp"

namespace igusa {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

QuadPoly parse_polynomial(const Json& j, std::optional<int> precision = std::nullopt);
QuadPoly parse_polynomial(const std::string& text, std::optional<int> precision = std::nullopt);

Json to_json(const mpq_class& c);
Json to_json(const Poly& p);  // [["num","den"], ...], constant term first
Json to_json(const RationalFunction& r);
Json to_json(const DenominatorShape& s);
Json to_json(const JordanForm& J);
Json to_json(const ZetaResult& z, int series_terms = 0);
Json to_json(const VerifyReport& v);

mpq_class rational_from_json(const Json& j);
Poly poly_from_json(const Json& j);
RationalFunction rational_function_from_json(const Json& j);

// Canonical text: two-space indent, sorted keys.
std::string dump(const Json& j);

// Lines "class @ pi^i" (no suffix at exponent 0).
std::string render_blocks(const std::vector<std::pair<int, UnimodularClass>>& blocks);

}  // namespace igusa
