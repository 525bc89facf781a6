#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "igusa/commands.hpp"

namespace py = pybind11;
using namespace igusa;

namespace {

// Returns (json text, human text, status).
std::tuple<std::string, std::string, int> call(const std::string& command, const std::string& input, int K, int precision) {
  const QuadPoly Q = parse_polynomial(input, precision > 0 ? std::optional<int>(precision) : std::nullopt);
  Output out = run_command(command, Q, K);
  out.json["command"] = command;
  return {dump(out.json), out.text, out.status};
}

}  // namespace

PYBIND11_MODULE(_igusa, m) {
  m.doc() = "Igusa local zeta functions of quadratic polynomials over p-adic rings";
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  m.def("call", &call, py::arg("command"), py::arg("input"), py::arg("K") = 0, py::arg("precision") = 0,
        py::call_guard<py::gil_scoped_release>());
}
