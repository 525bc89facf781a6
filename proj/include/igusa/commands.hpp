// The operations behind the command-line tool and the Python module.
#pragma once

#include <string>

#include "igusa/io.hpp"

namespace igusa {

struct Output {
  std::string text;  // human-readable, newline terminated
  Json json;
  int status = 0;    // 2 when verification fails
};

// K = 0 means no series / projection; verify then counts 8 terms.
Output run_classify(const QuadPoly& Q);
Output run_reduce(const QuadPoly& Q);
Output run_zeta(const QuadPoly& Q, int K = 0);
Output run_poles(const QuadPoly& Q);
Output run_poincare(const QuadPoly& Q, int K = 0);
Output run_gf(const QuadPoly& Q, int K = 0);
Output run_verify(const QuadPoly& Q, int K = 8);
Output run_command(const std::string& command, const QuadPoly& Q, int K = 0);

}  // namespace igusa
