#pragma once

#include "fbplan/common.hpp"

namespace fbplan {

/// min 0.5 z'Gz + g'z  subject to  A z <= b, with G symmetric positive definite.
struct QpProblem {
  Mat G;
  Vec g;
  Mat A;
  Vec b;
};

enum class QpStatus { Optimal, IterationLimit };

struct QpResult {
  Vec z;
  Vec multipliers;  // one per row of A, zero for inactive rows
  QpStatus status = QpStatus::Optimal;
  int iterations = 0;
};

/// Primal active-set method started from a feasible `z0`. Every iterate stays
/// feasible, so the result is usable even at the iteration limit.
/// Throws InvalidArgument when G is not positive definite.
QpResult solve_qp(const QpProblem& qp, const Vec& z0, int max_iterations = 0);

}  // namespace fbplan
