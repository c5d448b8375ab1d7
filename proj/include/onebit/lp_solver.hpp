#pragma once

#include <limits>

#include "onebit/types.hpp"

namespace onebit {

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

// Dense inequality-form linear program:
//   maximize objective . z
//   subject to ineq_a * z <= ineq_b and lower <= z <= upper.
// Box entries may be +-infinity; ineq_a may have zero rows. Variables fixed
// by lower == upper are not supported.
struct LinearProgram {
  RVector objective;
  RMatrix ineq_a;
  RVector ineq_b;
  RVector lower;
  RVector upper;

  Index num_vars() const { return objective.size(); }
  Index num_rows() const { return ineq_a.rows(); }
  bool well_formed() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  RVector z;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  // Scaled measures at termination; both < 1e-8 when status is optimal.
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double relative_gap = std::numeric_limits<double>::quiet_NaN();
};

// Primal-dual predictor-corrector interior-point solve. Deterministic:
// identical instances produce identical solutions. Infeasibility and
// unboundedness are reported through certificates in the status field;
// exceeding the iteration cap reports numerical failure.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace onebit
