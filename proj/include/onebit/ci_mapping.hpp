#pragma once

#include <stdexcept>

#include "onebit/lp_solver.hpp"
#include "onebit/modulation.hpp"
#include "onebit/quantizer.hpp"
#include "onebit/types.hpp"

namespace onebit {

struct LpSolveError : std::runtime_error {
  explicit LpSolveError(LpStatus s)
      : std::runtime_error(std::string("relaxed program not solved: ") +
                           to_string(s)),
        status(s) {}
  LpStatus status;
};

// Box relaxation of the margin-maximization design problem. Variables are
// z = [Re(x); Im(x); t] (2*N_t + 1 of them). Per user, the noiseless
// observation rotated into its symbol frame must lie inside the detection
// sector with margin t, which is two linear rows; signal components are
// boxed at the 1-bit amplitude and t is nonnegative. The instance is always
// feasible (z = 0).
LinearProgram build_relaxed_lp(const CMatrix& h, const CVector& s,
                               const PskConstellation& c);

struct CiMappingResult {
  OneBitVector x;
  double eta = 0.0;
  double t_relaxed = 0.0;
  CVector relaxed;  // solver output before the sign snap
  int lp_iterations = 0;
};

// Relaxation-normalization transmit mapping: solve the box relaxation,
// snap every component to the alphabet by sign, report the fraction of
// components the relaxation left strictly interior.
CiMappingResult ci_map_transmit(const CMatrix& h, const CVector& s,
                                const PskConstellation& c);

// Worst-user detection margin of a transmit vector: the smallest distance,
// across users, of the noiseless rotated observation from its sector
// boundary, normalized so the margin of the symbol itself is 1.
double ci_margin(const CMatrix& h, const CVector& s,
                 const PskConstellation& c, const CVector& x);

}  // namespace onebit
