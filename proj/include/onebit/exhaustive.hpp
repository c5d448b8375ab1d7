#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "onebit/ci_mapping.hpp"
#include "onebit/quantizer.hpp"
#include "onebit/symbol_scaling.hpp"
#include "onebit/types.hpp"

namespace onebit {

// Best alphabet vectors over full enumeration, by two routes that are
// algebraically equivalent but computed independently: the smallest entry
// of the transformed margin vector, and the worst-user sector margin of
// the complex transmit vector. Both argmaxes keep the first maximizer in
// enumeration order.
struct ExhaustiveResult {
  OneBitVector best_by_alpha;
  double best_min_alpha = 0.0;
  OneBitVector best_by_margin;
  double best_margin = 0.0;
};

// Enumerates all 4^nt alphabet vectors; nt is capped at 8.
inline ExhaustiveResult exhaustive_oracle(const CMatrix& h, const CVector& s,
                                          const PskConstellation& c) {
  const Index nt = h.cols();
  if (nt > 8) throw std::invalid_argument("exhaustive search capped at nt=8");
  const AlphaSystem sys = build_alpha_matrix(h, s, c);
  const double amp = sys.amplitude;

  ExhaustiveResult out;
  out.best_min_alpha = -std::numeric_limits<double>::infinity();
  out.best_margin = -std::numeric_limits<double>::infinity();

  RVector stacked(2 * nt);
  CVector x(nt);
  const std::uint64_t count = 1ULL << (2 * nt);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (Index i = 0; i < nt; ++i) {
      const double re = (mask >> (2 * i)) & 1 ? amp : -amp;
      const double im = (mask >> (2 * i + 1)) & 1 ? amp : -amp;
      stacked(i) = re;
      stacked(nt + i) = im;
      x(i) = Complex(re, im);
    }
    const double min_alpha = sys.lambda(stacked).minCoeff();
    if (min_alpha > out.best_min_alpha) {
      out.best_min_alpha = min_alpha;
      out.best_by_alpha.entries = x;
    }
    const double margin = ci_margin(h, s, c, x);
    if (margin > out.best_margin) {
      out.best_margin = margin;
      out.best_by_margin.entries = x;
    }
  }
  return out;
}

}  // namespace onebit
