#pragma once

#include <cstdint>
#include <vector>

#include "onebit/modulation.hpp"
#include "onebit/quantizer.hpp"
#include "onebit/types.hpp"

namespace onebit {

// Real reformulation of the per-user detection margins. Row r < K holds the
// coefficients of user r's margin along the lower sector edge, row K + r
// those along the upper edge, over the stacked signal [Re(x); Im(x)]. The
// margin vector is always m_matrix * x_stacked.
struct AlphaSystem {
  RMatrix m_matrix;  // 2K x 2N_t
  Index nt = 0;
  Index k = 0;
  double amplitude = 0.0;  // per-component magnitude once allocated

  RVector lambda(const RVector& x_stacked) const { return m_matrix * x_stacked; }
};

// Partial sign assignment plus the running margin sums of the assigned
// columns. temp_lambda always equals the matrix product restricted to
// allocated columns.
struct AllocationState {
  std::vector<std::uint8_t> allocated;  // per column of m_matrix
  RVector x;                            // 0 until allocated, then +-amplitude
  RVector temp_lambda;                  // length 2K

  Index allocated_count() const {
    Index n = 0;
    for (auto f : allocated) n += f;
    return n;
  }
};

// Sign rule for the forced single-column initialization when no column is
// sign-uniform. The literal rule always assigns +; the variant assigns the
// sign of the column sum.
enum class InitFallback { kAlwaysPlus, kColumnSumSign };

AlphaSystem build_alpha_matrix(const CMatrix& h, const CVector& s,
                               const PskConstellation& c);

// Assigns every column whose nonzero entries share one sign (zeros are
// wildcards; all-zero columns never qualify). If none qualifies, assigns
// only the column of largest 1-norm, signed per the fallback rule.
AllocationState init_stage(const AlphaSystem& sys,
                           InitFallback fallback = InitFallback::kAlwaysPlus);

// Residual columns signed to maximize the sum of all margins; separable,
// so each column independently follows the sign of its entry sum (zero
// sums break to +).
void allocate_summax(AllocationState& state, const AlphaSystem& sys);

// Residual columns assigned greedily: repeatedly find the row with the
// smallest running margin and allocate the unassigned column with the
// largest influence on that row, signed to increase it. Ties break to the
// lowest index.
void allocate_maxmin(AllocationState& state, const AlphaSystem& sys);

// One sequential pass over all columns; a sign flip is kept only when it
// strictly increases the smallest margin. lambda is maintained
// incrementally and stays consistent with m_matrix * x.
void refine(RVector& x, RVector& lambda, const AlphaSystem& sys);

enum class AllocationRule { kSumMax, kMaxMin, kBestOfBoth };

struct SymbolScalingResult {
  OneBitVector x;
  double min_lambda = 0.0;
  RVector lambda;
  bool summax_selected = true;
};

struct SymbolScalingOptions {
  InitFallback fallback = InitFallback::kAlwaysPlus;
  AllocationRule rule = AllocationRule::kBestOfBoth;
};

// Full pipeline: one initialization, the configured allocation rule(s),
// one refinement pass per candidate, best candidate by final smallest
// margin (ties prefer sum-max).
SymbolScalingResult symbol_scale(const CMatrix& h, const CVector& s,
                                 const PskConstellation& c,
                                 const SymbolScalingOptions& opts = {});

}  // namespace onebit
