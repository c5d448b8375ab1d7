#include "onebit/symbol_scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

namespace {

double sign_or_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

void assign(AllocationState& state, const AlphaSystem& sys, Index col,
            double value) {
  state.x(col) = value;
  state.temp_lambda += sys.m_matrix.col(col) * value;
  state.allocated[static_cast<std::size_t>(col)] = 1;
}

}  // namespace

AlphaSystem build_alpha_matrix(const CMatrix& h, const CVector& s,
                               const PskConstellation& c) {
  if (h.rows() != s.size())
    throw std::invalid_argument("symbol count must match user count");
  const Index k = h.rows();
  const Index nt = h.cols();

  AlphaSystem sys;
  sys.nt = nt;
  sys.k = k;
  sys.amplitude = alphabet_amplitude(nt);
  sys.m_matrix.resize(2 * k, 2 * nt);

  const double theta = c.threshold_angle();
  const double scale = 1.0 / (2.0 * std::cos(theta));
  for (Index uk = 0; uk < k; ++uk) {
    if (std::abs(std::abs(s(uk)) - 1.0) > 1e-6)
      throw std::invalid_argument("symbols must be unit modulus");
    const double phi = std::arg(s(uk));
    // Sector-edge decomposition coefficients of this user's symbol.
    const double a = scale * std::cos(phi - theta);
    const double b = scale * std::sin(phi - theta);
    const double cc = scale * std::cos(phi + theta);
    const double d = scale * std::sin(phi + theta);
    const double det = a * d - b * cc;
    if (std::abs(det) < 1e-12)
      throw std::invalid_argument("degenerate sector bases");

    const RVector hr = h.row(uk).real().transpose();
    const RVector hi = h.row(uk).imag().transpose();
    sys.m_matrix.row(uk).segment(0, nt) =
        ((d * hr - cc * hi) / det).transpose();
    sys.m_matrix.row(uk).segment(nt, nt) =
        ((-d * hi - cc * hr) / det).transpose();
    sys.m_matrix.row(k + uk).segment(0, nt) =
        ((a * hi - b * hr) / det).transpose();
    sys.m_matrix.row(k + uk).segment(nt, nt) =
        ((a * hr + b * hi) / det).transpose();
  }
  return sys;
}

AllocationState init_stage(const AlphaSystem& sys, InitFallback fallback) {
  const Index cols = sys.m_matrix.cols();
  AllocationState state;
  state.allocated.assign(static_cast<std::size_t>(cols), 0);
  state.x = RVector::Zero(cols);
  state.temp_lambda = RVector::Zero(sys.m_matrix.rows());

  for (Index i = 0; i < cols; ++i) {
    int sign = 0;
    bool uniform = true;
    for (Index r = 0; r < sys.m_matrix.rows() && uniform; ++r) {
      const double v = sys.m_matrix(r, i);
      if (v == 0.0) continue;
      const int sv = v > 0.0 ? 1 : -1;
      if (sign == 0)
        sign = sv;
      else if (sign != sv)
        uniform = false;
    }
    if (uniform && sign != 0)
      assign(state, sys, i, sign * sys.amplitude);
  }

  if (state.allocated_count() == 0) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index i = 0; i < cols; ++i) {
      const double n1 = sys.m_matrix.col(i).lpNorm<1>();
      if (n1 > best_norm) {
        best_norm = n1;
        best = i;
      }
    }
    const double sign = fallback == InitFallback::kAlwaysPlus
                            ? 1.0
                            : sign_or_plus(sys.m_matrix.col(best).sum());
    assign(state, sys, best, sign * sys.amplitude);
  }
  return state;
}

void allocate_summax(AllocationState& state, const AlphaSystem& sys) {
  for (Index i = 0; i < sys.m_matrix.cols(); ++i) {
    if (state.allocated[static_cast<std::size_t>(i)]) continue;
    assign(state, sys, i,
           sign_or_plus(sys.m_matrix.col(i).sum()) * sys.amplitude);
  }
}

void allocate_maxmin(AllocationState& state, const AlphaSystem& sys) {
  const Index cols = sys.m_matrix.cols();
  Index remaining = cols - state.allocated_count();
  while (remaining > 0) {
    Index q = 0;
    for (Index r = 1; r < state.temp_lambda.size(); ++r)
      if (state.temp_lambda(r) < state.temp_lambda(q)) q = r;
    Index pick = -1;
    double best = -1.0;
    for (Index i = 0; i < cols; ++i) {
      if (state.allocated[static_cast<std::size_t>(i)]) continue;
      const double mag = std::abs(sys.m_matrix(q, i));
      if (mag > best) {
        best = mag;
        pick = i;
      }
    }
    assign(state, sys, pick,
           sign_or_plus(sys.m_matrix(q, pick)) * sys.amplitude);
    --remaining;
  }
}

void refine(RVector& x, RVector& lambda, const AlphaSystem& sys) {
  for (Index i = 0; i < x.size(); ++i) {
    const RVector flipped = lambda - 2.0 * x(i) * sys.m_matrix.col(i);
    if (flipped.minCoeff() > lambda.minCoeff()) {
      lambda = flipped;
      x(i) = -x(i);
    }
  }
}

SymbolScalingResult symbol_scale(const CMatrix& h, const CVector& s,
                                 const PskConstellation& c,
                                 const SymbolScalingOptions& opts) {
  const AlphaSystem sys = build_alpha_matrix(h, s, c);
  const AllocationState init = init_stage(sys, opts.fallback);

  auto run = [&](bool summax) {
    AllocationState st = init;
    if (summax)
      allocate_summax(st, sys);
    else
      allocate_maxmin(st, sys);
    refine(st.x, st.temp_lambda, sys);
    return st;
  };

  AllocationState best;
  bool summax_selected = true;
  switch (opts.rule) {
    case AllocationRule::kSumMax:
      best = run(true);
      break;
    case AllocationRule::kMaxMin:
      best = run(false);
      summax_selected = false;
      break;
    case AllocationRule::kBestOfBoth: {
      AllocationState sm = run(true);
      AllocationState mm = run(false);
      if (mm.temp_lambda.minCoeff() > sm.temp_lambda.minCoeff()) {
        best = std::move(mm);
        summax_selected = false;
      } else {
        best = std::move(sm);
      }
      break;
    }
  }

  SymbolScalingResult out;
  out.lambda = best.temp_lambda;
  out.min_lambda = best.temp_lambda.minCoeff();
  out.summax_selected = summax_selected;
  out.x.entries.resize(sys.nt);
  for (Index i = 0; i < sys.nt; ++i)
    out.x.entries(i) = Complex(best.x(i), best.x(sys.nt + i));
  return out;
}

}  // namespace onebit
