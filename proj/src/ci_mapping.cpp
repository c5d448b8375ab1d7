#include "onebit/ci_mapping.hpp"

#include <cmath>

namespace onebit {

namespace {

void check_symbols(const CMatrix& h, const CVector& s) {
  if (h.rows() != s.size())
    throw std::invalid_argument("symbol count must match user count");
  for (Index k = 0; k < s.size(); ++k)
    if (std::abs(std::abs(s(k)) - 1.0) > 1e-6)
      throw std::invalid_argument("symbols must be unit modulus");
}

}  // namespace

LinearProgram build_relaxed_lp(const CMatrix& h, const CVector& s,
                               const PskConstellation& c) {
  check_symbols(h, s);
  const Index k = h.rows();
  const Index nt = h.cols();
  const Index n = 2 * nt + 1;
  const double tan_theta = std::tan(c.threshold_angle());
  const double amp = alphabet_amplitude(nt);

  LinearProgram lp;
  lp.objective = RVector::Zero(n);
  lp.objective(n - 1) = 1.0;
  lp.ineq_a = RMatrix::Zero(2 * k, n);
  lp.ineq_b = RVector::Zero(2 * k);
  lp.lower = RVector::Constant(n, -amp);
  lp.upper = RVector::Constant(n, amp);
  lp.lower(n - 1) = 0.0;
  lp.upper(n - 1) = kLpInfinity;

  // Rotated observation per user: with u + j*v = conj(s_k) * h_k (row),
  // Re(lambda_k) = u.xR - v.xI and Im(lambda_k) = v.xR + u.xI. The sector
  // condition |Im| <= (Re - t)*tan(theta) becomes two rows with rhs 0.
  for (Index uk = 0; uk < k; ++uk) {
    const double sr = s(uk).real();
    const double si = s(uk).imag();
    const RVector hr = h.row(uk).real().transpose();
    const RVector hi = h.row(uk).imag().transpose();
    const RVector u = sr * hr + si * hi;
    const RVector v = sr * hi - si * hr;

    lp.ineq_a.row(2 * uk).segment(0, nt) =
        (v - tan_theta * u).transpose();
    lp.ineq_a.row(2 * uk).segment(nt, nt) =
        (u + tan_theta * v).transpose();
    lp.ineq_a(2 * uk, n - 1) = tan_theta;

    lp.ineq_a.row(2 * uk + 1).segment(0, nt) =
        (-v - tan_theta * u).transpose();
    lp.ineq_a.row(2 * uk + 1).segment(nt, nt) =
        (-u + tan_theta * v).transpose();
    lp.ineq_a(2 * uk + 1, n - 1) = tan_theta;
  }
  return lp;
}

CiMappingResult ci_map_transmit(const CMatrix& h, const CVector& s,
                                const PskConstellation& c) {
  const LinearProgram lp = build_relaxed_lp(h, s, c);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) throw LpSolveError(sol.status);

  const Index nt = h.cols();
  CiMappingResult out;
  out.t_relaxed = sol.objective;
  out.lp_iterations = sol.iterations;
  out.relaxed.resize(nt);
  for (Index i = 0; i < nt; ++i)
    out.relaxed(i) = Complex(sol.z(i), sol.z(nt + i));
  out.eta = interior_ratio(is_valid_output(out.relaxed, nt), nt);
  out.x = quantize(out.relaxed);
  return out;
}

double ci_margin(const CMatrix& h, const CVector& s,
                 const PskConstellation& c, const CVector& x) {
  check_symbols(h, s);
  const double tan_theta = std::tan(c.threshold_angle());
  double margin = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < h.rows(); ++k) {
    const Complex lambda = (h.row(k) * x).value() * std::conj(s(k));
    margin =
        std::min(margin, lambda.real() - std::abs(lambda.imag()) / tan_theta);
  }
  return margin;
}

}  // namespace onebit
