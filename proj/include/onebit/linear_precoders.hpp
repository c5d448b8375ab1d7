#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "onebit/quantizer.hpp"
#include "onebit/types.hpp"

namespace onebit {

struct SingularChannelError : std::runtime_error {
  explicit SingularChannelError(double cond)
      : std::runtime_error("channel Gram matrix is numerically singular"),
        condition(cond) {}
  double condition;
};

inline constexpr double kMaxGramCondition = 1e12;

// Common ZF kernel: d = H^H (H H^H)^{-1} s. The K x K Gram matrix is
// Hermitian positive definite for full-rank H; an eigenvalue ratio above
// kMaxGramCondition is treated as rank deficiency.
inline CVector zf_direction(const CMatrix& h, const CVector& s) {
  if (h.rows() != s.size())
    throw std::invalid_argument("symbol count must match user count");
  const CMatrix gram = h * h.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kMaxGramCondition)
    throw SingularChannelError(lo <= 0.0 ? std::numeric_limits<double>::infinity()
                                         : hi / lo);
  return h.adjoint() * gram.llt().solve(s);
}

// Infinite-resolution ZF baseline, normalized to unit transmit energy per
// frame so every scheme radiates the same power.
inline CVector zf_precode_fd(const CMatrix& h, const CVector& s) {
  CVector x = zf_direction(h, s);
  const double norm = x.norm();
  if (norm == 0.0) throw SingularChannelError(0.0);
  return x / norm;
}

// Beamforming matrix whose product with s is the scaled ZF direction:
// W = sqrt(nt * p0 / K^3) * d * s^H, with d the ZF direction.
inline CMatrix ci_linear_matrix(const CMatrix& h, const CVector& s,
                                double p0) {
  if (p0 <= 0.0) throw std::invalid_argument("p0 must be > 0");
  const Index k = h.rows();
  const Index nt = h.cols();
  const double scale =
      std::sqrt(static_cast<double>(nt) * p0 /
                (static_cast<double>(k) * static_cast<double>(k) *
                 static_cast<double>(k)));
  return scale * (zf_direction(h, s) * s.adjoint());
}

// 1-bit transmit vector of the quantized ZF scheme. Positive-scale
// invariance of the quantizer makes this identical to quantize(W * s)
// entry for entry, for any p0.
inline OneBitVector quantized_zf(const CMatrix& h, const CVector& s) {
  return quantize(zf_direction(h, s));
}

}  // namespace onebit
