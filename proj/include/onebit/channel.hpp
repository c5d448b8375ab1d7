#pragma once

#include <stdexcept>

#include "onebit/rng.hpp"
#include "onebit/types.hpp"

namespace onebit {

// K x N_t flat Rayleigh channel, entries i.i.d. CN(0,1).
inline CMatrix sample_channel(Index k, Index nt, std::uint64_t seed) {
  if (k < 1 || nt < k)
    throw std::invalid_argument("channel requires 1 <= K <= N_t");
  return complex_gaussian(k, nt, 1.0, seed);
}

// Channel-estimate error model: per-entry error variance scales inversely
// with transmit SNR, so estimates improve as the operating point rises.
struct CsiError {
  double beta = 0.0;
  double rho = 1.0;

  CsiError(double beta_in, double rho_in) : beta(beta_in), rho(rho_in) {
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    if (rho <= 0.0) throw std::invalid_argument("rho must be > 0");
  }

  double delta() const { return beta / rho; }
};

// Returns H + Q with Q i.i.d. CN(0, delta). beta = 0 returns H unchanged,
// bit for bit, so perfect-CSI runs are unaffected by the error stream.
inline CMatrix perturb_csi(const CMatrix& h, const CsiError& err,
                           std::uint64_t seed) {
  if (err.beta == 0.0) return h;
  return h + complex_gaussian(h.rows(), h.cols(), err.delta(), seed);
}

}  // namespace onebit
