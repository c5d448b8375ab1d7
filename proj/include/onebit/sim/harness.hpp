#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "onebit/sim/config.hpp"
#include "onebit/types.hpp"

namespace onebit {

// Accumulated detection outcomes for one (scheme, SNR) cell. All counters
// are integers so parallel partial sums merge exactly regardless of worker
// count or partition.
struct BerPoint {
  Scheme scheme = Scheme::kZfFd;
  double snr_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frames = 0;
  std::uint64_t failures = 0;
  std::uint64_t error_sq_sum = 0;  // sum of squared per-frame error counts

  double ber() const {
    return bits == 0 ? 0.0
                     : static_cast<double>(bit_errors) /
                           static_cast<double>(bits);
  }

  // Standard error of the BER estimate from the frame-level sample
  // variance of per-frame error counts.
  double standard_error() const {
    if (frames < 2 || bits == 0) return 0.0;
    const double f = static_cast<double>(frames);
    const double mean = static_cast<double>(bit_errors) / f;
    const double var =
        (static_cast<double>(error_sq_sum) - f * mean * mean) / (f - 1.0);
    return std::sqrt(std::max(var, 0.0) * f) / static_cast<double>(bits);
  }
};

struct BerCurve {
  std::vector<BerPoint> points;  // scheme-major, SNR ascending within scheme

  const BerPoint& at(Scheme s, double snr_db) const;
};

// Paired Monte Carlo sweep: every scheme sees identical symbol, channel,
// and noise draws per frame, and per-frame seeds depend only on
// (master_seed, frame index), so results are identical for any worker
// count. A frame on which any scheme fails is dropped for all schemes.
BerCurve run_ber_sweep(const ExperimentConfig& cfg);

struct EtaPoint {
  Index nt = 0;
  double mean_eta = 0.0;  // mean interior fraction over solved realizations
  Index realizations = 0;
  Index lp_failures = 0;
};

// Mean relaxation interior ratio per antenna count at fixed user count.
// Realizations that fail to solve are excluded and counted.
std::vector<EtaPoint> run_eta_experiment(const std::vector<Index>& nt_list,
                                         Index k, Index realizations,
                                         std::uint64_t seed, int workers = 1,
                                         int mod_order = 4);

}  // namespace onebit
