#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/symbol_scaling.hpp"
#include "onebit/types.hpp"

namespace onebit {

enum class Scheme {
  kZfFd,           // infinite-resolution ZF baseline
  kQuantizedZf,    // 1-bit quantized ZF
  kCiMapping,      // relaxation-normalization mapping
  kSymbolScaling,  // combined allocation pipeline
  kSumMax,         // sum-max allocation only
  kMaxMin,         // max-min allocation only
};

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kZfFd:
      return "zf_fd";
    case Scheme::kQuantizedZf:
      return "quantized_zf";
    case Scheme::kCiMapping:
      return "ci_mapping";
    case Scheme::kSymbolScaling:
      return "symbol_scaling";
    case Scheme::kSumMax:
      return "sum_max";
    case Scheme::kMaxMin:
      return "max_min";
  }
  return "unknown";
}

inline std::optional<Scheme> scheme_from_string(std::string_view name) {
  if (name == "zf_fd") return Scheme::kZfFd;
  if (name == "quantized_zf") return Scheme::kQuantizedZf;
  if (name == "ci_mapping") return Scheme::kCiMapping;
  if (name == "symbol_scaling") return Scheme::kSymbolScaling;
  if (name == "sum_max") return Scheme::kSumMax;
  if (name == "max_min") return Scheme::kMaxMin;
  return std::nullopt;
}

struct ExperimentConfig {
  Index nt = 128;
  Index k = 16;
  int mod_order = 4;
  std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
  Index frames_per_point = 10000;
  std::uint64_t master_seed = 1;
  std::vector<Scheme> schemes = {Scheme::kZfFd, Scheme::kQuantizedZf,
                                 Scheme::kCiMapping, Scheme::kSymbolScaling};
  double beta = 0.0;  // CSI error coefficient; 0 means perfect CSI
  double p0 = 1.0;
  bool noiseless = false;          // drop the noise term entirely
  Index channel_block_frames = 1;  // frames sharing one channel draw
  int workers = 1;
  InitFallback init_fallback = InitFallback::kAlwaysPlus;

  void validate() const {
    if (k < 1 || nt < k)
      throw std::invalid_argument("config requires 1 <= k <= nt");
    if (snr_db.empty()) throw std::invalid_argument("snr list is empty");
    if (frames_per_point < 1)
      throw std::invalid_argument("frames_per_point must be >= 1");
    if (schemes.empty()) throw std::invalid_argument("scheme list is empty");
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    if (p0 <= 0.0) throw std::invalid_argument("p0 must be > 0");
    if (channel_block_frames < 1)
      throw std::invalid_argument("channel_block_frames must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  }
};

}  // namespace onebit
