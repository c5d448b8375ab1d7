#pragma once

#include <cstdint>
#include <random>

#include "onebit/types.hpp"

namespace onebit {

// SplitMix64 finalizer. Decorrelates nearby (stream, index) pairs so that
// per-frame substreams derived from a master seed do not overlap.
inline std::uint64_t mix_seed(std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = stream + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent draw purposes within one frame. Keeping symbols, channel, CSI
// error and noise on separate substreams makes runs with different scheme
// lists or CSI settings reuse identical (s, H, n) triples.
enum class Draw : std::uint64_t {
  kSymbols = 0x1,
  kChannel = 0x2,
  kCsiError = 0x3,
  kNoise = 0x4,
};

inline std::uint64_t frame_seed(std::uint64_t master, std::uint64_t frame,
                                Draw purpose) {
  return mix_seed(mix_seed(master, frame), static_cast<std::uint64_t>(purpose));
}

// Row-major fill, real part before imaginary part, each N(0, var/2), so a
// matrix draw is reproducible from (rows, cols, seed) alone.
inline CMatrix complex_gaussian(Index rows, Index cols, double var,
                                std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> part(0.0, std::sqrt(var / 2.0));
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const double re = part(gen);
      const double im = part(gen);
      m(r, c) = Complex(re, im);
    }
  return m;
}

inline CVector complex_gaussian_vector(Index n, double var,
                                       std::uint64_t seed) {
  return complex_gaussian(n, 1, var, seed);
}

// Uniform integers in [0, bound) for symbol index draws.
inline std::vector<int> uniform_indices(Index n, int bound,
                                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dist(0, bound - 1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = dist(gen);
  return out;
}

}  // namespace onebit
