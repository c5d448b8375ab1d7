#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "onebit/types.hpp"

namespace onebit {

// Decomposition of a PSK point into the two unit-circle directions that
// bound its decision sector. re_basis + im_basis equals the point itself,
// and any point a*re_basis + b*im_basis with a,b > 0 lies strictly inside
// the sector.
struct ThresholdBases {
  Complex re_basis;
  Complex im_basis;

  double a() const { return re_basis.real(); }
  double b() const { return re_basis.imag(); }
  double c() const { return im_basis.real(); }
  double d() const { return im_basis.imag(); }
  // Positive for every sector narrower than a half plane.
  double det() const { return a() * d() - b() * c(); }
};

struct Detection {
  int index = 0;
  // Set when the observation carries no angle (exactly zero).
  bool ambiguous = false;
};

// M-ary PSK with points offset by pi/4 so the quaternary case lands on the
// diagonals. Symbol indices count counter-clockwise; bit labels are Gray
// coded so adjacent sectors differ in one bit.
class PskConstellation {
 public:
  explicit PskConstellation(int order) : order_(order) {
    if (order < 4 || (order & (order - 1)) != 0)
      throw std::invalid_argument(
          "PSK order must be a power of two and at least 4");
    bits_ = 0;
    for (int m = order; m > 1; m >>= 1) ++bits_;
  }

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }
  double threshold_angle() const { return std::numbers::pi / order_; }

  double phase(int index) const {
    return std::numbers::pi / 4 +
           2.0 * std::numbers::pi * wrap_index(index) / order_;
  }

  Complex point(int index) const { return std::polar(1.0, phase(index)); }

  ThresholdBases bases_for(int index) const {
    const double theta = threshold_angle();
    const double scale = 1.0 / (2.0 * std::cos(theta));
    return {std::polar(scale, phase(index) - theta),
            std::polar(scale, phase(index) + theta)};
  }

  // Sector membership is half open: the lower edge belongs to the sector,
  // the upper edge to the next one counter-clockwise.
  Detection detect(Complex y) const {
    if (y == Complex(0.0, 0.0)) return {0, true};
    const double width = 2.0 * threshold_angle();
    const double lower_edge = phase(0) - threshold_angle();
    double a = std::fmod(std::arg(y) - lower_edge, 2.0 * std::numbers::pi);
    if (a < 0) a += 2.0 * std::numbers::pi;
    int idx = static_cast<int>(std::floor(a / width));
    return {wrap_index(idx), false};
  }

  // MSB-first Gray label of a symbol index.
  std::vector<std::uint8_t> bits_for_index(int index) const {
    const int g = wrap_index(index) ^ (wrap_index(index) >> 1);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(bits_));
    for (int b = 0; b < bits_; ++b)
      out[static_cast<std::size_t>(b)] =
          static_cast<std::uint8_t>((g >> (bits_ - 1 - b)) & 1);
    return out;
  }

  int index_for_bits(const std::vector<std::uint8_t>& bits) const {
    if (static_cast<int>(bits.size()) != bits_)
      throw std::invalid_argument("bit label length mismatch");
    int g = 0;
    for (auto b : bits) g = (g << 1) | (b ? 1 : 0);
    int idx = 0;
    for (; g; g >>= 1) idx ^= g;
    return idx;
  }

 private:
  int wrap_index(int index) const {
    int m = index % order_;
    return m < 0 ? m + order_ : m;
  }

  int order_;
  int bits_;
};

}  // namespace onebit
