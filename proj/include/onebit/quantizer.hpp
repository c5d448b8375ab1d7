#pragma once

#include <cmath>

#include "onebit/types.hpp"

namespace onebit {

// Per-antenna amplitude of each real/imaginary component after 1-bit
// quantization. With nt antennas the full vector has unit Frobenius norm.
inline double alphabet_amplitude(Index nt) {
  return 1.0 / std::sqrt(2.0 * static_cast<double>(nt));
}

// Transmit vector whose entries all lie on the quaternary alphabet
// {±a ± j·a} with a = alphabet_amplitude(nt), so ‖entries‖² = 1.
struct OneBitVector {
  CVector entries;
  Index nt() const { return entries.size(); }
};

// Zero maps to +1 so the output is a function of the input bits alone.
inline double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

inline OneBitVector quantize(const CVector& v) {
  const Index nt = v.size();
  const double amp = alphabet_amplitude(nt);
  OneBitVector out;
  out.entries.resize(nt);
  for (Index i = 0; i < nt; ++i)
    out.entries(i) =
        Complex(sign_plus(v(i).real()) * amp, sign_plus(v(i).imag()) * amp);
  return out;
}

// Classification of a candidate transmit vector against the alphabet box.
// Components are interior when strictly below the per-component bound
// (relative tolerance), violations when strictly above it. A vector is a
// valid 1-bit output only when no component is interior; violations are
// tracked separately because they signal a broken upstream solver rather
// than a loose relaxation.
struct AlphabetCheck {
  Index interior_re = 0;
  Index interior_im = 0;
  Index violation_re = 0;
  Index violation_im = 0;

  bool valid() const { return interior_re == 0 && interior_im == 0; }
  Index interior_total() const { return interior_re + interior_im; }
};

inline constexpr double kBoxTolerance = 1e-6;

inline AlphabetCheck is_valid_output(const CVector& x, Index nt) {
  const double amp = alphabet_amplitude(nt);
  const double lo = (1.0 - kBoxTolerance) * amp;
  const double hi = (1.0 + kBoxTolerance) * amp;
  AlphabetCheck c;
  for (Index i = 0; i < x.size(); ++i) {
    const double re = std::abs(x(i).real());
    const double im = std::abs(x(i).imag());
    if (re < lo) ++c.interior_re;
    if (im < lo) ++c.interior_im;
    if (re > hi) ++c.violation_re;
    if (im > hi) ++c.violation_im;
  }
  return c;
}

// Fraction of real/imaginary components the box relaxation left strictly
// inside the alphabet.
inline double interior_ratio(const AlphabetCheck& c, Index nt) {
  return static_cast<double>(c.interior_total()) /
         (2.0 * static_cast<double>(nt));
}

}  // namespace onebit
