#include <cmath>

#include "doctest.h"
#include "onebit/channel.hpp"
#include "onebit/linear_precoders.hpp"
#include "onebit/modulation.hpp"
#include "onebit/rng.hpp"

using namespace onebit;

namespace {

CVector random_symbols(const PskConstellation& c, Index k,
                       std::uint64_t seed) {
  const auto idx = uniform_indices(k, c.order(), seed);
  CVector s(k);
  for (Index i = 0; i < k; ++i) s(i) = c.point(idx[std::size_t(i)]);
  return s;
}

}  // namespace

TEST_CASE("zf_precode_fd: scalar channel") {
  CMatrix h(1, 1);
  h << Complex(2.0, 0.0);
  CVector s(1);
  s << std::polar(1.0, 0.3);
  const CVector x = zf_precode_fd(h, s);
  CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // Transmit direction aligns the received value with the symbol.
  const Complex y = (h * x).value();
  CHECK(std::abs(y / s(0) - std::abs(y)) < 1e-12);
}

TEST_CASE("zf_precode_fd: interference-free reception") {
  const PskConstellation qpsk(4);
  const CMatrix h = sample_channel(4, 16, 21);
  const CVector s = random_symbols(qpsk, 4, 22);
  const CVector x = zf_precode_fd(h, s);
  CHECK(x.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const CVector y = h * x;
  // y = c*s for one common positive scalar c.
  const double c0 = std::abs(y(0));
  CHECK(c0 > 0.0);
  for (Index k = 0; k < 4; ++k)
    CHECK(std::abs(y(k) - c0 * s(k)) < 1e-10);
}

TEST_CASE("zf_precode_fd: noiseless detection succeeds") {
  const PskConstellation qpsk(4);
  const CMatrix h = sample_channel(4, 32, 23);
  const auto idx = uniform_indices(4, 4, 24);
  CVector s(4);
  for (Index i = 0; i < 4; ++i) s(i) = qpsk.point(idx[std::size_t(i)]);
  const CVector y = std::sqrt(10.0) * (h * zf_precode_fd(h, s));
  for (Index k = 0; k < 4; ++k)
    CHECK(qpsk.detect(y(k)).index == idx[std::size_t(k)]);
}

TEST_CASE("singular channel raises") {
  CMatrix h(2, 4);
  h.row(0) = sample_channel(1, 4, 31);
  h.row(1) = h.row(0);  // rank 1
  CVector s(2);
  s << Complex(1, 0), Complex(0, 1);
  CHECK_THROWS_AS(zf_precode_fd(h, s), SingularChannelError);
  CHECK_THROWS_AS(quantized_zf(h, s), SingularChannelError);
}

TEST_CASE("ci_linear_matrix: frozen scalar case") {
  CMatrix h(1, 1);
  h << Complex(1.0, 0.0);
  CVector s(1);
  s << std::polar(1.0, std::numbers::pi / 4);
  const CMatrix w = ci_linear_matrix(h, s, 1.0);
  CHECK(w.rows() == 1);
  CHECK(w.cols() == 1);
  // s * conj(s) = |s|^2 = 1.
  CHECK(std::abs(w(0, 0) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("ci_linear_matrix: product collapses to the scaled ZF direction") {
  const PskConstellation qpsk(4);
  const Index k = 4, nt = 16;
  const CMatrix h = sample_channel(k, nt, 41);
  const CVector s = random_symbols(qpsk, k, 42);
  const double p0 = 2.5;
  const CMatrix w = ci_linear_matrix(h, s, p0);
  const CVector direct =
      std::sqrt(nt * p0 / static_cast<double>(k)) * zf_direction(h, s);
  CHECK((w * s - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ci_linear_matrix: power scaling homogeneity") {
  const PskConstellation qpsk(4);
  const CMatrix h = sample_channel(2, 8, 43);
  const CVector s = random_symbols(qpsk, 2, 44);
  const CMatrix w1 = ci_linear_matrix(h, s, 1.0);
  const CMatrix w2 = ci_linear_matrix(h, s, 2.0);
  CHECK((w2 - std::sqrt(2.0) * w1).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(ci_linear_matrix(h, s, 0.0), std::invalid_argument);
}

TEST_CASE("quantized_zf: frozen scalar case") {
  CMatrix h(1, 1);
  h << Complex(1.0, 0.0);
  CVector s(1);
  s << std::polar(1.0, std::numbers::pi / 4);
  const OneBitVector x = quantized_zf(h, s);
  const double amp = alphabet_amplitude(1);
  CHECK(x.entries(0) == Complex(amp, amp));
}

TEST_CASE("quantized outputs of the two routes match entrywise") {
  const PskConstellation qpsk(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t seed = mix_seed(900, trial);
    const CMatrix h = sample_channel(2, 8, seed);
    const CVector s = random_symbols(qpsk, 2, mix_seed(901, trial));
    for (const double p0 : {1.0, 0.37}) {
      const OneBitVector a = quantize(ci_linear_matrix(h, s, p0) * s);
      const OneBitVector b = quantized_zf(h, s);
      for (Index i = 0; i < 8; ++i) CHECK(a.entries(i) == b.entries(i));
    }
  }
}

TEST_CASE("wide-regime scaling approaches the nominal target") {
  const PskConstellation qpsk(4);
  const Index nt = 512, k = 4;
  const double p0 = 1.0;
  const CMatrix h = sample_channel(k, nt, 55);
  const CVector s = random_symbols(qpsk, k, 56);
  const CVector x = ci_linear_matrix(h, s, p0) * s;
  // Received values hit t* = sqrt(nt*p0/k) on every user by construction...
  const double t_star = std::sqrt(static_cast<double>(nt) * p0 / k);
  const CVector y = h * x;
  for (Index uk = 0; uk < k; ++uk)
    CHECK(std::abs(y(uk) - t_star * s(uk)) < 1e-8);
  // ...while the spent transmit power approaches the budget p0.
  CHECK(x.squaredNorm() == doctest::Approx(p0).epsilon(0.10));
}
