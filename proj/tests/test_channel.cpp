#include <cmath>

#include "doctest.h"
#include "onebit/channel.hpp"

using namespace onebit;

TEST_CASE("channel dimensions and preconditions") {
  const CMatrix h = sample_channel(4, 32, 1);
  CHECK(h.rows() == 4);
  CHECK(h.cols() == 32);
  CHECK_THROWS_AS(sample_channel(5, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_channel(0, 4, 1), std::invalid_argument);
}

TEST_CASE("channel determinism from seed") {
  const CMatrix a = sample_channel(8, 16, 42);
  const CMatrix b = sample_channel(8, 16, 42);
  const CMatrix c = sample_channel(8, 16, 43);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("channel entries have unit mean square") {
  // 10^5 entries: 3 sigma of the mean of |h|^2 (variance 1) is ~0.0095.
  const CMatrix h = sample_channel(100, 1000, 7);
  const double mean_sq = h.cwiseAbs2().mean();
  CHECK(mean_sq == doctest::Approx(1.0).epsilon(0.02));
  // Real and imaginary parts each carry half the energy.
  CHECK(h.real().cwiseAbs2().mean() == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("favorable propagation in the wide regime") {
  // Gram entries of H H^H / nt concentrate on the identity as nt grows.
  const Index nt = 512;
  const Index k = 4;
  const CMatrix h = sample_channel(k, nt, 12);
  const CMatrix g = (h * h.adjoint()) / static_cast<double>(nt);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) {
      const double target = r == c ? 1.0 : 0.0;
      CHECK(std::abs(g(r, c) - Complex(target, 0.0)) < 0.1);
    }
}

TEST_CASE("csi error model") {
  CHECK(CsiError(2.5, 10.0).delta() == doctest::Approx(0.25));
  CHECK(CsiError(0.0, 3.0).delta() == 0.0);
  CHECK_THROWS_AS(CsiError(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CsiError(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("perturb_csi: zero beta returns the matrix bit for bit") {
  const CMatrix h = sample_channel(4, 8, 3);
  const CMatrix h2 = perturb_csi(h, CsiError(0.0, 5.0), 99);
  CHECK((h - h2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturb_csi: error variance matches delta") {
  // beta = 2.5 at rho = 10 gives per-entry error variance 0.25.
  const Index k = 100;
  const Index nt = 1000;
  const CMatrix zero = CMatrix::Zero(k, nt);
  const CMatrix q = perturb_csi(zero, CsiError(2.5, 10.0), 31);
  CHECK(q.cwiseAbs2().mean() == doctest::Approx(0.25).epsilon(0.05));

  const CMatrix h = sample_channel(4, 64, 8);
  const CMatrix h_est = perturb_csi(h, CsiError(2.5, 10.0), 32);
  CHECK((h_est - h).cwiseAbs().maxCoeff() > 0.0);
}
