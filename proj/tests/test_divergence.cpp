// Copyright 2026 The gaussot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "gaussot/divergence.hpp"
#include "test_util.hpp"

using namespace gaussot;
using namespace gaussot::testutil;

namespace {

GaussianMeasure gauss1d(double mean, double var) {
  return GaussianMeasure(Vector::Constant(1, mean),
                         SpectralPsd::diagonal(Vector::Constant(1, var)));
}

// Scalar evaluation of the 1-D closed form, kept independent of the matrix path.
double ot1d(double m0, double v0, double m1, double v1, double eps) {
  const double t = 16.0 / (eps * eps) * v0 * v1;
  const double m = -1.0 + std::sqrt(1.0 + t);
  return (m0 - m1) * (m0 - m1) + v0 + v1 - 0.5 * eps * m + 0.5 * eps * std::log1p(0.5 * m);
}

}  // namespace

TEST_CASE("wasserstein2_sq closed form") {
  const GaussianMeasure mu = random_measure(4, 3);
  CHECK(std::abs(wasserstein2_sq(mu, mu)) <= 1e-12);

  // 1-D scalar formula (sigma0 - sigma1)^2 at equal means.
  CHECK(wasserstein2_sq(gauss1d(0, 1), gauss1d(0, 4)) == doctest::Approx(1.0).epsilon(1e-12));

  const GaussianMeasure d0 = GaussianMeasure::dirac(Vector::Constant(2, 1.0));
  Vector m1(2);
  m1 << -1.0, 2.0;
  const GaussianMeasure d1 = GaussianMeasure::dirac(m1);
  CHECK(wasserstein2_sq(d0, d1) ==
        doctest::Approx((d0.mean - d1.mean).squaredNorm()).epsilon(1e-14));
}

TEST_CASE("entropic_ot scalar cases") {
  // Diracs: all M vanish, only the mean term remains.
  const GaussianMeasure d0 = GaussianMeasure::dirac(Vector::Zero(3));
  const GaussianMeasure d1 = GaussianMeasure::dirac(Vector::Ones(3));
  for (double eps : {0.1, 1.0, 10.0})
    CHECK(entropic_ot(d0, d1, eps).value == doctest::Approx(3.0).epsilon(1e-14));

  const double expected = ot1d(0, 1, 0, 1, 2.0);
  CHECK(expected == doctest::Approx(1.24514383).epsilon(1e-8));
  CHECK(entropic_ot(gauss1d(0, 1), gauss1d(0, 1), 2.0).value ==
        doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(entropic_ot(d0, d1, 0.0), doctest::Contains("InvalidEpsilon"), Error);
  CHECK_THROWS_WITH_AS(entropic_ot(d0, gauss1d(0, 1), 1.0),
                       doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("entropic_ot limits in eps") {
  const GaussianMeasure mu0 = random_measure(3, 11);
  const GaussianMeasure mu1 = random_measure(3, 12);
  const double w2 = wasserstein2_sq(mu0, mu1);

  // Small-eps limit recovers the exact distance.
  CHECK(std::abs(entropic_ot(mu0, mu1, 1e-6).value - w2) < 1e-3);

  // |OT_eps - W2^2| shrinks monotonically along a decreasing eps ladder.
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1.0, 0.1, 0.01, 0.001}) {
    const double gap = std::abs(entropic_ot(mu0, mu1, eps).value - w2);
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }

  // Large-eps limit: independent coupling cost.
  const double indep =
      (mu0.mean - mu1.mean).squaredNorm() + mu0.cov.trace() + mu1.cov.trace();
  CHECK(std::abs(entropic_ot(mu0, mu1, 1e9).value - indep) < 1e-6 * (1.0 + indep));
}

TEST_CASE("entropic_ot symmetry and report consistency") {
  for (uint64_t seed : {21u, 22u, 23u}) {
    const GaussianMeasure mu0 = random_measure(4, seed, seed % 2 == 0);
    const GaussianMeasure mu1 = random_measure(4, seed + 100, seed % 2 == 1);
    const DivergenceReport a = entropic_ot(mu0, mu1, 0.8);
    const DivergenceReport b = entropic_ot(mu1, mu0, 0.8);
    CHECK(std::abs(a.value - b.value) <= 1e-10 * (1.0 + std::abs(a.value)));
    CHECK(a.value ==
          doctest::Approx(a.mean_term + a.trace_terms + a.logdet_term).epsilon(1e-12));
  }
}

TEST_CASE("entropic_ot_equiv agrees with the direct form") {
  const GaussianMeasure d0 = GaussianMeasure::dirac(Vector::Zero(2));
  const GaussianMeasure d1 = GaussianMeasure::dirac(Vector::Ones(2));
  CHECK(entropic_ot_equiv(d0, d1, 1.0).value == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(entropic_ot_equiv(gauss1d(0, 1), gauss1d(0, 1), 2.0).value ==
        doctest::Approx(ot1d(0, 1, 0, 1, 2.0)).epsilon(1e-12));

  for (uint64_t seed = 0; seed < 20; ++seed) {
    const GaussianMeasure mu0 = random_measure(3, 500 + seed, seed % 3 != 0);
    const GaussianMeasure mu1 = random_measure(3, 600 + seed, seed % 4 != 0);
    const double eps = 0.1 + 0.4 * static_cast<double>(seed % 5);
    const double a = entropic_ot(mu0, mu1, eps).value;
    const double b = entropic_ot_equiv(mu0, mu1, eps).value;
    CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("sinkhorn divergence: zero law, Diracs, composition") {
  const GaussianMeasure mu = random_measure(4, 31);
  CHECK(std::abs(sinkhorn_divergence(mu, mu, 0.7).value) <= 1e-12);

  const GaussianMeasure d0 = GaussianMeasure::dirac(Vector::Zero(2));
  const GaussianMeasure d1 = GaussianMeasure::dirac(Vector::Ones(2));
  CHECK(sinkhorn_divergence(d0, d1, 3.0).value == doctest::Approx(2.0).epsilon(1e-14));

  // S = OT(mu0, mu1) - (OT(mu0, mu0) + OT(mu1, mu1)) / 2, composed from the
  // entropic values themselves.
  const GaussianMeasure a = gauss1d(0, 1), b = gauss1d(0, 4);
  const double composed = entropic_ot(a, b, 2.0).value -
                          0.5 * (entropic_ot(a, a, 2.0).value + entropic_ot(b, b, 2.0).value);
  CHECK(sinkhorn_divergence(a, b, 2.0).value == doctest::Approx(composed).epsilon(1e-12));
  CHECK(sinkhorn_divergence(a, b, 2.0).value > 0.0);
}

TEST_CASE("sinkhorn positivity on random pairs") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 6);
    const GaussianMeasure mu0 = random_measure(n, 900 + seed, seed % 2 == 0);
    const GaussianMeasure mu1 = random_measure(n, 990 + seed, seed % 3 == 0);
    const double eps = seed % 3 == 0 ? 0.1 : (seed % 3 == 1 ? 1.0 : 10.0);
    CHECK(sinkhorn_divergence(mu0, mu1, eps).value >= -1e-10);
  }
}

TEST_CASE("sinkhorn limits: W2 below, mean distance above") {
  const GaussianMeasure mu0 = random_measure(3, 71);
  const GaussianMeasure mu1 = random_measure(3, 72);
  CHECK(std::abs(sinkhorn_divergence(mu0, mu1, 1e-6).value - wasserstein2_sq(mu0, mu1)) <
        1e-3);
  const double dm = (mu0.mean - mu1.mean).squaredNorm();
  const double lam = std::max(mu0.cov.maxEigenvalue(), mu1.cov.maxEigenvalue());
  CHECK(std::abs(sinkhorn_divergence(mu0, mu1, 1e6 * lam).value - dm) <= 1e-3 * (1.0 + dm));
}

TEST_CASE("covariance functionals are convex along segments") {
  const SpectralPsd c0 = random_spd(4, 81);
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const SymMatrix x1 = SymMatrix::fromSymmetric(random_spd(4, 820 + seed).toMatrix());
    const SymMatrix x2 = SymMatrix::fromSymmetric(random_spd(4, 830 + seed).toMatrix());
    const double eps = seed % 2 ? 0.5 : 2.0;
    const double fe1 = entropic_ot_cov(c0, x1, eps);
    const double fe2 = entropic_ot_cov(c0, x2, eps);
    const double fs1 = sinkhorn_cov(c0, x1, eps);
    const double fs2 = sinkhorn_cov(c0, x2, eps);
    for (double t : {0.25, 0.5, 0.75}) {
      const SymMatrix xt =
          SymMatrix::fromSymmetric(t * x1.mat() + (1.0 - t) * x2.mat());
      CHECK(entropic_ot_cov(c0, xt, eps) <= t * fe1 + (1.0 - t) * fe2 + 1e-9);
      // Sinkhorn is strictly convex: genuine margin on distinct arguments.
      CHECK(sinkhorn_cov(c0, xt, eps) < t * fs1 + (1.0 - t) * fs2);
    }
  }
}

TEST_CASE("covariance functionals match the measure path on PSD arguments") {
  const SpectralPsd c0 = random_spd(3, 85);
  const SpectralPsd x = random_spd(3, 86);
  const GaussianMeasure mu0(Vector::Zero(3), c0);
  const GaussianMeasure mu1(Vector::Zero(3), x);
  const SymMatrix xs = SymMatrix::fromSymmetric(x.toMatrix());
  CHECK(entropic_ot_cov(c0, xs, 0.9) ==
        doctest::Approx(entropic_ot(mu0, mu1, 0.9).value).epsilon(1e-12));
  CHECK(sinkhorn_cov(c0, xs, 0.9) ==
        doctest::Approx(sinkhorn_divergence(mu0, mu1, 0.9).value).epsilon(1e-12));
}

TEST_CASE("covariance functionals reject arguments outside the open set") {
  const SpectralPsd c0 = SpectralPsd::identity(2);
  const SymMatrix bad = SymMatrix::fromSymmetric(-Matrix::Identity(2, 2));
  CHECK_THROWS_WITH_AS(entropic_ot_cov(c0, bad, 1.0), doctest::Contains("DomainViolation"),
                       Error);
}
