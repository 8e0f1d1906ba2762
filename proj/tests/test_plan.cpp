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

GaussianMeasure random_pair_measure(Index n, uint64_t seed) {
  // Mix of full-rank and rank-deficient covariances.
  return random_measure(n, seed, seed % 3 != 0);
}

}  // namespace

TEST_CASE("optimal_plan scalar case: cross covariance and potentials") {
  const GaussianMeasure mu = gauss1d(0, 1);
  const EntropicPlan plan = optimal_plan(mu, mu, 2.0);

  // 1-D: C_XY = (2/eps) (1 + m/2)^{-1} with m = -1 + sqrt(5).
  const double cxy = 2.0 / (1.0 + std::sqrt(5.0));
  CHECK(plan.cross_cov(0, 0) == doctest::Approx(cxy).epsilon(1e-12));
  CHECK(transport_cost(plan) == doctest::Approx(2.0 - 2.0 * cxy).epsilon(1e-12));

  // KL of the 1-D plan: -1/2 log(1 - V^2) with V = C_XY here.
  CHECK(plan_kl(plan) == doctest::Approx(-0.5 * std::log1p(-cxy * cxy)).epsilon(1e-12));
  CHECK(plan_kl(plan) == doctest::Approx(0.24061).epsilon(1e-4));
}

TEST_CASE("optimal_plan with Dirac marginals") {
  const GaussianMeasure d0 = GaussianMeasure::dirac(Vector::Zero(2));
  const GaussianMeasure d1 = GaussianMeasure::dirac(Vector::Ones(2));
  const EntropicPlan plan = optimal_plan(d0, d1, 0.5);
  CHECK(plan.cross_cov.norm() == 0.0);
  CHECK((plan.pot_A.mat() - Matrix::Identity(2, 2) / 0.5).norm() < 1e-14);
  CHECK((plan.pot_B.mat() - Matrix::Identity(2, 2) / 0.5).norm() < 1e-14);
  CHECK(transport_cost(plan) == doctest::Approx(2.0));
  CHECK(plan_kl(plan) == 0.0);
  CHECK(schrodinger_residual(plan) == 0.0);
}

TEST_CASE("plan concentrates on the identity coupling as eps -> 0") {
  const SpectralPsd c = random_spd(3, 41);
  const GaussianMeasure mu(Vector::Zero(3), c);
  const EntropicPlan plan = optimal_plan(mu, mu, 1e-6);
  CHECK((plan.cross_cov - c.toMatrix()).norm() < 1e-3);
}

TEST_CASE("plan block covariance is PSD and marginals are preserved") {
  for (uint64_t seed : {1u, 2u, 3u, 4u}) {
    const GaussianMeasure mu0 = random_pair_measure(3, 200 + seed);
    const GaussianMeasure mu1 = random_pair_measure(3, 300 + seed);
    const EntropicPlan plan = optimal_plan(mu0, mu1, 0.9);
    Matrix block(6, 6);
    block.topLeftCorner(3, 3) = plan.cov0.toMatrix();
    block.topRightCorner(3, 3) = plan.cross_cov;
    block.bottomLeftCorner(3, 3) = plan.cross_cov.transpose();
    block.bottomRightCorner(3, 3) = plan.cov1.toMatrix();
    const SymEig eig = sym_eig(SymMatrix::fromSymmetric(block));
    CHECK(eig.eigenvalues(5) > -1e-10 * std::max(1.0, eig.eigenvalues(0)));
    CHECK((plan.cov0.toMatrix() - mu0.cov.toMatrix()).norm() == 0.0);
    CHECK((plan.mean1 - mu1.mean).norm() == 0.0);
  }
}

TEST_CASE("decomposition identity: cost + eps * KL = OT") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    const GaussianMeasure mu0 = random_pair_measure(n, 400 + seed);
    const GaussianMeasure mu1 = random_pair_measure(n, 480 + seed);
    const double eps = seed % 2 ? 1.0 : 0.35;
    const EntropicPlan plan = optimal_plan(mu0, mu1, eps);
    const double ot = entropic_ot(mu0, mu1, eps).value;
    const double composed = transport_cost(plan) + eps * plan_kl(plan);
    CHECK(std::abs(composed - ot) <= 1e-8 * (1.0 + std::abs(ot)));
    CHECK(transport_cost(plan) >= wasserstein2_sq(mu0, mu1) - 1e-8);
  }
}

TEST_CASE("plan_kl edge cases") {
  // Independent coupling: zero cross covariance.
  EntropicPlan indep = optimal_plan(random_pair_measure(3, 700), random_pair_measure(3, 701),
                                    1e8);
  CHECK(plan_kl(indep) < 1e-6);
  indep.cross_cov.setZero();
  CHECK(plan_kl(indep) == 0.0);

  // 1-D contraction value.
  const double v = 0.618034;
  EntropicPlan one = optimal_plan(gauss1d(0, 1), gauss1d(0, 1), 2.0);
  CHECK(plan_kl(one) == doctest::Approx(-0.5 * std::log(1.0 - v * v)).epsilon(1e-6));

  // Degenerate plan: correlation at 1 must be rejected.
  EntropicPlan degen = one;
  degen.cross_cov(0, 0) = 1.0;
  CHECK_THROWS_WITH_AS(plan_kl(degen), doctest::Contains("DegeneratePlan"), Error);
}

TEST_CASE("dual objective attains the primal value") {
  CHECK(dual_objective(GaussianMeasure::dirac(Vector::Zero(2)),
                       GaussianMeasure::dirac(Vector::Ones(2)), 1.0) ==
        doctest::Approx(2.0).epsilon(1e-14));

  CHECK(dual_objective(gauss1d(0, 1), gauss1d(0, 1), 2.0) ==
        doctest::Approx(entropic_ot(gauss1d(0, 1), gauss1d(0, 1), 2.0).value)
            .epsilon(1e-12));

  const GaussianMeasure mu0 = random_pair_measure(4, 801);
  const GaussianMeasure mu1 = random_pair_measure(4, 802);
  const double ot = entropic_ot(mu0, mu1, 0.7).value;
  CHECK(std::abs(dual_objective(mu0, mu1, 0.7) - ot) <= 1e-10 * (1.0 + std::abs(ot)));
}

TEST_CASE("schrodinger residual: optimal plans pass, perturbed plans fail") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    const GaussianMeasure mu0 = random_pair_measure(n, 900 + seed);
    const GaussianMeasure mu1 = random_pair_measure(n, 950 + seed);
    EntropicPlan plan = optimal_plan(mu0, mu1, 0.8);
    CHECK(schrodinger_residual(plan) < 1e-8);

    plan.pot_A = SymMatrix::fromSymmetric(plan.pot_A.mat() +
                                          0.1 * Matrix::Identity(n, n));
    CHECK(schrodinger_residual(plan) > 1e-3);
  }
}

TEST_CASE("plan potentials solve the Schrodinger system under quadrature") {
  // alpha(x) * E_{mu1}[beta(y) exp(-(x-y)^2/eps)] = 1 pointwise; integrate
  // the inner expectation on a dense grid and compare against 1/alpha.
  const double eps = 1.7;
  const GaussianMeasure mu0 = gauss1d(0.3, 1.2);
  const GaussianMeasure mu1 = gauss1d(-0.4, 0.7);
  const EntropicPlan plan = optimal_plan(mu0, mu1, eps);

  const double sigma1 = std::sqrt(mu1.cov.toMatrix()(0, 0));
  const int nodes = 4001;
  const double lo = mu1.mean(0) - 10.0 * sigma1, hi = mu1.mean(0) + 10.0 * sigma1;
  const double h = (hi - lo) / (nodes - 1);
  for (double x : {-1.0, 0.0, 0.8}) {
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double y = lo + h * k;
      const double density = std::exp(-0.5 * (y - mu1.mean(0)) * (y - mu1.mean(0)) /
                                      (sigma1 * sigma1)) /
                             (sigma1 * std::sqrt(2.0 * 3.14159265358979323846));
      const double w = (k == 0 || k == nodes - 1) ? 0.5 * h : h;
      acc += w * density *
             std::exp(log_beta(plan, Vector::Constant(1, y)) - (x - y) * (x - y) / eps);
    }
    const double alpha = std::exp(log_alpha(plan, Vector::Constant(1, x)));
    CHECK(alpha * acc == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("kl_gaussian scalar cases") {
  const GaussianMeasure std1 = gauss1d(0, 1);
  CHECK(std::abs(kl_gaussian(std1, std1)) <= 1e-12);

  CHECK(kl_gaussian(gauss1d(1, 1), gauss1d(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));

  const double e = std::exp(1.0);
  CHECK(kl_gaussian(gauss1d(0, e), gauss1d(0, 1)) ==
        doctest::Approx(0.5 * (e - 2.0)).epsilon(1e-12));
  CHECK(0.5 * (e - 2.0) == doctest::Approx(0.35914091).epsilon(1e-7));
}

TEST_CASE("kl_gaussian nonnegativity, singular handling, and ridge") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const GaussianMeasure nu = random_measure(3, 1000 + seed);
    const GaussianMeasure mu = random_measure(3, 1100 + seed);
    CHECK(kl_gaussian(nu, mu) >= 0.0);
  }

  const GaussianMeasure singular(Vector::Zero(2), random_psd_rank(2, 1, 1200));
  const GaussianMeasure full(Vector::Zero(2), random_spd(2, 1201));
  CHECK_THROWS_WITH_AS(kl_gaussian(full, singular), doctest::Contains("SingularReference"),
                       Error);
  CHECK(std::isfinite(kl_gaussian(full, singular, 0.1)));
  CHECK(std::isinf(kl_gaussian(singular, full)));
}

TEST_CASE("gaussian_exp_quadratic") {
  const SpectralPsd c = random_spd(3, 1300);
  CHECK(gaussian_exp_quadratic(Vector::Zero(3), c,
                               SymMatrix(Matrix::Zero(3, 3)), Vector::Zero(3)) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // 1-D MGF of a standard normal at b = 1.
  CHECK(gaussian_exp_quadratic(Vector::Zero(1), SpectralPsd::identity(1),
                               SymMatrix(Matrix::Zero(1, 1)), Vector::Ones(1)) ==
        doctest::Approx(std::exp(0.5)).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(
      gaussian_exp_quadratic(Vector::Zero(1), SpectralPsd::identity(1),
                             SymMatrix(Matrix::Identity(1, 1)), Vector::Zero(1)),
      doctest::Contains("IntegrabilityViolation"), Error);
}
