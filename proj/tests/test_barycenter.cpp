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

#include "gaussot/barycenter.hpp"
#include "gaussot/divergence.hpp"
#include "test_util.hpp"

using namespace gaussot;
using namespace gaussot::testutil;

namespace {

BarycenterProblem make_problem(std::vector<GaussianMeasure> measures, Vector weights,
                               double eps) {
  BarycenterProblem p;
  p.measures = std::move(measures);
  p.weights = std::move(weights);
  p.eps = eps;
  return p;
}

GaussianMeasure centered(Matrix cov) {
  const Index n = cov.rows();
  return GaussianMeasure(Vector::Zero(n), psd_project(SymMatrix::fromSymmetric(cov)));
}

GaussianMeasure scalar_measure(double mean, double var) {
  return GaussianMeasure(Vector::Constant(1, mean),
                         SpectralPsd::diagonal(Vector::Constant(1, var)));
}

}  // namespace

TEST_CASE("barycentric_mean") {
  auto p1 = make_problem({scalar_measure(3.5, 1.0)}, Vector::Ones(1), 1.0);
  CHECK(barycentric_mean(p1)(0) == doctest::Approx(3.5));

  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  auto p2 = make_problem({GaussianMeasure(e1, SpectralPsd::identity(2)),
                          GaussianMeasure(-e1, SpectralPsd::identity(2))},
                         Vector::Constant(2, 0.5), 1.0);
  CHECK(barycentric_mean(p2).norm() == doctest::Approx(0.0));

  Vector w(2);
  w << 0.3, 0.7;
  auto p3 = make_problem({scalar_measure(1, 1), scalar_measure(2, 1)}, w, 1.0);
  CHECK(barycentric_mean(p3)(0) == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("entropic_condition case split") {
  auto trivial = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 3.0);
  CHECK(entropic_condition(trivial).regime == EntropicConditionRegime::trivial);

  auto ok = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 1.0);
  CHECK(entropic_condition(ok).regime == EntropicConditionRegime::necessary_ok);

  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 0.1;
  auto mixed = make_problem({centered(c)}, Vector::Ones(1), 1.0);
  const EntropicCondition cond = entropic_condition(mixed);
  CHECK(cond.regime == EntropicConditionRegime::necessary_fail);
  CHECK(cond.mixed_spectrum);
  CHECK(cond.lambda_min == doctest::Approx(0.2));
  CHECK(cond.lambda_max == doctest::Approx(2.0));
}

TEST_CASE("entropic barycenter scalar regimes") {
  // sigma^2 = 1, eps = 1: interior solution sigma^2 - eps/2.
  auto p = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 1.0);
  const BarycenterResult r = entropic_barycenter(p);
  CHECK(r.regime == BarycenterRegime::interior);
  CHECK(r.cov.toMatrix()(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  // eps >= 2 sigma^2: Dirac.
  auto pd = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 2.5);
  const BarycenterResult rd = entropic_barycenter(pd);
  CHECK(rd.regime == BarycenterRegime::trivial_dirac);
  CHECK(rd.cov.toMatrix().norm() == 0.0);
}

TEST_CASE("entropic barycenter applies the scalar fixed point per eigendirection") {
  auto p = make_problem({centered(Matrix::Identity(2, 2)), centered(Matrix::Identity(2, 2))},
                        Vector::Constant(2, 0.5), 0.5);
  const BarycenterResult r = entropic_barycenter(p);
  CHECK(r.regime == BarycenterRegime::interior);
  CHECK((r.cov.toMatrix() - 0.75 * Matrix::Identity(2, 2)).norm() < 1e-10);
  CHECK(entropic_first_order_residual(p, r.cov) <= 1e-8 * 2);
}

TEST_CASE("entropic barycenter reports the mixed regime honestly") {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 0.1;
  auto p = make_problem({centered(c)}, Vector::Ones(1), 1.0);
  p.max_iter = 2000;
  const BarycenterResult r = entropic_barycenter(p);
  CHECK(r.regime == BarycenterRegime::no_solution);
  CHECK(r.collapsed_directions == 1);
  // The surviving direction still solves the scalar equation.
  CHECK(r.cov.maxEigenvalue() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("entropic barycenter on a non-commuting pair satisfies first-order optimality") {
  auto p = make_problem({centered(random_spd(3, 61, 0.6).toMatrix()),
                         centered(random_spd(3, 62, 0.6).toMatrix())},
                        Vector::Constant(2, 0.5), 0.4);
  p.max_iter = 5000;
  const BarycenterResult r = entropic_barycenter(p);
  CHECK(r.regime == BarycenterRegime::interior);
  CHECK(entropic_first_order_residual(p, r.cov) <= 1e-8 * 3);
  CHECK(entropic_g_residual(p, r.cov) <= 1e-8 * 3);
}

TEST_CASE("sinkhorn barycenter of a single measure returns it") {
  const SpectralPsd c = random_spd(3, 71);
  auto p = make_problem({GaussianMeasure(Vector::Zero(3), c)}, Vector::Ones(1), 1.0);
  const BarycenterResult r = sinkhorn_barycenter(p);
  CHECK(r.regime == BarycenterRegime::interior);
  CHECK((r.cov.toMatrix() - c.toMatrix()).norm() <= 1e-12 * (1.0 + c.toMatrix().norm()));
  CHECK(sinkhorn_f_residual(p, r.cov) <= 1e-10);
}

TEST_CASE("sinkhorn barycenter of identical measures is that measure") {
  const SpectralPsd c = random_spd(2, 81);
  auto p = make_problem(
      {GaussianMeasure(Vector::Zero(2), c), GaussianMeasure(Vector::Zero(2), c)},
      Vector::Constant(2, 0.5), 0.7);
  const BarycenterResult r = sinkhorn_barycenter(p);
  CHECK((r.cov.toMatrix() - c.toMatrix()).norm() < 1e-10);
}

TEST_CASE("sinkhorn barycenter of singular pair is strictly positive") {
  Matrix c1 = Matrix::Zero(2, 2), c2 = Matrix::Zero(2, 2);
  c1(0, 0) = 1.0;
  c2(1, 1) = 1.0;
  auto p = make_problem({centered(c1), centered(c2)}, Vector::Constant(2, 0.5), 1.0);
  p.max_iter = 5000;
  const BarycenterResult r = sinkhorn_barycenter(p);
  CHECK(r.regime == BarycenterRegime::interior);
  // sum w_i C_i = I/2 > 0, so the barycenter is strictly positive.
  CHECK(r.cov.minEigenvalue() > 1e-10);
  CHECK(sinkhorn_f_residual(p, r.cov) <= 1e-8 * 2);
  CHECK(sinkhorn_g_residual(p, r.cov) <= 1e-8 * 2);
}

TEST_CASE("sinkhorn barycenter minimizes the objective among perturbations") {
  auto p = make_problem({centered(random_spd(2, 91).toMatrix()),
                         centered(random_spd(2, 92).toMatrix())},
                        Vector::Constant(2, 0.5), 1.0);
  p.max_iter = 5000;
  const BarycenterResult r = sinkhorn_barycenter(p);
  REQUIRE(r.regime == BarycenterRegime::interior);

  const auto objective = [&](const SpectralPsd& x) {
    double acc = 0.0;
    const GaussianMeasure mx(Vector::Zero(2), x);
    for (std::size_t i = 0; i < p.count(); ++i)
      acc += p.weights(static_cast<Index>(i)) *
             sinkhorn_divergence(mx, p.measures[i], p.eps).value;
    return acc;
  };
  const double at_solution = objective(r.cov);
  for (uint64_t k = 0; k < 50; ++k) {
    const Matrix raw = random_matrix(2, 2, 9000 + k);
    Matrix delta = 0.5 * (raw + raw.transpose());
    delta *= 1e-2 / delta.norm();
    Matrix perturbed = r.cov.toMatrix() + delta;
    const SymEig eig = sym_eig(SymMatrix::fromSymmetric(perturbed));
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) <= 0.0) continue;
    CHECK(objective(SpectralPsd(eig.eigenvalues, eig.eigenvectors)) >= at_solution);
  }
}

TEST_CASE("sinkhorn barycenter at tiny eps approaches the common covariance") {
  const SpectralPsd c = random_spd(2, 95, 0.5);
  auto p = make_problem(
      {GaussianMeasure(Vector::Zero(2), c), GaussianMeasure(Vector::Zero(2), c)},
      Vector::Constant(2, 0.5), 1e-4);
  p.max_iter = 20000;
  const BarycenterResult r = sinkhorn_barycenter(p);
  CHECK((r.cov.toMatrix() - c.toMatrix()).norm() < 1e-3);
}

TEST_CASE("exact barycenter: fixed point and 1-D closed form") {
  const SpectralPsd c = random_spd(3, 97);
  auto p1 = make_problem({GaussianMeasure(Vector::Zero(3), c)}, Vector::Ones(1), 0.0);
  const BarycenterResult r1 = exact_barycenter(p1);
  CHECK((r1.cov.toMatrix() - c.toMatrix()).norm() < 1e-10);

  // 1-D: the barycenter standard deviation is the weighted mean deviation.
  Vector w(2);
  w << 0.25, 0.75;
  auto p2 = make_problem({scalar_measure(0, 1), scalar_measure(0, 4)}, w, 0.0);
  const BarycenterResult r2 = exact_barycenter(p2);
  const double sbar = 0.25 * 1.0 + 0.75 * 2.0;
  CHECK(r2.cov.toMatrix()(0, 0) == doctest::Approx(sbar * sbar).epsilon(1e-10));
  CHECK(exact_fixed_point_residual(p2, r2.cov) < 1e-10);
}

TEST_CASE("barycenter_1d_entropic") {
  CHECK(barycenter_1d_entropic(Vector::Ones(1), Vector::Ones(1), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(barycenter_1d_entropic(Vector::Ones(1), Vector::Ones(1), 2.0) == 0.0);

  Vector s(2), w(2);
  s << 1.0, 4.0;
  w << 0.5, 0.5;
  const double eps = 0.1;
  const double x = barycenter_1d_entropic(s, w, eps);
  CHECK(x > 0.0);
  CHECK(x < 2.5);
  const double c2 = 16.0 / (eps * eps);
  double g = 0.0;
  for (int i = 0; i < 2; ++i)
    g += w(i) * (-1.0 + std::sqrt(1.0 + c2 * s(i) * x));
  g *= 0.25 * eps;
  CHECK(std::abs(x - g) <= 1e-14);
}

TEST_CASE("singular fixed points are rank one and satisfy their equations") {
  // Exact kind, single identity covariance: X_u = u u^T.
  auto p_exact = make_problem({centered(Matrix::Identity(2, 2))}, Vector::Ones(1), 0.0);
  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  const SpectralPsd xe = singular_fixed_point(FixedPointKind::exact, p_exact, e1);
  CHECK((xe.toMatrix() - e1 * e1.transpose()).norm() < 1e-12);

  // Entropic kind, scalar case recovers sigma^2 - eps/2.
  auto p_ent = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 1.0);
  const SpectralPsd xent =
      singular_fixed_point(FixedPointKind::entropic, p_ent, Vector::Ones(1));
  CHECK(xent.toMatrix()(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  // Sinkhorn kind along the diagonal direction of I.
  auto p_sink = make_problem({centered(Matrix::Identity(2, 2)),
                              centered(Matrix::Identity(2, 2))},
                             Vector::Constant(2, 0.5), 1.0);
  Vector diag(2);
  diag << 1.0, 1.0;
  diag /= std::sqrt(2.0);
  const SpectralPsd xs = singular_fixed_point(FixedPointKind::sinkhorn, p_sink, diag);
  CHECK(xs.eigenvalues()(1) <= 1e-12 * std::max(1.0, xs.eigenvalues()(0)));
  CHECK(sinkhorn_g_residual(p_sink, xs) <= 1e-10 * 2);

  // Condition violations are reported with the failed inequality.
  auto p_bad = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), 5.0);
  CHECK_THROWS_WITH_AS(
      singular_fixed_point(FixedPointKind::entropic, p_bad, Vector::Ones(1)),
      doctest::Contains("ConditionViolated"), Error);
  Vector not_unit = Vector::Constant(1, 0.5);
  CHECK_THROWS_AS(singular_fixed_point(FixedPointKind::exact, p_bad, not_unit), Error);
}

TEST_CASE("rank-one catalogue across kinds and directions") {
  auto p = make_problem({centered(random_spd(3, 301, 0.4).toMatrix()),
                         centered(random_spd(3, 302, 0.4).toMatrix())},
                        Vector::Constant(2, 0.5), 0.3);
  for (uint64_t k = 0; k < 6; ++k) {
    const Vector u = random_unit(3, 400 + k);
    for (FixedPointKind kind :
         {FixedPointKind::exact, FixedPointKind::entropic, FixedPointKind::sinkhorn}) {
      const SpectralPsd x = singular_fixed_point(kind, p, u);
      CHECK(x.eigenvalues()(1) <= 1e-12 * std::max(1.0, x.eigenvalues()(0)));
      double residual = 0.0;
      switch (kind) {
        case FixedPointKind::exact: residual = exact_fixed_point_residual(p, x); break;
        case FixedPointKind::entropic: residual = entropic_g_residual(p, x); break;
        case FixedPointKind::sinkhorn: residual = sinkhorn_g_residual(p, x); break;
      }
      CHECK(residual <= 1e-10 * 3);
    }
  }
}

TEST_CASE("problem validation") {
  auto p = make_problem({scalar_measure(0, 1)}, Vector::Constant(1, 0.5), 1.0);
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("weights must sum to 1"), Error);

  auto p2 = make_problem({scalar_measure(0, 1)}, Vector::Ones(1), -1.0);
  CHECK_THROWS_WITH_AS(p2.validate(), doctest::Contains("InvalidEpsilon"), Error);
}
