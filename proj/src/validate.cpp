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

#include "gaussot/validate.hpp"

#include <cmath>
#include <string>

#include "gaussot/oracle.hpp"
#include "gaussot/rng.hpp"

namespace gaussot {

namespace {

Matrix random_matrix(Index rows, Index cols, uint64_t seed) {
  RandomStream rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

SpectralPsd random_spd(Index n, uint64_t seed, double ridge = 0.05) {
  const Matrix a = random_matrix(n, n, seed);
  const Matrix c =
      a * a.transpose() / static_cast<double>(n) + ridge * Matrix::Identity(n, n);
  return psd_project(SymMatrix::fromSymmetric(c));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::vector<CheckResult> run_validation_suite(std::uint64_t seed) {
  std::vector<CheckResult> checks;
  const auto add = [&](const std::string& name, double residual, double tolerance) {
    checks.push_back({name, residual, tolerance, residual <= tolerance});
  };

  // Closed form vs log-domain IPFP on the 1-D reference family.
  {
    oracle::IpfpControls controls;
    const GaussianMeasure mu0(Vector::Zero(1), SpectralPsd::identity(1));
    for (double var : {0.5, 1.0, 4.0}) {
      for (double mean : {0.0, 1.0}) {
        for (double eps : {0.5, 2.0}) {
          const GaussianMeasure mu1(Vector::Constant(1, mean),
                                    SpectralPsd::diagonal(Vector::Constant(1, var)));
          const double closed = entropic_ot(mu0, mu1, eps).value;
          const double grid = oracle::ipfp_entropic_ot(
              oracle::discretize_gaussian(mu0, controls),
              oracle::discretize_gaussian(mu1, controls), eps, controls);
          add("ipfp/var=" + fmt(var) + ",mean=" + fmt(mean) + ",eps=" + fmt(eps),
              std::abs(closed - grid), 3e-3);
        }
      }
    }
  }

  // Monte Carlo transport cost on the 1-D unit-variance plan.
  {
    const GaussianMeasure mu0(Vector::Zero(1), SpectralPsd::identity(1));
    const GaussianMeasure mu1(Vector::Zero(1), SpectralPsd::identity(1));
    const EntropicPlan plan = optimal_plan(mu0, mu1, 2.0);
    const auto mc = oracle::mc_transport_cost(plan, 1000000, seed);
    add("mc_transport_cost", std::abs(mc.estimate - transport_cost(plan)),
        4.0 * mc.std_error);
  }

  // Finite differences against the analytic directional derivatives.
  {
    const double eps = 1.0, h = 1e-5;
    const SpectralPsd c0 = random_spd(3, 101);
    const SymMatrix x0 = SymMatrix::fromSymmetric(random_spd(3, 102).toMatrix());
    const SymMatrix dir = SymMatrix::fromSymmetric(random_matrix(3, 3, 103));
    const auto fe = [&](const Matrix& x) {
      return entropic_ot_cov(c0, SymMatrix::fromSymmetric(x), eps);
    };
    const auto fs = [&](const Matrix& x) {
      return sinkhorn_cov(c0, SymMatrix::fromSymmetric(x), eps);
    };
    add("fd/entropic_derivative",
        std::abs(oracle::fd_directional(fe, x0, dir, h) - d_entropic_ot_cov(c0, x0, dir, eps)),
        1e-5);
    add("fd/sinkhorn_derivative",
        std::abs(oracle::fd_directional(fs, x0, dir, h) - d_sinkhorn_cov(c0, x0, dir, eps)),
        1e-5);
  }

  // Plan decomposition, duality, Schrodinger system on a 3-D instance.
  {
    const double eps = 0.7;
    const GaussianMeasure mu0(random_matrix(3, 1, 201).col(0), random_spd(3, 202));
    const GaussianMeasure mu1(random_matrix(3, 1, 203).col(0), random_spd(3, 204));
    const double ot = entropic_ot(mu0, mu1, eps).value;
    const EntropicPlan plan = optimal_plan(mu0, mu1, eps);
    add("plan/decomposition",
        std::abs(transport_cost(plan) + eps * plan_kl(plan) - ot) / (1.0 + std::abs(ot)),
        1e-8);
    add("plan/duality", std::abs(dual_objective(mu0, mu1, eps) - ot) / (1.0 + std::abs(ot)),
        1e-10);
    add("plan/schrodinger", schrodinger_residual(plan), 1e-8);
    add("equiv_form",
        std::abs(entropic_ot_equiv(mu0, mu1, eps).value - ot) / (1.0 + std::abs(ot)), 1e-10);
  }

  // Adjoint-switch identity on random (C, X, a) triples.
  {
    double worst = 0.0;
    for (uint64_t k = 0; k < 10; ++k) {
      const Index n = 4;
      const SpectralPsd c = random_spd(n, 300 + 2 * k);
      const SpectralPsd x = random_spd(n, 301 + 2 * k);
      const double a = k % 2 == 0 ? 1.0 : 4.0 / 0.7;
      const Matrix sx = x.sqrtMatrix();
      const Matrix sc = c.sqrtMatrix();
      const SymEig inner = sym_eig(SymMatrix::fromSymmetric(sc * x.toMatrix() * sc));
      const Matrix mid = inner.eigenvectors *
                         inner.eigenvalues.unaryExpr([&](double v) {
                           return 1.0 / (1.0 + std::sqrt(1.0 + a * a * std::max(v, 0.0)));
                         }).asDiagonal() *
                         inner.eigenvectors.transpose();
      const Matrix lhs = sx * sc * mid * sc * sx;
      const SymEig outer = sym_eig(SymMatrix::fromSymmetric(sx * c.toMatrix() * sx));
      const Matrix rhs = outer.eigenvectors *
                         outer.eigenvalues.unaryExpr([&](double v) {
                           return shifted_sqrt_minus_one(a * a * std::max(v, 0.0)) / (a * a);
                         }).asDiagonal() *
                         outer.eigenvectors.transpose();
      worst = std::max(worst, (lhs - rhs).norm());
    }
    add("adjoint_switch", worst, 1e-8);
  }

  return checks;
}

}  // namespace gaussot
