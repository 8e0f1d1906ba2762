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

#include "gaussot/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gaussot/parallel.hpp"
#include "gaussot/rng.hpp"
#include "gaussot/simd.hpp"

namespace gaussot::oracle {

namespace {

constexpr double kDegenerateVar = 1e-14;

Vector linspace(double lo, double hi, Index n) {
  Vector v(n);
  if (n == 1) {
    v(0) = 0.5 * (lo + hi);
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) v(i) = lo + step * static_cast<double>(i);
  return v;
}

}  // namespace

void GridMeasure::validate() const {
  if (nodes.rows() < 1) fail("SchemaError", "grid measure needs at least one node");
  if (nodes.rows() != masses.size())
    fail("SchemaError", "node and mass counts differ");
  if (dim() > 2) fail("DimensionTooLarge", "grid measures support d <= 2");
  double total = 0.0;
  for (Index i = 0; i < masses.size(); ++i) {
    if (masses(i) < 0.0) fail("SchemaError", "masses must be nonnegative");
    total += masses(i);
  }
  if (std::abs(total - 1.0) > 1e-12) fail("SchemaError", "masses must sum to 1");
}

GridMeasure discretize_gaussian(const GaussianMeasure& mu, const IpfpControls& controls) {
  const Index d = mu.dim();
  if (d > 2) fail("DimensionTooLarge", "discretize_gaussian supports d <= 2");
  GridMeasure grid;

  if (d == 1) {
    const double var = mu.cov.toMatrix()(0, 0);
    if (var <= kDegenerateVar) {
      grid.nodes = Matrix::Constant(1, 1, mu.mean(0));
      grid.masses = Vector::Ones(1);
      return grid;
    }
    const Index p = controls.points_per_dim > 0 ? controls.points_per_dim : 400;
    const double sigma = std::sqrt(var);
    const double half = controls.grid_halfwidth_sigmas * sigma;
    const Vector xs = linspace(mu.mean(0) - half, mu.mean(0) + half, p);
    grid.nodes = xs;
    Vector logw(p);
    for (Index i = 0; i < p; ++i) {
      const double z = (xs(i) - mu.mean(0)) / sigma;
      logw(i) = -0.5 * z * z;
    }
    Vector w(p);
    simd::kernels().exp_array(logw.data(), w.data(), static_cast<size_t>(p));
    grid.masses = w / w.sum();
    return grid;
  }

  // d == 2: axis-aligned tensor grid sized by the marginal deviations;
  // degenerate directions collapse to the mean.
  const Matrix cov = mu.cov.toMatrix();
  const Index p = controls.points_per_dim > 0 ? controls.points_per_dim : 80;
  std::vector<Vector> axes(2);
  for (Index k = 0; k < 2; ++k) {
    const double var = cov(k, k);
    if (var <= kDegenerateVar) {
      axes[static_cast<size_t>(k)] = Vector::Constant(1, mu.mean(k));
    } else {
      const double half = controls.grid_halfwidth_sigmas * std::sqrt(var);
      axes[static_cast<size_t>(k)] = linspace(mu.mean(k) - half, mu.mean(k) + half, p);
    }
  }
  // Quadratic form through the spectral pseudo-inverse so singular
  // covariances stay usable on their range.
  const Matrix pinv =
      mu.cov.apply([&](double v) { return v > kDegenerateVar ? 1.0 / v : 0.0; });
  const Index n0 = axes[0].size(), n1 = axes[1].size();
  grid.nodes.resize(n0 * n1, 2);
  Vector logw(n0 * n1);
  Index row = 0;
  for (Index i = 0; i < n0; ++i) {
    for (Index j = 0; j < n1; ++j, ++row) {
      grid.nodes(row, 0) = axes[0](i);
      grid.nodes(row, 1) = axes[1](j);
      Vector z(2);
      z << axes[0](i) - mu.mean(0), axes[1](j) - mu.mean(1);
      logw(row) = -0.5 * z.dot(pinv * z);
    }
  }
  Vector w(logw.size());
  simd::kernels().exp_array(logw.data(), w.data(), static_cast<size_t>(logw.size()));
  grid.masses = w / w.sum();
  return grid;
}

namespace {

// One side of the Schrodinger system in log domain: for every row point x,
//   pot_x(i) = -eps * log sum_j exp(log m_j + pot_y(j)/eps - ||x_i - y_j||^2/eps).
// The quadratic cost is folded into the affine kernel arguments:
//   arg_j = [log m_j + pot_y(j)/eps - ||y_j||^2/eps] + (2/eps) <x_i, y_j> - ||x_i||^2/eps.
struct IpfpSide {
  const Matrix* nodes;     // q x d of the opposite measure
  Vector log_mass;         // log m_j
  Vector base;             // log m_j + pot(j)/eps - ||y_j||^2/eps
  Vector sq_norm;          // ||y_j||^2

  void refresh(const Vector& pot, double eps) {
    base = log_mass + pot / eps - sq_norm / eps;
  }
};

double row_lse(const IpfpSide& side, const Vector& x, double inv_eps) {
  const Index q = side.base.size();
  const double* u = side.nodes->col(0).data();
  const double* v = side.nodes->cols() > 1 ? side.nodes->col(1).data() : nullptr;
  const double s = 2.0 * inv_eps * x(0);
  const double t = side.nodes->cols() > 1 ? 2.0 * inv_eps * x(1) : 0.0;
  const double lse = simd::kernels().lse_affine2(side.base.data(), u, v, s, t,
                                                 static_cast<size_t>(q));
  return lse - inv_eps * x.squaredNorm();
}

double row_sumexp(const IpfpSide& side, const Vector& x, double inv_eps, double shift) {
  const Index q = side.base.size();
  const double* u = side.nodes->col(0).data();
  const double* v = side.nodes->cols() > 1 ? side.nodes->col(1).data() : nullptr;
  const double s = 2.0 * inv_eps * x(0);
  const double t = side.nodes->cols() > 1 ? 2.0 * inv_eps * x(1) : 0.0;
  return simd::kernels().sumexp_affine2(side.base.data(), u, v, s, t,
                                        shift + inv_eps * x.squaredNorm(),
                                        static_cast<size_t>(q));
}

}  // namespace

double ipfp_entropic_ot(const GridMeasure& mu0, const GridMeasure& mu1, double eps,
                        const IpfpControls& controls) {
  mu0.validate();
  mu1.validate();
  if (mu0.dim() != mu1.dim()) fail("DimensionMismatch", "grid measures disagree on d");
  if (!(eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");

  const Index p = mu0.count(), q = mu1.count();
  const double inv_eps = 1.0 / eps;

  const auto log_vec = [](const Vector& v) {
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i)
      out(i) = v(i) > 0.0 ? std::log(v(i)) : -std::numeric_limits<double>::infinity();
    return out;
  };

  IpfpSide side0;  // used when updating pot1 (sums over mu0 nodes)
  side0.nodes = &mu0.nodes;
  side0.log_mass = log_vec(mu0.masses);
  side0.sq_norm = mu0.nodes.rowwise().squaredNorm();

  IpfpSide side1;  // used when updating pot0
  side1.nodes = &mu1.nodes;
  side1.log_mass = log_vec(mu1.masses);
  side1.sq_norm = mu1.nodes.rowwise().squaredNorm();

  Vector pot0 = Vector::Zero(p);
  Vector pot1 = Vector::Zero(q);

  const auto update_pot0 = [&] {
    side1.refresh(pot1, eps);
    parallel_for(static_cast<size_t>(p), [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i) {
        const Index ii = static_cast<Index>(i);
        pot0(ii) = -eps * row_lse(side1, mu0.nodes.row(ii).transpose(), inv_eps);
      }
    });
  };
  const auto update_pot1 = [&] {
    side0.refresh(pot0, eps);
    parallel_for(static_cast<size_t>(q), [&](size_t lo, size_t hi) {
      for (size_t j = lo; j < hi; ++j) {
        const Index jj = static_cast<Index>(j);
        pot1(jj) = -eps * row_lse(side0, mu1.nodes.row(jj).transpose(), inv_eps);
      }
    });
  };

  // Actual coupling marginals gamma 1 (rows) and gamma^T 1 (columns).
  Vector row_marginal(p), col_marginal(q);
  const auto compute_marginals = [&] {
    side1.refresh(pot1, eps);
    parallel_for(static_cast<size_t>(p), [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i) {
        const Index ii = static_cast<Index>(i);
        const double shift = -(side0.log_mass(ii) + pot0(ii) * inv_eps);
        row_marginal(ii) = row_sumexp(side1, mu0.nodes.row(ii).transpose(), inv_eps, shift);
      }
    });
    side0.refresh(pot0, eps);
    parallel_for(static_cast<size_t>(q), [&](size_t lo, size_t hi) {
      for (size_t j = lo; j < hi; ++j) {
        const Index jj = static_cast<Index>(j);
        const double shift = -(side1.log_mass(jj) + pot1(jj) * inv_eps);
        col_marginal(jj) = row_sumexp(side0, mu1.nodes.row(jj).transpose(), inv_eps, shift);
      }
    });
  };

  bool converged = false;
  for (int it = 0; it < controls.max_iter; ++it) {
    update_pot0();
    update_pot1();
    const bool check = (it % 5 == 4) || it + 1 == controls.max_iter;
    if (!check) continue;
    compute_marginals();
    const double tv_rows = 0.5 * (row_marginal - mu0.masses).cwiseAbs().sum();
    const double tv_cols = 0.5 * (col_marginal - mu1.masses).cwiseAbs().sum();
    if (tv_rows <= controls.marginal_tol && tv_cols <= controls.marginal_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail("NoConvergence", "IPFP did not reach the marginal tolerance in " +
                              std::to_string(controls.max_iter) + " iterations");

  // E[c] + eps KL collapses algebraically to <gamma 1, pot0> + <gamma^T 1, pot1>.
  return row_marginal.dot(pot0) + col_marginal.dot(pot1);
}

McEstimate mc_transport_cost(const EntropicPlan& plan, std::int64_t samples,
                             std::uint64_t seed) {
  if (samples < 1) fail("SchemaError", "need at least one sample");
  const Index n = plan.mean0.size();
  Matrix block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = plan.cov0.toMatrix();
  block.topRightCorner(n, n) = plan.cross_cov;
  block.bottomLeftCorner(n, n) = plan.cross_cov.transpose();
  block.bottomRightCorner(n, n) = plan.cov1.toMatrix();

  SymEig eig = sym_eig(SymMatrix::fromSymmetric(block));
  const Matrix factor =
      eig.eigenvectors * eig.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  // cost = ||dm + D z||^2 with D the difference of the two half-row blocks.
  const Matrix diff = factor.topRows(n) - factor.bottomRows(n);
  const Vector dm = plan.mean0 - plan.mean1;

  const Philox rng(seed);
  double mean = 0.0, m2 = 0.0;
  Vector z(2 * n);
  for (std::int64_t k = 0; k < samples; ++k) {
    for (Index b = 0; b < n; ++b) {
      const auto pair = rng.normal2(static_cast<uint64_t>(k), static_cast<uint64_t>(b));
      z(2 * b) = pair[0];
      z(2 * b + 1) = pair[1];
    }
    const double cost = (dm + diff * z).squaredNorm();
    const double delta = cost - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (cost - mean);
  }
  const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

namespace {

double checked_eval(const std::function<double(const Matrix&)>& f, const Matrix& at) {
  double v;
  try {
    v = f(at);
  } catch (const Error& e) {
    fail("EvaluationFailure", std::string("functional failed: ") + e.what());
  }
  if (!std::isfinite(v)) fail("EvaluationFailure", "functional returned a non-finite value");
  return v;
}

}  // namespace

double fd_directional(const std::function<double(const Matrix&)>& f, const SymMatrix& x0,
                      const SymMatrix& dir, double h) {
  if (!(h > 0.0)) fail("SchemaError", "step h must be > 0");
  const double fp = checked_eval(f, x0.mat() + h * dir.mat());
  const double fm = checked_eval(f, x0.mat() - h * dir.mat());
  return (fp - fm) / (2.0 * h);
}

double fd_second(const std::function<double(const Matrix&)>& f, const SymMatrix& x0,
                 const SymMatrix& dir, double h) {
  if (!(h > 0.0)) fail("SchemaError", "step h must be > 0");
  const double fp = checked_eval(f, x0.mat() + h * dir.mat());
  const double f0 = checked_eval(f, x0.mat());
  const double fm = checked_eval(f, x0.mat() - h * dir.mat());
  return (fp - 2.0 * f0 + fm) / (h * h);
}

}  // namespace gaussot::oracle
