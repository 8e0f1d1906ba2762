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

#include "gaussot/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace gaussot {

namespace {

constexpr double kCollapseTol = 1e-12;

// Clips negative spectral noise without the NotPsd guard; fixed-point maps
// are PSD analytically, so anything negative here is roundoff.
SpectralPsd clip_psd(const Matrix& m) {
  SymEig eig = sym_eig(SymMatrix::fromSymmetric(m));
  return SpectralPsd(eig.eigenvalues.cwiseMax(0.0), std::move(eig.eigenvectors));
}

double trace_norm(const Matrix& sym) {
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(sym));
  return eig.eigenvalues.cwiseAbs().sum();
}

// sum_i w_i C_i as a dense matrix.
Matrix weighted_cov_sum(const BarycenterProblem& p) {
  Matrix acc = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.count(); ++i)
    acc += p.weights(static_cast<Index>(i)) * p.measures[i].cov.toMatrix();
  return acc;
}

// Square roots of the input covariances, computed once per solve.
std::vector<Matrix> cov_sqrts(const BarycenterProblem& p) {
  std::vector<Matrix> roots;
  roots.reserve(p.count());
  for (const auto& mu : p.measures) roots.push_back(mu.cov.sqrtMatrix());
  return roots;
}

// sum_i w_i S_i (I + (I + c^2 S_i X S_i)^{1/2})^{-1} S_i.
Matrix resolvent_sum(const BarycenterProblem& p, const std::vector<Matrix>& roots,
                     const Matrix& x, double eps) {
  const double c2 = 16.0 / (eps * eps);
  Matrix acc = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.count(); ++i) {
    const Matrix prod = roots[i] * x * roots[i];
    const SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
    Vector inv(eig.eigenvalues.size());
    for (Index k = 0; k < inv.size(); ++k)
      inv(k) = 1.0 / (1.0 + std::sqrt(1.0 + c2 * std::max(eig.eigenvalues(k), 0.0)));
    const Matrix kmat = eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose();
    acc += p.weights(static_cast<Index>(i)) * (roots[i] * kmat * roots[i]);
  }
  return acc;
}

// (eps/4) sum_i w_i [-I + (I + c^2 X^{1/2} C_i X^{1/2})^{1/2}].
Matrix entropic_map(const BarycenterProblem& p, const SpectralPsd& x, double eps) {
  const double c2 = 16.0 / (eps * eps);
  const Matrix sx = x.sqrtMatrix();
  Matrix acc = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.count(); ++i) {
    const Matrix prod = sx * p.measures[i].cov.toMatrix() * sx;
    const SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
    Vector m(eig.eigenvalues.size());
    for (Index k = 0; k < m.size(); ++k)
      m(k) = shifted_sqrt_minus_one(c2 * std::max(eig.eigenvalues(k), 0.0));
    acc += p.weights(static_cast<Index>(i)) *
           (eig.eigenvectors * m.asDiagonal() * eig.eigenvectors.transpose());
  }
  return 0.25 * eps * acc;
}

// Sandwich map: T(X) sum_i w_i S_i (I + (I + c^2 S_i X S_i)^{1/2})^{-1} S_i T(X)
// with T(X) = (I + (I + c^2 X^2)^{1/2})^{1/2}.
Matrix sinkhorn_map(const BarycenterProblem& p, const std::vector<Matrix>& roots,
                    const SpectralPsd& x, double eps) {
  const double c2 = 16.0 / (eps * eps);
  const Matrix outer =
      x.apply([c2](double v) { return std::sqrt(1.0 + std::sqrt(1.0 + c2 * v * v)); });
  const Matrix inner = resolvent_sum(p, roots, x.toMatrix(), eps);
  return outer * inner * outer;
}

// sum_i w_i (X^{1/2} C_i X^{1/2})^{1/2}.
Matrix exact_map(const BarycenterProblem& p, const SpectralPsd& x) {
  const Matrix sx = x.sqrtMatrix();
  Matrix acc = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.count(); ++i) {
    const Matrix prod = sx * p.measures[i].cov.toMatrix() * sx;
    SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
    const Vector s = clip_spectrum(std::move(eig.eigenvalues)).cwiseSqrt();
    acc += p.weights(static_cast<Index>(i)) *
           (eig.eigenvectors * s.asDiagonal() * eig.eigenvectors.transpose());
  }
  return acc;
}

// (eps/4) [-I + (sum_i w_i (I + c^2 X^{1/2} C_i X^{1/2})^{1/2})^2]^{1/2},
// evaluated through D = R - I (each term contributes -I + (...)^{1/2}, which
// is exact on zero modes), so that -I + R^2 = D (D + 2I) never cancels.
Matrix sinkhorn_g_map(const BarycenterProblem& p, const SpectralPsd& x, double eps) {
  const double c2 = 16.0 / (eps * eps);
  const Matrix sx = x.sqrtMatrix();
  Matrix shift = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.count(); ++i) {
    const Matrix prod = sx * p.measures[i].cov.toMatrix() * sx;
    const SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
    Vector s(eig.eigenvalues.size());
    for (Index k = 0; k < s.size(); ++k)
      s(k) = shifted_sqrt_minus_one(c2 * std::max(eig.eigenvalues(k), 0.0));
    shift += p.weights(static_cast<Index>(i)) *
             (eig.eigenvectors * s.asDiagonal() * eig.eigenvectors.transpose());
  }
  SymEig eig = sym_eig(SymMatrix::fromSymmetric(shift));
  const Vector d = clip_spectrum(std::move(eig.eigenvalues));
  Vector out(d.size());
  for (Index k = 0; k < out.size(); ++k)
    out(k) = 0.25 * eps * std::sqrt(d(k) * (d(k) + 2.0));
  return eig.eigenvectors * out.asDiagonal() * eig.eigenvectors.transpose();
}

struct IterationOutcome {
  SpectralPsd x;
  int iterations;
  double residual;
  bool converged;
};

IterationOutcome run_fixed_point(const BarycenterProblem& p, SpectralPsd x,
                                 const std::function<Matrix(const SpectralPsd&)>& map) {
  double residual = 0.0;
  for (int it = 1; it <= p.max_iter; ++it) {
    Matrix next = map(x);
    if (p.damping > 0.0) next = (1.0 - p.damping) * next + p.damping * x.toMatrix();
    residual = trace_norm(next - x.toMatrix()) / (1.0 + x.trace());
    x = clip_psd(next);
    if (residual <= p.tol) return {std::move(x), it, residual, true};
  }
  return {std::move(x), p.max_iter, residual, false};
}

int count_collapsed(const SpectralPsd& x) {
  int c = 0;
  for (Index k = 0; k < x.eigenvalues().size(); ++k)
    if (x.eigenvalues()(k) < kCollapseTol) ++c;
  return c;
}

// Positive root of x = (eps/4) [-1 + (sum_i w_i (1 + c^2 s_i x)^{1/2})^2]^{1/2}
// through the strictly increasing split form
// x / (1 + sqrt(1 + c^2 x^2)) = sum_i w_i s_i / (1 + sqrt(1 + c^2 s_i x)).
double solve_sinkhorn_1d(const Vector& s, const Vector& w, double eps) {
  const double c2 = 16.0 / (eps * eps);
  const auto f = [&](double x) {
    double rhs = 0.0;
    for (Index i = 0; i < s.size(); ++i)
      rhs += w(i) * s(i) / (1.0 + std::sqrt(1.0 + c2 * s(i) * x));
    return x / (1.0 + std::sqrt(1.0 + c2 * x * x)) - rhs;
  };
  double lo = 0.0;
  double hi = std::max(1.0, s.dot(w));
  while (f(hi) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(BarycenterRegime regime) {
  switch (regime) {
    case BarycenterRegime::trivial_dirac: return "trivial_dirac";
    case BarycenterRegime::interior: return "interior";
    case BarycenterRegime::no_solution: return "no_solution";
    case BarycenterRegime::max_iter_reached: return "max_iter_reached";
  }
  return "unknown";
}

void BarycenterProblem::validate() const {
  if (measures.empty()) fail("SchemaError", "barycenter problem needs at least one measure");
  if (weights.size() != static_cast<Index>(measures.size()))
    fail("SchemaError", "weight count does not match measure count");
  for (Index i = 0; i < weights.size(); ++i)
    if (!(weights(i) > 0.0)) fail("SchemaError", "weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    fail("SchemaError", "weights must sum to 1 within 1e-12");
  for (const auto& mu : measures)
    if (mu.dim() != dim()) fail("DimensionMismatch", "measures have mixed dimensions");
  if (eps < 0.0) fail("InvalidEpsilon", "eps must be >= 0");
  if (max_iter < 1) fail("SchemaError", "max_iter must be >= 1");
  if (!(tol > 0.0)) fail("SchemaError", "tol must be > 0");
  if (damping < 0.0 || damping >= 1.0) fail("SchemaError", "damping must lie in [0, 1)");
}

Vector barycentric_mean(const BarycenterProblem& p) {
  p.validate();
  Vector mean = Vector::Zero(p.dim());
  for (std::size_t i = 0; i < p.count(); ++i)
    mean += p.weights(static_cast<Index>(i)) * p.measures[i].mean;
  return mean;
}

EntropicCondition entropic_condition(const BarycenterProblem& p) {
  p.validate();
  if (!(p.eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(2.0 * weighted_cov_sum(p)));
  const double lmax = eig.eigenvalues(0);
  const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  EntropicCondition cond{EntropicConditionRegime::necessary_fail, lmin, lmax, false};
  if (p.eps >= lmax) {
    cond.regime = EntropicConditionRegime::trivial;
  } else if (p.eps < lmin) {
    cond.regime = EntropicConditionRegime::necessary_ok;
  } else {
    cond.mixed_spectrum = true;
  }
  return cond;
}

BarycenterResult entropic_barycenter(const BarycenterProblem& p) {
  p.validate();
  if (!(p.eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  BarycenterResult result;
  result.mean = barycentric_mean(p);

  const EntropicCondition cond = entropic_condition(p);
  if (cond.regime == EntropicConditionRegime::trivial) {
    result.cov = SpectralPsd::zero(p.dim());
    result.regime = BarycenterRegime::trivial_dirac;
    return result;
  }

  // Strictly positive start; exact in the simultaneously diagonalizable case
  // and clear of the trivial and rank-one fixed points.
  const Matrix start =
      weighted_cov_sum(p) - 0.5 * p.eps * Matrix::Identity(p.dim(), p.dim());
  SpectralPsd x0 = clip_psd(start);

  IterationOutcome out = run_fixed_point(
      p, std::move(x0), [&](const SpectralPsd& x) { return entropic_map(p, x, p.eps); });

  result.cov = std::move(out.x);
  result.iterations = out.iterations;
  result.residual = out.residual;
  result.collapsed_directions = count_collapsed(result.cov);
  if (!out.converged) {
    result.regime = BarycenterRegime::max_iter_reached;
  } else {
    const double first_order = entropic_first_order_residual(p, result.cov);
    result.regime = first_order <= 1e-8 * static_cast<double>(p.dim())
                        ? BarycenterRegime::interior
                        : BarycenterRegime::no_solution;
  }
  return result;
}

BarycenterResult sinkhorn_barycenter(const BarycenterProblem& p) {
  p.validate();
  if (!(p.eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  BarycenterResult result;
  result.mean = barycentric_mean(p);

  const std::vector<Matrix> roots = cov_sqrts(p);
  SpectralPsd x0 = clip_psd(weighted_cov_sum(p));
  IterationOutcome out = run_fixed_point(p, std::move(x0), [&](const SpectralPsd& x) {
    return sinkhorn_map(p, roots, x, p.eps);
  });

  result.cov = std::move(out.x);
  result.iterations = out.iterations;
  result.residual = out.residual;
  result.collapsed_directions = count_collapsed(result.cov);
  if (!out.converged)
    result.regime = BarycenterRegime::max_iter_reached;
  else if (result.cov.trace() <= kCollapseTol)
    result.regime = BarycenterRegime::trivial_dirac;
  else
    result.regime = BarycenterRegime::interior;
  return result;
}

BarycenterResult exact_barycenter(const BarycenterProblem& p) {
  p.validate();
  BarycenterResult result;
  result.mean = barycentric_mean(p);

  SpectralPsd x0 = clip_psd(weighted_cov_sum(p));
  IterationOutcome out = run_fixed_point(
      p, std::move(x0), [&](const SpectralPsd& x) { return exact_map(p, x); });

  result.cov = std::move(out.x);
  result.iterations = out.iterations;
  result.residual = out.residual;
  result.collapsed_directions = count_collapsed(result.cov);
  if (!out.converged)
    result.regime = BarycenterRegime::max_iter_reached;
  else if (result.cov.trace() <= kCollapseTol)
    result.regime = BarycenterRegime::trivial_dirac;
  else
    result.regime = BarycenterRegime::interior;
  return result;
}

double barycenter_1d_entropic(const Vector& sigmas_sq, const Vector& weights, double eps) {
  if (sigmas_sq.size() != weights.size())
    fail("DimensionMismatch", "sigma and weight counts differ");
  if (!(eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  const double total = sigmas_sq.dot(weights);
  if (!(total > 0.0)) fail("ConditionViolated", "sum w_i sigma_i^2 must be > 0");
  if (eps >= 2.0 * total) return 0.0;

  const double c2 = 16.0 / (eps * eps);
  const auto g = [&](double x) {
    double acc = 0.0;
    for (Index i = 0; i < sigmas_sq.size(); ++i)
      acc += weights(i) * shifted_sqrt_minus_one(c2 * sigmas_sq(i) * x);
    return 0.25 * eps * acc;
  };
  // First-order form: strictly decreasing with a sign change on (0, total].
  const auto r = [&](double x) {
    double acc = 0.0;
    for (Index i = 0; i < sigmas_sq.size(); ++i)
      acc += weights(i) * sigmas_sq(i) / (1.0 + std::sqrt(1.0 + c2 * sigmas_sq(i) * x));
    return acc - 0.25 * eps;
  };
  double lo = 0.0;
  double hi = total;
  while (r(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    (r(mid) > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish on x - g(x) pins the fixed-point residual to ~1 ulp.
  for (int it = 0; it < 4; ++it) {
    double slope = 1.0;
    for (Index i = 0; i < sigmas_sq.size(); ++i)
      slope -= 0.25 * eps * weights(i) * 0.5 * c2 * sigmas_sq(i) /
               std::sqrt(1.0 + c2 * sigmas_sq(i) * x);
    const double h = x - g(x);
    if (slope != 0.0) x -= h / slope;
  }
  return x;
}

SpectralPsd singular_fixed_point(FixedPointKind kind, const BarycenterProblem& p,
                                 const Vector& u) {
  p.validate();
  if (u.size() != p.dim()) fail("DimensionMismatch", "direction u has wrong length");
  if (std::abs(u.norm() - 1.0) > 1e-10)
    fail("ConditionViolated", "u must be a unit vector");

  const Index n = p.dim();
  Vector s(static_cast<Index>(p.count()));
  for (std::size_t i = 0; i < p.count(); ++i)
    s(static_cast<Index>(i)) = u.dot(p.measures[i].cov.toMatrix() * u);
  const double weighted = s.cwiseMax(0.0).dot(p.weights);

  double x = 0.0;
  switch (kind) {
    case FixedPointKind::exact: {
      if (!(weighted > 0.0))
        fail("ConditionViolated", "sum w_i <u, C_i u> must be > 0");
      double root_sum = 0.0;
      for (Index i = 0; i < s.size(); ++i)
        root_sum += p.weights(i) * std::sqrt(std::max(s(i), 0.0));
      x = root_sum * root_sum;
      break;
    }
    case FixedPointKind::entropic: {
      if (!(p.eps > 0.0) || !(p.eps < 2.0 * weighted))
        fail("ConditionViolated", "need 0 < eps < 2 sum w_i <u, C_i u>");
      x = barycenter_1d_entropic(s.cwiseMax(0.0), p.weights, p.eps);
      break;
    }
    case FixedPointKind::sinkhorn: {
      if (!(weighted > 0.0))
        fail("ConditionViolated", "sum w_i <u, C_i u> must be > 0");
      if (!(p.eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
      x = solve_sinkhorn_1d(s.cwiseMax(0.0), p.weights, p.eps);
      break;
    }
  }

  // Orthonormal basis whose first column is +/- u (sign of an eigenvector is
  // immaterial), completed by a Householder reflector.
  Vector w = u;
  w(0) += (u(0) >= 0.0 ? 1.0 : -1.0);
  Matrix basis = Matrix::Identity(n, n);
  if (w.squaredNorm() > 0.0) basis -= (2.0 / w.squaredNorm()) * (w * w.transpose());
  Vector vals = Vector::Zero(n);
  vals(0) = x;
  return SpectralPsd(std::move(vals), std::move(basis));
}

double entropic_first_order_residual(const BarycenterProblem& p, const SpectralPsd& x) {
  const std::vector<Matrix> roots = cov_sqrts(p);
  const Matrix lhs = resolvent_sum(p, roots, x.toMatrix(), p.eps);
  return (lhs - 0.25 * p.eps * Matrix::Identity(p.dim(), p.dim())).norm();
}

double entropic_g_residual(const BarycenterProblem& p, const SpectralPsd& x) {
  return (x.toMatrix() - entropic_map(p, x, p.eps)).norm();
}

double sinkhorn_f_residual(const BarycenterProblem& p, const SpectralPsd& x) {
  const std::vector<Matrix> roots = cov_sqrts(p);
  return (x.toMatrix() - sinkhorn_map(p, roots, x, p.eps)).norm();
}

double sinkhorn_g_residual(const BarycenterProblem& p, const SpectralPsd& x) {
  return (x.toMatrix() - sinkhorn_g_map(p, x, p.eps)).norm();
}

double exact_fixed_point_residual(const BarycenterProblem& p, const SpectralPsd& x) {
  return (x.toMatrix() - exact_map(p, x)).norm();
}

}  // namespace gaussot
