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

#include "gaussot/divergence.hpp"

#include <cmath>
#include <limits>

namespace gaussot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_eps(double eps) {
  if (!(eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
}

double sq_norm_diff(const Vector& a, const Vector& b) { return (a - b).squaredNorm(); }

// (I + M/2)^{-1} from the spectral form of M; eigenvalues are in (0, 1].
Matrix half_shift_inverse(const SpectralPsd& m) {
  return m.apply([](double v) { return 1.0 / (1.0 + 0.5 * v); });
}

}  // namespace

double wasserstein2_sq(const GaussianMeasure& mu0, const GaussianMeasure& mu1) {
  return wasserstein2_report(mu0, mu1).value;
}

DivergenceReport wasserstein2_report(const GaussianMeasure& mu0, const GaussianMeasure& mu1) {
  check_same_dim(mu0, mu1);
  DivergenceReport r;
  r.eps = 0.0;
  r.mean_term = sq_norm_diff(mu0.mean, mu1.mean);
  const Vector spec = cross_spectrum(mu1.cov, mu0.cov);
  r.trace_terms = mu0.cov.trace() + mu1.cov.trace() - 2.0 * spec.cwiseSqrt().sum();
  r.logdet_term = 0.0;
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

DivergenceReport entropic_ot(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                             double eps) {
  check_same_dim(mu0, mu1);
  check_eps(eps);
  const SpectralPsd m01 = m_epsilon(mu0.cov, mu1.cov, eps);
  DivergenceReport r;
  r.eps = eps;
  r.mean_term = sq_norm_diff(mu0.mean, mu1.mean);
  r.trace_terms = mu0.cov.trace() + mu1.cov.trace() - 0.5 * eps * m01.trace();
  r.logdet_term = 0.5 * eps * logdet_half_shift(m01);
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

DivergenceReport entropic_ot_equiv(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                                   double eps) {
  check_same_dim(mu0, mu1);
  check_eps(eps);
  const Matrix s0 = mu0.cov.sqrtMatrix();
  const Matrix prod = s0 * mu1.cov.toMatrix() * s0;
  const SpectralPsd m01 = m_epsilon(mu0.cov, mu1.cov, eps);
  const Matrix shifted = prod - (eps * eps / 8.0) * m01.toMatrix();
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(shifted));
  const double tr_sqrt = clip_spectrum(eig.eigenvalues).cwiseSqrt().sum();
  DivergenceReport r;
  r.eps = eps;
  r.mean_term = sq_norm_diff(mu0.mean, mu1.mean);
  r.trace_terms = mu0.cov.trace() + mu1.cov.trace() - 2.0 * tr_sqrt;
  r.logdet_term = 0.5 * eps * logdet_half_shift(m01);
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

DivergenceReport sinkhorn_divergence(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                                     double eps) {
  check_same_dim(mu0, mu1);
  check_eps(eps);
  const SpectralPsd m00 = m_epsilon(mu0.cov, mu0.cov, eps);
  const SpectralPsd m01 = m_epsilon(mu0.cov, mu1.cov, eps);
  const SpectralPsd m11 = m_epsilon(mu1.cov, mu1.cov, eps);
  DivergenceReport r;
  r.eps = eps;
  r.mean_term = sq_norm_diff(mu0.mean, mu1.mean);
  r.trace_terms = 0.25 * eps * (m00.trace() - 2.0 * m01.trace() + m11.trace());
  r.logdet_term = 0.25 * eps *
                  (2.0 * logdet_half_shift(m01) - logdet_half_shift(m00) - logdet_half_shift(m11));
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

EntropicPlan optimal_plan(const GaussianMeasure& mu0, const GaussianMeasure& mu1, double eps) {
  check_same_dim(mu0, mu1);
  check_eps(eps);
  const Index n = mu0.dim();
  const Matrix s0 = mu0.cov.sqrtMatrix();
  const Matrix s1 = mu1.cov.sqrtMatrix();
  const SpectralPsd m01 = m_epsilon(mu0.cov, mu1.cov, eps);
  const SpectralPsd m10 = m_epsilon(mu1.cov, mu0.cov, eps);
  const Matrix w01 = half_shift_inverse(m01);
  const Matrix w10 = half_shift_inverse(m10);

  EntropicPlan plan{
      eps,
      mu0.mean,
      mu1.mean,
      mu0.cov,
      mu1.cov,
      (2.0 / eps) * (s0 * w01 * s0 * mu1.cov.toMatrix()),
      SymMatrix::fromSymmetric(Matrix::Identity(n, n) / eps -
                               (2.0 / (eps * eps)) * (s1 * w10 * s1)),
      SymMatrix::fromSymmetric(Matrix::Identity(n, n) / eps -
                               (2.0 / (eps * eps)) * (s0 * w01 * s0)),
      sq_norm_diff(mu0.mean, mu1.mean) / eps + 0.5 * logdet_half_shift(m01),
  };
  return plan;
}

double transport_cost(const EntropicPlan& plan) {
  return sq_norm_diff(plan.mean0, plan.mean1) + plan.cov0.trace() + plan.cov1.trace() -
         2.0 * plan.cross_cov.trace();
}

double plan_kl(const EntropicPlan& plan) {
  const Matrix v =
      plan.cov0.pinvSqrtMatrix() * plan.cross_cov * plan.cov1.pinvSqrtMatrix();
  Eigen::JacobiSVD<Matrix> svd(v);
  double acc = 0.0;
  for (Index k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k);
    if (s >= 1.0 - 1e-10)
      fail("DegeneratePlan", "plan correlation operator has norm >= 1");
    acc += std::log1p(-s * s);
  }
  return -0.5 * acc;
}

double kl_gaussian(const GaussianMeasure& nu, const GaussianMeasure& mu, double ridge) {
  check_same_dim(nu, mu);
  SpectralPsd q = mu.cov;
  if (ridge > 0.0) {
    Vector lifted = q.eigenvalues().array() + ridge;
    q = SpectralPsd(std::move(lifted), q.eigenvectors());
  }
  const double floor = 1e-12 * std::max(1.0, q.maxEigenvalue());
  if (q.minEigenvalue() <= floor)
    fail("SingularReference",
         "reference covariance is singular; pass a positive ridge to regularize");

  const Matrix qinv_sqrt = q.apply([](double v) { return 1.0 / std::sqrt(v); });
  const Matrix t = qinv_sqrt * nu.cov.toMatrix() * qinv_sqrt;
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(t));
  const double mean_part = 0.5 * (qinv_sqrt * (nu.mean - mu.mean)).squaredNorm();
  // -1/2 log det_2(I - S) with S = I - T expands to -1/2 sum [(1 - t_k) + log t_k].
  double acc = 0.0;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double tk = eig.eigenvalues(k);
    if (tk <= 0.0) return kInf;
    acc += (1.0 - tk) + std::log(tk);
  }
  return mean_part - 0.5 * acc;
}

double dual_objective(const GaussianMeasure& mu0, const GaussianMeasure& mu1, double eps) {
  const EntropicPlan plan = optimal_plan(mu0, mu1, eps);
  const double tr0 = (mu0.cov.toMatrix() * plan.pot_A.mat()).trace();
  const double tr1 = (mu1.cov.toMatrix() * plan.pot_B.mat()).trace();
  return eps * plan.pot_ab + eps * tr0 + eps * tr1;
}

double schrodinger_residual(const EntropicPlan& plan) {
  const double eps = plan.eps;
  const Index n = plan.mean0.size();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix s0 = plan.cov0.sqrtMatrix();
  const Matrix s1 = plan.cov1.sqrtMatrix();
  const Matrix a_eps = plan.pot_A.mat() - id / eps;
  const Matrix b_eps = plan.pot_B.mat() - id / eps;

  const Matrix g0 = id - 2.0 * (s0 * a_eps * s0);
  const Matrix g1 = id - 2.0 * (s1 * b_eps * s1);
  const SymEig e0 = sym_eig(SymMatrix::fromSymmetric(g0));
  const SymEig e1 = sym_eig(SymMatrix::fromSymmetric(g1));
  if (e0.eigenvalues(n - 1) <= 0.0 || e1.eigenvalues(n - 1) <= 0.0) return kInf;

  const Matrix g0_inv =
      e0.eigenvectors * e0.eigenvalues.cwiseInverse().asDiagonal() * e0.eigenvectors.transpose();
  const Matrix g1_inv =
      e1.eigenvectors * e1.eigenvalues.cwiseInverse().asDiagonal() * e1.eigenvectors.transpose();

  const double res_b = (b_eps + (2.0 / (eps * eps)) * (s0 * g0_inv * s0)).norm();
  const double res_a = (a_eps + (2.0 / (eps * eps)) * (s1 * g1_inv * s1)).norm();
  const double res_det =
      std::abs(e0.eigenvalues.array().log().sum() - e1.eigenvalues.array().log().sum());
  return std::max({res_a, res_b, res_det});
}

double log_alpha(const EntropicPlan& plan, const Vector& x) {
  if (x.size() != plan.mean0.size())
    fail("DimensionMismatch", "point has wrong dimension for the plan");
  const Vector d = x - plan.mean0;
  return d.dot(plan.pot_A.mat() * d) + (2.0 / plan.eps) * d.dot(plan.mean0 - plan.mean1) +
         0.5 * plan.pot_ab;
}

double log_beta(const EntropicPlan& plan, const Vector& y) {
  if (y.size() != plan.mean1.size())
    fail("DimensionMismatch", "point has wrong dimension for the plan");
  const Vector d = y - plan.mean1;
  return d.dot(plan.pot_B.mat() * d) + (2.0 / plan.eps) * d.dot(plan.mean1 - plan.mean0) +
         0.5 * plan.pot_ab;
}

double gaussian_exp_quadratic(const Vector& mean, const SpectralPsd& c, const SymMatrix& m,
                              const Vector& b) {
  if (mean.size() != c.dim() || m.dim() != c.dim() || b.size() != c.dim())
    fail("DimensionMismatch", "gaussian_exp_quadratic arguments disagree on dimension");
  const Matrix sc = c.sqrtMatrix();
  const Matrix t = sc * m.mat() * sc;
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(t));
  double logdet = 0.0;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double gap = 1.0 - eig.eigenvalues(k);
    if (gap <= 1e-12)
      fail("IntegrabilityViolation", "I - C^{1/2} M C^{1/2} is not strictly positive");
    logdet += std::log(gap);
  }
  const Vector w = eig.eigenvectors.transpose() * (sc * b);
  double quad = 0.0;
  for (Index k = 0; k < w.size(); ++k) quad += w(k) * w(k) / (1.0 - eig.eigenvalues(k));
  return std::exp(-0.5 * logdet + 0.5 * quad);
}

namespace {

struct ExtendedSpectrum {
  Vector values;  // eigenvalues of C0^{1/2} X C0^{1/2}, possibly negative
  Matrix vectors;
};

ExtendedSpectrum cross_spectrum_extended(const SpectralPsd& c0, const SymMatrix& x) {
  if (c0.dim() != x.dim())
    fail("DimensionMismatch", "covariance functional arguments disagree on dimension");
  const Matrix s0 = c0.sqrtMatrix();
  SymEig eig = sym_eig(SymMatrix::fromSymmetric(s0 * x.mat() * s0));
  return {std::move(eig.eigenvalues), std::move(eig.eigenvectors)};
}

// m_k = -1 + sqrt(1 + c^2 p_k) over a possibly-negative spectrum; requires
// 1 + c^2 p_k > 0 (the open set Omega of the extended functionals).
Vector extended_m(const Vector& p, double eps) {
  const double c2 = 16.0 / (eps * eps);
  Vector m(p.size());
  for (Index k = 0; k < p.size(); ++k) {
    const double t = c2 * p(k);
    if (1.0 + t <= 0.0)
      fail("DomainViolation", "I + (16/eps^2) C0^{1/2} X C0^{1/2} is not positive");
    m(k) = shifted_sqrt_minus_one(t);
  }
  return m;
}

double logdet_half_shift_vec(const Vector& m) {
  double acc = 0.0;
  for (Index k = 0; k < m.size(); ++k) acc += std::log1p(0.5 * m(k));
  return acc;
}

Vector self_m(const SpectralPsd& c, double eps) {
  const double c2 = 16.0 / (eps * eps);
  Vector m(c.eigenvalues().size());
  for (Index k = 0; k < m.size(); ++k) {
    const double lam = c.eigenvalues()(k);
    m(k) = shifted_sqrt_minus_one(c2 * lam * lam);
  }
  return m;
}

Vector self_m_sym(const SymMatrix& x, double eps) {
  const SymEig eig = sym_eig(x);
  const double c2 = 16.0 / (eps * eps);
  Vector m(eig.eigenvalues.size());
  for (Index k = 0; k < m.size(); ++k) {
    const double lam = eig.eigenvalues(k);
    m(k) = shifted_sqrt_minus_one(c2 * lam * lam);
  }
  return m;
}

}  // namespace

double entropic_ot_cov(const SpectralPsd& c0, const SymMatrix& x, double eps) {
  check_eps(eps);
  const ExtendedSpectrum spec = cross_spectrum_extended(c0, x);
  const Vector m = extended_m(spec.values, eps);
  return x.mat().trace() + c0.trace() - 0.5 * eps * m.sum() +
         0.5 * eps * logdet_half_shift_vec(m);
}

double sinkhorn_cov(const SpectralPsd& c0, const SymMatrix& x, double eps) {
  check_eps(eps);
  const ExtendedSpectrum spec = cross_spectrum_extended(c0, x);
  const Vector m01 = extended_m(spec.values, eps);
  const Vector m00 = self_m(c0, eps);
  const Vector m11 = self_m_sym(x, eps);
  return 0.25 * eps * (m00.sum() - 2.0 * m01.sum() + m11.sum()) +
         0.25 * eps *
             (2.0 * logdet_half_shift_vec(m01) - logdet_half_shift_vec(m00) -
              logdet_half_shift_vec(m11));
}

namespace {

// S0 (I + (I + c^2 S0 X0 S0)^{1/2})^{-1} S0 shared by both derivatives.
Matrix cross_resolvent(const SpectralPsd& c0, const SymMatrix& x0, double eps) {
  const ExtendedSpectrum spec = cross_spectrum_extended(c0, x0);
  const double c2 = 16.0 / (eps * eps);
  Vector inv(spec.values.size());
  for (Index k = 0; k < inv.size(); ++k) {
    const double t = 1.0 + c2 * spec.values(k);
    if (t <= 0.0)
      fail("DomainViolation", "I + (16/eps^2) C0^{1/2} X C0^{1/2} is not positive");
    inv(k) = 1.0 / (1.0 + std::sqrt(t));
  }
  const Matrix k = spec.vectors * inv.asDiagonal() * spec.vectors.transpose();
  const Matrix s0 = c0.sqrtMatrix();
  return s0 * k * s0;
}

}  // namespace

double d_entropic_ot_cov(const SpectralPsd& c0, const SymMatrix& x0, const SymMatrix& dir,
                         double eps) {
  check_eps(eps);
  return dir.mat().trace() -
         (4.0 / eps) * (cross_resolvent(c0, x0, eps) * dir.mat()).trace();
}

double d_sinkhorn_cov(const SpectralPsd& c0, const SymMatrix& x0, const SymMatrix& dir,
                      double eps) {
  check_eps(eps);
  const double c = 4.0 / eps;
  const double cross = (cross_resolvent(c0, x0, eps) * dir.mat()).trace();
  const SymEig eig = sym_eig(x0);
  const double c2 = c * c;
  Vector w(eig.eigenvalues.size());
  for (Index k = 0; k < w.size(); ++k) {
    const double lam = eig.eigenvalues(k);
    w(k) = lam / (1.0 + std::sqrt(1.0 + c2 * lam * lam));
  }
  const Matrix self = eig.eigenvectors * w.asDiagonal() * eig.eigenvectors.transpose();
  return -c * cross + c * (self * dir.mat()).trace();
}

}  // namespace gaussot
