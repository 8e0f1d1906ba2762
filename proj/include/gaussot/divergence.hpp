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

#pragma once

#include "gaussot/measure.hpp"

namespace gaussot {

/// Decomposed divergence value: value = mean_term + trace_terms + logdet_term.
struct DivergenceReport {
  double value = 0.0;
  double mean_term = 0.0;
  double trace_terms = 0.0;
  double logdet_term = 0.0;
  double eps = 0.0;
};

/// Optimal entropic coupling of two Gaussians: the joint Gaussian with block
/// covariance [[C0, C_XY], [C_XY^T, C1]] plus the potential parameters.  Only
/// the sum of the scalar potential constants is identified; pot_ab stores it,
/// and the canonical split a = b = pot_ab/2 is used whenever both are needed.
struct EntropicPlan {
  double eps;
  Vector mean0, mean1;
  SpectralPsd cov0, cov1;
  Matrix cross_cov;
  SymMatrix pot_A, pot_B;
  double pot_ab;
};

/// Exact squared 2-Wasserstein distance
/// ||m0-m1||^2 + Tr C0 + Tr C1 - 2 Tr (C1^{1/2} C0 C1^{1/2})^{1/2}.
double wasserstein2_sq(const GaussianMeasure& mu0, const GaussianMeasure& mu1);
DivergenceReport wasserstein2_report(const GaussianMeasure& mu0, const GaussianMeasure& mu1);

/// Entropic optimal transport value for the squared-distance cost.
DivergenceReport entropic_ot(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                             double eps);

/// Algebraically equal route through Tr[C0^{1/2} C1 C0^{1/2} - L]^{1/2} with
/// L = (eps^2/8) M; evaluated through a separate dense eigensolve so the two
/// paths genuinely cross-check each other.
DivergenceReport entropic_ot_equiv(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                                   double eps);

/// Debiased Sinkhorn divergence; nonnegative and zero only at equal inputs.
DivergenceReport sinkhorn_divergence(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                                     double eps);

EntropicPlan optimal_plan(const GaussianMeasure& mu0, const GaussianMeasure& mu1,
                          double eps);

/// Expected squared distance under the plan:
/// ||m0-m1||^2 + Tr C0 + Tr C1 - 2 Tr C_XY.
double transport_cost(const EntropicPlan& plan);

/// KL(plan || product of marginals) = -1/2 log det(I - V^T V) with
/// C_XY = C0^{1/2} V C1^{1/2}; V is recovered with pseudo-inverse square
/// roots restricted to the marginal ranges.
double plan_kl(const EntropicPlan& plan);

/// KL(nu || mu) for Gaussians; mu's covariance must be nonsingular (add
/// ridge > 0 to regularize it first).  Returns +inf when nu's covariance is
/// singular, since the measures are then mutually singular at finite n.
double kl_gaussian(const GaussianMeasure& nu, const GaussianMeasure& mu, double ridge = 0.0);

/// Entropy-Kantorovich dual value eps*(a+b) + eps*Tr(C0 A) + eps*Tr(C1 B);
/// attains the primal entropic OT value.
double dual_objective(const GaussianMeasure& mu0, const GaussianMeasure& mu1, double eps);

/// Largest residual of the Schrodinger fixed-point identities for the plan's
/// potentials; ~0 for plans produced by optimal_plan, large for perturbed
/// potentials.  Returns +inf when a perturbation destroys positivity of
/// I - 2 C^{1/2} A_eps C^{1/2}.
double schrodinger_residual(const EntropicPlan& plan);

// Log potential functions of the plan density
// d gamma / d(mu0 x mu1) = alpha(x) beta(y) exp(-||x-y||^2 / eps).
// Only the product alpha * beta is identified; the canonical split puts
// pot_ab / 2 into each factor.
double log_alpha(const EntropicPlan& plan, const Vector& x);
double log_beta(const EntropicPlan& plan, const Vector& y);

/// E exp(1/2 <M(y-m), y-m> + <b, y-m>) under N(m, C); throws
/// IntegrabilityViolation unless I - C^{1/2} M C^{1/2} is strictly positive.
double gaussian_exp_quadratic(const Vector& mean, const SpectralPsd& c, const SymMatrix& m,
                              const Vector& b);

// Centered covariance functionals X -> OT_eps(N(0,C0), N(0,X)) and the
// Sinkhorn counterpart, extended to the open set
// { X symmetric : I + (16/eps^2) C0^{1/2} X C0^{1/2} > 0 } so that
// finite-difference probes at X0 +/- h*D stay evaluable.  Throws
// DomainViolation outside the set.
double entropic_ot_cov(const SpectralPsd& c0, const SymMatrix& x, double eps);
double sinkhorn_cov(const SpectralPsd& c0, const SymMatrix& x, double eps);

// Directional Frechet derivatives of the two functionals at x0 along dir.
double d_entropic_ot_cov(const SpectralPsd& c0, const SymMatrix& x0, const SymMatrix& dir,
                         double eps);
double d_sinkhorn_cov(const SpectralPsd& c0, const SymMatrix& x0, const SymMatrix& dir,
                      double eps);

}  // namespace gaussot
