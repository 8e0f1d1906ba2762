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

#include <vector>

#include "gaussot/measure.hpp"

namespace gaussot {

struct BarycenterProblem {
  Vector weights;  // positive, summing to 1 within 1e-12
  std::vector<GaussianMeasure> measures;
  double eps = 1.0;
  int max_iter = 1000;
  double tol = 1e-12;
  double damping = 0.0;  // X_{k+1} = (1-d) map(X_k) + d X_k

  void validate() const;
  Index dim() const { return measures.empty() ? 0 : measures.front().dim(); }
  std::size_t count() const { return measures.size(); }
};

enum class BarycenterRegime { trivial_dirac, interior, no_solution, max_iter_reached };

const char* to_string(BarycenterRegime regime);

struct BarycenterResult {
  Vector mean;
  SpectralPsd cov;
  int iterations = 0;
  // Relative trace-norm change ||X_{k+1} - X_k||_tr / (1 + ||X_k||_tr) at exit.
  double residual = 0.0;
  BarycenterRegime regime = BarycenterRegime::interior;
  // Eigendirections of the final iterate that collapsed below 1e-12.
  int collapsed_directions = 0;
};

enum class EntropicConditionRegime { trivial, necessary_ok, necessary_fail };

struct EntropicCondition {
  EntropicConditionRegime regime;
  double lambda_min;  // of 2 sum_i w_i C_i
  double lambda_max;
  // lambda_min <= eps < lambda_max: the necessary condition fails in some
  // directions only; solvers still attempt the iteration and flag collapses.
  bool mixed_spectrum;
};

/// Weighted Euclidean mean of the measure means.
Vector barycentric_mean(const BarycenterProblem& problem);

/// Case split of the entropic barycenter existence conditions: trivial when
/// eps I >= 2 sum w_i C_i (barycenter is the Dirac at the mean), necessary_ok
/// when 0 < eps I < 2 sum w_i C_i, necessary_fail for a mixed spectrum.
EntropicCondition entropic_condition(const BarycenterProblem& problem);

/// Entropic barycenter covariance by iterating
/// X <- (eps/4) sum w_i [-I + (I + (16/eps^2) X^{1/2} C_i X^{1/2})^{1/2}]
/// from the projected start sum w_i C_i - (eps/2) I.
BarycenterResult entropic_barycenter(const BarycenterProblem& problem);

/// Sinkhorn barycenter covariance by iterating the sandwich map whose fixed
/// point is unique in both singular and nonsingular settings.  The G-form
/// equation is used only as a residual check, never iterated: it has the
/// trivial solution and uncountably many singular rank-one fixed points.
BarycenterResult sinkhorn_barycenter(const BarycenterProblem& problem);

/// Unregularized barycenter: X <- sum w_i (X^{1/2} C_i X^{1/2})^{1/2} from
/// sum w_i C_i.  Route for eps == 0 requests.
BarycenterResult exact_barycenter(const BarycenterProblem& problem);

/// One-dimensional entropic barycenter: 0 when eps >= 2 sum w_i sigma_i^2,
/// otherwise the unique positive root of
/// x = (eps/4) sum w_i [-1 + sqrt(1 + (16/eps^2) sigma_i^2 x)],
/// solved by safeguarded bisection/Newton to residual <= 1e-14.
double barycenter_1d_entropic(const Vector& sigmas_sq, const Vector& weights, double eps);

enum class FixedPointKind { exact, entropic, sinkhorn };

/// Rank-one singular fixed point x_u (u x u) of the requested barycenter
/// fixed-point map along the unit direction u.  Throws ConditionViolated when
/// the applicability inequality for the chosen kind fails.
SpectralPsd singular_fixed_point(FixedPointKind kind, const BarycenterProblem& problem,
                                 const Vector& u);

// Residual probes shared by tests and the validation harness.
double entropic_first_order_residual(const BarycenterProblem& problem, const SpectralPsd& x);
double entropic_g_residual(const BarycenterProblem& problem, const SpectralPsd& x);
double sinkhorn_f_residual(const BarycenterProblem& problem, const SpectralPsd& x);
double sinkhorn_g_residual(const BarycenterProblem& problem, const SpectralPsd& x);
double exact_fixed_point_residual(const BarycenterProblem& problem, const SpectralPsd& x);

}  // namespace gaussot
