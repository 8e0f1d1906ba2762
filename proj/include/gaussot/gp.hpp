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

#include <optional>
#include <string>

#include "gaussot/divergence.hpp"

namespace gaussot {

/// Quadrature rule on an interval grid; realizes the reference measure nu of
/// L^2(T, nu) on the sample nodes.
struct QuadratureGrid {
  Vector nodes;    // strictly increasing
  Vector weights;  // positive

  static QuadratureGrid trapezoid(const Vector& nodes);
  /// Equal weights (span / n); useful when nu is taken uniform by fiat.
  static QuadratureGrid uniform(const Vector& nodes);

  void validate() const;
  Index size() const { return nodes.size(); }
};

/// Gaussian process description: either a named covariance kernel with scalar
/// parameters or mean/covariance values sampled on the grid.
struct GpSpec {
  enum class Kind { sampled, brownian, rbf, matern12 };

  Kind kind = Kind::brownian;
  double gamma = 1.0;     // rbf: K(s,t) = variance * exp(-gamma (s-t)^2)
  double rho = 1.0;       // matern12: K(s,t) = variance * exp(-|s-t| / rho)
  double variance = 1.0;  // overall scale for named kernels

  std::optional<Vector> mean_sampled;  // must match the grid size
  std::optional<double> mean_const;
  Matrix cov_sampled;  // kind == sampled only

  double kernel_value(double s, double t) const;
  Vector mean_on(const Vector& nodes) const;
  Matrix cov_on(const Vector& nodes) const;
};

/// Mercer-style discretization GP(m, K) -> N(W^{1/2} m, W^{1/2} K W^{1/2}),
/// so that Euclidean inner products of discretized functions reproduce the
/// quadrature of the L^2(T, nu) inner product.  The discrete trace equals
/// sum_i w_i K(t_i, t_i) exactly.
GaussianMeasure discretize_gp(const GpSpec& gp, const QuadratureGrid& grid);

enum class GpMetric { w2, ot, sinkhorn, kl };

GpMetric gp_metric_from_string(const std::string& name);

/// Divergence between two Gaussian processes through their discretized
/// Gaussian measures on a common grid.  ridge regularizes the reference
/// covariance for the kl metric only (default off).
double gp_divergence(GpMetric metric, const GpSpec& gp1, const GpSpec& gp2,
                     const QuadratureGrid& grid, double eps, double ridge = 0.0);

}  // namespace gaussot
