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

#include "gaussot/gp.hpp"

#include <cmath>

namespace gaussot {

QuadratureGrid QuadratureGrid::trapezoid(const Vector& nodes) {
  QuadratureGrid grid;
  grid.nodes = nodes;
  const Index n = nodes.size();
  grid.weights = Vector::Zero(n);
  if (n == 1) {
    grid.weights(0) = 1.0;
  } else {
    for (Index i = 0; i + 1 < n; ++i) {
      const double h = nodes(i + 1) - nodes(i);
      grid.weights(i) += 0.5 * h;
      grid.weights(i + 1) += 0.5 * h;
    }
  }
  grid.validate();
  return grid;
}

QuadratureGrid QuadratureGrid::uniform(const Vector& nodes) {
  QuadratureGrid grid;
  grid.nodes = nodes;
  const Index n = nodes.size();
  const double span = n > 1 ? nodes(n - 1) - nodes(0) : 1.0;
  grid.weights = Vector::Constant(n, span / static_cast<double>(n));
  grid.validate();
  return grid;
}

void QuadratureGrid::validate() const {
  if (nodes.size() < 1) fail("SchemaError", "grid needs at least one node");
  if (nodes.size() != weights.size())
    fail("SchemaError", "grid nodes and weights disagree in length");
  for (Index i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes(i) < nodes(i + 1)))
      fail("SchemaError", "grid nodes must be strictly increasing");
  for (Index i = 0; i < weights.size(); ++i)
    if (!(weights(i) > 0.0)) fail("SchemaError", "grid weights must be positive");
}

double GpSpec::kernel_value(double s, double t) const {
  switch (kind) {
    case Kind::brownian: return variance * std::min(s, t);
    case Kind::rbf: return variance * std::exp(-gamma * (s - t) * (s - t));
    case Kind::matern12: return variance * std::exp(-std::abs(s - t) / rho);
    case Kind::sampled: break;
  }
  fail("SchemaError", "sampled GP spec has no kernel function");
}

Vector GpSpec::mean_on(const Vector& nodes) const {
  if (mean_sampled) {
    if (mean_sampled->size() != nodes.size())
      fail("SchemaError", "sampled GP mean length does not match the grid");
    return *mean_sampled;
  }
  if (mean_const) return Vector::Constant(nodes.size(), *mean_const);
  return Vector::Zero(nodes.size());
}

Matrix GpSpec::cov_on(const Vector& nodes) const {
  const Index n = nodes.size();
  if (kind == Kind::sampled) {
    if (cov_sampled.rows() != n || cov_sampled.cols() != n)
      fail("SchemaError", "sampled GP covariance does not match the grid size");
    return cov_sampled;
  }
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) k(i, j) = k(j, i) = kernel_value(nodes(i), nodes(j));
  return k;
}

GaussianMeasure discretize_gp(const GpSpec& gp, const QuadratureGrid& grid) {
  grid.validate();
  const Vector wsqrt = grid.weights.cwiseSqrt();
  const Matrix k = gp.cov_on(grid.nodes);
  const Matrix scaled = wsqrt.asDiagonal() * k * wsqrt.asDiagonal();
  const Vector mean = wsqrt.cwiseProduct(gp.mean_on(grid.nodes));
  return GaussianMeasure(mean, psd_project(SymMatrix(scaled)));
}

GpMetric gp_metric_from_string(const std::string& name) {
  if (name == "w2") return GpMetric::w2;
  if (name == "ot") return GpMetric::ot;
  if (name == "sinkhorn") return GpMetric::sinkhorn;
  if (name == "kl") return GpMetric::kl;
  fail("SchemaError", "unknown gp metric '" + name + "'");
}

double gp_divergence(GpMetric metric, const GpSpec& gp1, const GpSpec& gp2,
                     const QuadratureGrid& grid, double eps, double ridge) {
  const GaussianMeasure m1 = discretize_gp(gp1, grid);
  const GaussianMeasure m2 = discretize_gp(gp2, grid);
  switch (metric) {
    case GpMetric::w2: return wasserstein2_sq(m1, m2);
    case GpMetric::ot: return entropic_ot(m1, m2, eps).value;
    case GpMetric::sinkhorn: return sinkhorn_divergence(m1, m2, eps).value;
    case GpMetric::kl: return kl_gaussian(m1, m2, ridge);
  }
  fail("SchemaError", "unreachable gp metric");
}

}  // namespace gaussot
