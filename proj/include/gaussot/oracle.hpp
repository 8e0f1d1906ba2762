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

#include <cstdint>
#include <functional>

#include "gaussot/divergence.hpp"

namespace gaussot::oracle {

/// Discrete measure on explicit nodes (d <= 2); masses sum to 1.
struct GridMeasure {
  Matrix nodes;   // p x d
  Vector masses;  // nonnegative, sum 1 within 1e-12

  void validate() const;
  Index count() const { return nodes.rows(); }
  Index dim() const { return nodes.cols(); }
};

struct IpfpControls {
  double grid_halfwidth_sigmas = 6.0;
  int points_per_dim = 0;  // 0 selects the default: 400 in 1-D, 80 in 2-D
  int max_iter = 10000;
  double marginal_tol = 1e-10;
};

/// Truncates a Gaussian onto a tensor grid; masses are proportional to the
/// density at the nodes.  A zero-variance direction collapses to a single
/// node.  Throws DimensionTooLarge beyond d = 2.
GridMeasure discretize_gaussian(const GaussianMeasure& mu, const IpfpControls& controls);

/// Entropic OT on grids by log-domain IPFP with cost ||x - y||^2: alternates
/// the two Schrodinger marginal conditions on the dual potentials until both
/// coupling marginals match in total variation.  Returns
/// E_gamma[c] + eps KL(gamma || mu0 x mu1) at the converged coupling; throws
/// NoConvergence after max_iter.
double ipfp_entropic_ot(const GridMeasure& mu0, const GridMeasure& mu1, double eps,
                        const IpfpControls& controls);

struct McEstimate {
  double estimate;
  double std_error;
};

/// Monte Carlo estimate of the transport cost of a plan by sampling the joint
/// Gaussian through the factorized block covariance.  Deterministic for a
/// fixed (samples, seed).
McEstimate mc_transport_cost(const EntropicPlan& plan, std::int64_t samples, std::uint64_t seed);

/// Central finite difference (F(X0 + h D) - F(X0 - h D)) / (2h).  Failures or
/// non-finite values of F surface as EvaluationFailure.
double fd_directional(const std::function<double(const Matrix&)>& f, const SymMatrix& x0,
                      const SymMatrix& dir, double h);

/// Second central difference (F(X0 + h D) - 2 F(X0) + F(X0 - h D)) / h^2.
double fd_second(const std::function<double(const Matrix&)>& f, const SymMatrix& x0,
                 const SymMatrix& dir, double h);

}  // namespace gaussot::oracle
