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

#include <string>

#include "gaussot/divergence.hpp"

namespace gaussot {

struct KernelSpec {
  enum class Kind { linear, rbf, polynomial };

  Kind kind = Kind::linear;
  double gamma = 1.0;   // rbf: K(x,y) = exp(-gamma ||x-y||^2)
  int degree = 2;       // polynomial: K(x,y) = (<x,y> + offset)^degree
  double offset = 0.0;

  /// Parses "linear", "rbf:<gamma>", or "poly:<degree>,<offset>".
  static KernelSpec parse(const std::string& text);

  bool operator==(const KernelSpec& other) const;
  std::string describe() const;
};

/// m samples (rows) with the kernel they are to be embedded by.
struct KernelDataset {
  Matrix points;  // m x d
  KernelSpec kernel;

  Index count() const { return points.rows(); }
  void validate() const;
};

/// Cross Gram matrix (K[A,B])_{ij} = K(a_i, b_j).  Both datasets must share
/// the kernel and the sample count.
Matrix gram(const KernelDataset& a, const KernelDataset& b);

/// Entropic OT between the RKHS-embedded empirical Gaussians, written purely
/// in terms of Gram matrices.  For the linear kernel this equals entropic_ot
/// of the empirical mean/covariance pair.
DivergenceReport rkhs_entropic_ot(const KernelDataset& a, const KernelDataset& b, double eps);

/// Sinkhorn divergence on the Gram side; interpolates between the kernelized
/// Wasserstein distance (eps -> 0) and squared kernel MMD (eps -> inf).
DivergenceReport rkhs_sinkhorn(const KernelDataset& a, const KernelDataset& b, double eps);

/// Empirical squared kernel MMD (1/m^2) 1^T (K[X] + K[Y] - 2 K[X,Y]) 1.
double mmd_sq(const KernelDataset& a, const KernelDataset& b);

/// Kernelized squared 2-Wasserstein distance (the eps -> 0 limit).
double kernel_wasserstein(const KernelDataset& a, const KernelDataset& b);

/// Empirical mean and covariance of the raw points; the covariance path that
/// linear-kernel Gram formulas must reproduce.
GaussianMeasure empirical_gaussian(const Matrix& points);

}  // namespace gaussot
