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

#include <Eigen/Dense>

#include "gaussot/error.hpp"

namespace gaussot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Relative asymmetry accepted before a matrix is rejected as non-symmetric.
inline constexpr double sym = 1e-8;
// Relative eigenvalue floor below which a matrix is rejected as indefinite.
inline constexpr double psd = 1e-10;
// Relative spectral reconstruction error budget for eigendecompositions.
inline constexpr double recon = 1e-12;
// Relative cutoff for pseudo-inverses of covariance square roots.
inline constexpr double pinv = 1e-12;
}  // namespace tol

/// Symmetric real matrix.  The stored form is exactly (M + M^T)/2; inputs
/// whose asymmetry exceeds sym_tol * (1 + max|entry|) are rejected.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m, double sym_tol = tol::sym);

  /// Wraps a matrix that is symmetric by construction, skipping the check.
  static SymMatrix fromSymmetric(Matrix m);

  const Matrix& mat() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  SymMatrix() = default;
  Matrix m_;
};

/// Plain eigendecomposition of a symmetric matrix; eigenvalues may be
/// negative.  Eigenvalues are sorted descending, eigenvectors are the
/// matching columns of an orthogonal matrix.
struct SymEig {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Spectral factorization of a positive semidefinite matrix: eigenvalues
/// sorted descending and all >= 0 (negative noise clipped by psd_project).
/// Backbone for every matrix function in the library.
class SpectralPsd {
 public:
  SpectralPsd() = default;  // empty (dimension 0)
  SpectralPsd(Vector eigenvalues, Matrix eigenvectors);

  static SpectralPsd zero(Index n);
  static SpectralPsd identity(Index n);
  /// Diagonal PSD matrix with the given entries (sorted internally).
  static SpectralPsd diagonal(const Vector& d);

  Index dim() const noexcept { return vecs_.rows(); }
  const Vector& eigenvalues() const noexcept { return vals_; }
  const Matrix& eigenvectors() const noexcept { return vecs_; }

  double trace() const { return vals_.sum(); }
  double maxEigenvalue() const { return vals_.size() ? vals_(0) : 0.0; }
  double minEigenvalue() const { return vals_.size() ? vals_(vals_.size() - 1) : 0.0; }

  /// V diag(lambda) V^T.
  Matrix toMatrix() const;
  /// V diag(f(lambda)) V^T for an arbitrary spectral map.
  template <typename F>
  Matrix apply(F&& f) const {
    Vector mapped(vals_.size());
    for (Index i = 0; i < vals_.size(); ++i) mapped(i) = f(vals_(i));
    return vecs_ * mapped.asDiagonal() * vecs_.transpose();
  }

  /// Principal square root as a factorization (sqrt of each eigenvalue).
  SpectralPsd sqrt() const;
  Matrix sqrtMatrix() const;
  /// Pseudo-inverse of the square root, cutting eigenvalues below
  /// cutoff * max eigenvalue.
  Matrix pinvSqrtMatrix(double cutoff = tol::pinv) const;

 private:
  Vector vals_;
  Matrix vecs_;
};

/// Eigendecomposition of a symmetric matrix (values may be negative).
/// Throws NonFiniteEntry for NaN/Inf input and ConvergenceFailure if the
/// underlying solver does not converge.
SymEig sym_eig(const SymMatrix& m);

/// Projects a nearly-PSD symmetric matrix onto the PSD cone by clipping
/// negative eigenvalues.  Throws NotPsd when the most negative eigenvalue is
/// below -psd_tol * max(1, lambda_max).
SpectralPsd psd_project(const SymMatrix& m, double psd_tol = tol::psd);

/// Principal matrix square root via the spectral factorization.
SpectralPsd sym_sqrt(const SpectralPsd& c);

/// Eigenvalues of Ci^{1/2} Cj Ci^{1/2}, clipped to >= 0, sorted descending.
/// The nonzero part is invariant under swapping the arguments.
Vector cross_spectrum(const SpectralPsd& ci, const SpectralPsd& cj);

/// The central operator block -I + (I + (16/eps^2) Ci^{1/2} Cj Ci^{1/2})^{1/2}.
/// Computed through the equivalent form t / (1 + sqrt(1 + t)) per eigenvalue,
/// which is exact for t = 0 and avoids cancellation for small t.
SpectralPsd m_epsilon(const SpectralPsd& ci, const SpectralPsd& cj, double eps);

/// log det(I + M/2) = sum_k log(1 + m_k/2) from the eigenvalues of a PSD M.
/// Nonnegative, and zero exactly when M = 0.
double logdet_half_shift(const SpectralPsd& m);

/// Stable scalar map t -> -1 + sqrt(1 + t) for t >= -1.
double shifted_sqrt_minus_one(double t);

/// Clamps negative entries and entries below rel_floor * max to exactly 0.
/// Square-root spectral maps amplify eigensolver noise at zero modes
/// (sqrt(1e-16) ~ 1e-8); sub-floor eigenvalues of PSD products are exact
/// zeros of the underlying formulas and must be treated as such.
Vector clip_spectrum(Vector vals, double rel_floor = 1e-13);

}  // namespace gaussot
