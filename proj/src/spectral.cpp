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

#include "gaussot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gaussot {

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) fail("NonFiniteEntry", "matrix contains NaN or Inf");
}

// Sorts an Eigen (ascending) eigensystem into descending order.
SymEig sorted_descending(const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  const Index n = es.eigenvalues().size();
  SymEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m, double sym_tol) {
  if (m.rows() != m.cols())
    fail("DimensionMismatch", "symmetric matrix must be square, got " +
                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  check_finite(m);
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol * scale)
    fail("NotSymmetric", "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::fromSymmetric(Matrix m) {
  SymMatrix s;
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

SpectralPsd::SpectralPsd(Vector eigenvalues, Matrix eigenvectors)
    : vals_(std::move(eigenvalues)), vecs_(std::move(eigenvectors)) {}

SpectralPsd SpectralPsd::zero(Index n) {
  return SpectralPsd(Vector::Zero(n), Matrix::Identity(n, n));
}

SpectralPsd SpectralPsd::identity(Index n) {
  return SpectralPsd(Vector::Ones(n), Matrix::Identity(n, n));
}

SpectralPsd SpectralPsd::diagonal(const Vector& d) {
  const Index n = d.size();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return d(a) > d(b); });
  Vector vals(n);
  Matrix vecs = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (d(order[static_cast<size_t>(i)]) < 0.0)
      fail("NotPsd", "diagonal entry is negative");
    vals(i) = d(order[static_cast<size_t>(i)]);
    vecs(order[static_cast<size_t>(i)], i) = 1.0;
  }
  return SpectralPsd(std::move(vals), std::move(vecs));
}

Matrix SpectralPsd::toMatrix() const {
  return vecs_ * vals_.asDiagonal() * vecs_.transpose();
}

SpectralPsd SpectralPsd::sqrt() const {
  return SpectralPsd(vals_.cwiseSqrt(), vecs_);
}

Matrix SpectralPsd::sqrtMatrix() const {
  return vecs_ * vals_.cwiseSqrt().asDiagonal() * vecs_.transpose();
}

Matrix SpectralPsd::pinvSqrtMatrix(double cutoff) const {
  const double floor = cutoff * std::max(maxEigenvalue(), 0.0);
  Vector inv(vals_.size());
  for (Index i = 0; i < vals_.size(); ++i)
    inv(i) = vals_(i) > floor && vals_(i) > 0.0 ? 1.0 / std::sqrt(vals_(i)) : 0.0;
  return vecs_ * inv.asDiagonal() * vecs_.transpose();
}

SymEig sym_eig(const SymMatrix& m) {
  check_finite(m.mat());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  if (es.info() != Eigen::Success)
    fail("ConvergenceFailure", "symmetric eigensolver did not converge");
  return sorted_descending(es);
}

SpectralPsd psd_project(const SymMatrix& m, double psd_tol) {
  SymEig eig = sym_eig(m);
  const double lmax = eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0;
  const double floor = -psd_tol * std::max(1.0, lmax);
  if (eig.eigenvalues.size() && eig.eigenvalues(eig.eigenvalues.size() - 1) < floor)
    fail("NotPsd", "minimum eigenvalue " +
                       std::to_string(eig.eigenvalues(eig.eigenvalues.size() - 1)) +
                       " below PSD tolerance");
  return SpectralPsd(eig.eigenvalues.cwiseMax(0.0), std::move(eig.eigenvectors));
}

SpectralPsd sym_sqrt(const SpectralPsd& c) { return c.sqrt(); }

Vector clip_spectrum(Vector vals, double rel_floor) {
  const double vmax = vals.size() ? std::max(vals.maxCoeff(), 0.0) : 0.0;
  const double floor = rel_floor * vmax;
  for (Index i = 0; i < vals.size(); ++i)
    if (vals(i) < floor) vals(i) = 0.0;
  return vals;
}

Vector cross_spectrum(const SpectralPsd& ci, const SpectralPsd& cj) {
  if (ci.dim() != cj.dim())
    fail("DimensionMismatch", "cross_spectrum requires equal dimensions");
  const Matrix si = ci.sqrtMatrix();
  const Matrix prod = si * cj.toMatrix() * si;
  SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
  return clip_spectrum(std::move(eig.eigenvalues));
}

double shifted_sqrt_minus_one(double t) {
  // -1 + sqrt(1 + t) = t / (1 + sqrt(1 + t)); the ratio form keeps full
  // relative accuracy for |t| << 1.
  return t / (1.0 + std::sqrt(1.0 + t));
}

SpectralPsd m_epsilon(const SpectralPsd& ci, const SpectralPsd& cj, double eps) {
  if (eps <= 0.0) fail("InvalidEpsilon", "eps must be > 0");
  if (ci.dim() != cj.dim())
    fail("DimensionMismatch", "m_epsilon requires equal dimensions");
  const Matrix si = ci.sqrtMatrix();
  const Matrix prod = si * cj.toMatrix() * si;
  SymEig eig = sym_eig(SymMatrix::fromSymmetric(prod));
  const double c2 = 16.0 / (eps * eps);
  Vector vals(eig.eigenvalues.size());
  for (Index k = 0; k < vals.size(); ++k)
    vals(k) = shifted_sqrt_minus_one(c2 * std::max(eig.eigenvalues(k), 0.0));
  return SpectralPsd(std::move(vals), std::move(eig.eigenvectors));
}

double logdet_half_shift(const SpectralPsd& m) {
  double acc = 0.0;
  for (Index k = 0; k < m.eigenvalues().size(); ++k)
    acc += std::log1p(0.5 * m.eigenvalues()(k));
  return acc;
}

}  // namespace gaussot
