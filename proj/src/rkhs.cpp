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

#include "gaussot/rkhs.hpp"

#include <cmath>
#include <vector>

#include "gaussot/simd.hpp"

namespace gaussot {

namespace {

void check_pair(const KernelDataset& a, const KernelDataset& b) {
  a.validate();
  b.validate();
  if (!(a.kernel == b.kernel))
    fail("KernelMismatch", "datasets use different kernels: " + a.kernel.describe() +
                               " vs " + b.kernel.describe());
  if (a.count() != b.count())
    fail("SampleCountMismatch", "datasets have " + std::to_string(a.count()) + " and " +
                                    std::to_string(b.count()) + " samples");
}

// J K J without materializing the centering matrix.
Matrix centered(const Matrix& k) {
  const double m = static_cast<double>(k.rows());
  const Vector row_mean = k.rowwise().mean();
  const Vector col_mean = k.colwise().mean();
  const double grand = k.sum() / (m * m);
  return k - row_mean.replicate(1, k.cols()) -
         col_mean.transpose().replicate(k.rows(), 1) +
         Matrix::Constant(k.rows(), k.cols(), grand);
}

// Eigenvalues of (16/(eps^2 m^2)) J K[X,Y] J K[Y,X] J mapped through
// t -> -1 + sqrt(1 + t); the spectrum comes from the singular values of the
// centered cross Gram, which is nonnegative by construction.
Vector cross_m(const Matrix& kxy, double eps) {
  const double m = static_cast<double>(kxy.rows());
  const double scale = 16.0 / (eps * eps * m * m);
  Eigen::JacobiSVD<Matrix> svd(centered(kxy));
  Vector out(svd.singularValues().size());
  for (Index j = 0; j < out.size(); ++j) {
    const double s = svd.singularValues()(j);
    out(j) = shifted_sqrt_minus_one(scale * s * s);
  }
  return out;
}

// Same map over the spectrum of (16/(eps^2 m^2)) (J K J)^2 for a self Gram.
Vector self_m(const Matrix& k, double eps) {
  const double m = static_cast<double>(k.rows());
  const double scale = 16.0 / (eps * eps * m * m);
  const SymEig eig = sym_eig(SymMatrix::fromSymmetric(centered(k)));
  Vector out(eig.eigenvalues.size());
  for (Index j = 0; j < out.size(); ++j) {
    const double lam = std::max(eig.eigenvalues(j), 0.0);
    out(j) = shifted_sqrt_minus_one(scale * lam * lam);
  }
  return out;
}

double log1p_half_sum(const Vector& m) {
  double acc = 0.0;
  for (Index j = 0; j < m.size(); ++j) acc += std::log1p(0.5 * m(j));
  return acc;
}

double mmd_term(const Matrix& kx, const Matrix& ky, const Matrix& kxy) {
  const double m = static_cast<double>(kx.rows());
  return (kx.sum() + ky.sum() - 2.0 * kxy.sum()) / (m * m);
}

// (1/m) Tr(K J) = Tr(K)/m - 1^T K 1 / m^2, the total embedded variance.
double centered_trace(const Matrix& k) {
  const double m = static_cast<double>(k.rows());
  return k.trace() / m - k.sum() / (m * m);
}

}  // namespace

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail("SchemaError", "invalid " + what + " '" + text + "'");
  }
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& text) {
  KernelSpec spec;
  if (text == "linear") {
    spec.kind = Kind::linear;
    return spec;
  }
  if (text.rfind("rbf:", 0) == 0) {
    spec.kind = Kind::rbf;
    spec.gamma = parse_number(text.substr(4), "rbf gamma");
    if (!(spec.gamma > 0.0)) fail("SchemaError", "rbf gamma must be > 0");
    return spec;
  }
  if (text.rfind("poly:", 0) == 0) {
    const std::string body = text.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos) fail("SchemaError", "expected poly:<degree>,<offset>");
    spec.kind = Kind::polynomial;
    const double degree = parse_number(body.substr(0, comma), "polynomial degree");
    spec.degree = static_cast<int>(degree);
    spec.offset = parse_number(body.substr(comma + 1), "polynomial offset");
    if (spec.degree < 1 || degree != spec.degree)
      fail("SchemaError", "polynomial degree must be an integer >= 1");
    if (spec.offset < 0.0) fail("SchemaError", "polynomial offset must be >= 0");
    return spec;
  }
  fail("SchemaError", "unknown kernel '" + text + "'");
}

bool KernelSpec::operator==(const KernelSpec& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::linear: return true;
    case Kind::rbf: return gamma == other.gamma;
    case Kind::polynomial: return degree == other.degree && offset == other.offset;
  }
  return false;
}

std::string KernelSpec::describe() const {
  switch (kind) {
    case Kind::linear: return "linear";
    case Kind::rbf: return "rbf:" + std::to_string(gamma);
    case Kind::polynomial:
      return "poly:" + std::to_string(degree) + "," + std::to_string(offset);
  }
  return "?";
}

void KernelDataset::validate() const {
  if (points.rows() < 1) fail("SchemaError", "dataset needs at least one sample");
  if (!points.allFinite()) fail("NonFiniteEntry", "dataset contains NaN or Inf");
}

Matrix gram(const KernelDataset& a, const KernelDataset& b) {
  check_pair(a, b);
  const Index m = a.count();
  switch (a.kernel.kind) {
    case KernelSpec::Kind::linear:
      return a.points * b.points.transpose();
    case KernelSpec::Kind::rbf: {
      const Vector na = a.points.rowwise().squaredNorm();
      const Vector nb = b.points.rowwise().squaredNorm();
      const Matrix d2 = na.replicate(1, m) + nb.transpose().replicate(m, 1) -
                        2.0 * (a.points * b.points.transpose());
      Matrix out(m, m);
      for (Index j = 0; j < m; ++j) {
        const Vector col = -a.kernel.gamma * d2.col(j).cwiseMax(0.0);
        simd::kernels().exp_array(col.data(), out.col(j).data(), static_cast<size_t>(m));
      }
      return out;
    }
    case KernelSpec::Kind::polynomial: {
      Matrix base = (a.points * b.points.transpose()).array() + a.kernel.offset;
      Matrix out = Matrix::Ones(m, m);
      for (int k = 0; k < a.kernel.degree; ++k) out = out.cwiseProduct(base);
      return out;
    }
  }
  fail("SchemaError", "unreachable kernel kind");
}

DivergenceReport rkhs_entropic_ot(const KernelDataset& a, const KernelDataset& b, double eps) {
  check_pair(a, b);
  if (!(eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  const Matrix kx = gram(a, a);
  const Matrix ky = gram(b, b);
  const Matrix kxy = gram(a, b);
  const Vector m01 = cross_m(kxy, eps);

  DivergenceReport r;
  r.eps = eps;
  r.mean_term = mmd_term(kx, ky, kxy);
  r.trace_terms = centered_trace(kx) + centered_trace(ky) - 0.5 * eps * m01.sum();
  r.logdet_term = 0.5 * eps * log1p_half_sum(m01);
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

DivergenceReport rkhs_sinkhorn(const KernelDataset& a, const KernelDataset& b, double eps) {
  check_pair(a, b);
  if (!(eps > 0.0)) fail("InvalidEpsilon", "eps must be > 0");
  const Matrix kx = gram(a, a);
  const Matrix ky = gram(b, b);
  const Matrix kxy = gram(a, b);
  const Vector m01 = cross_m(kxy, eps);
  const Vector m00 = self_m(kx, eps);
  const Vector m11 = self_m(ky, eps);

  DivergenceReport r;
  r.eps = eps;
  r.mean_term = mmd_term(kx, ky, kxy);
  r.trace_terms = 0.25 * eps * (m00.sum() + m11.sum()) - 0.5 * eps * m01.sum();
  r.logdet_term = 0.5 * eps * log1p_half_sum(m01) - 0.25 * eps * log1p_half_sum(m00) -
                  0.25 * eps * log1p_half_sum(m11);
  r.value = r.mean_term + r.trace_terms + r.logdet_term;
  return r;
}

double mmd_sq(const KernelDataset& a, const KernelDataset& b) {
  check_pair(a, b);
  return mmd_term(gram(a, a), gram(b, b), gram(a, b));
}

double kernel_wasserstein(const KernelDataset& a, const KernelDataset& b) {
  check_pair(a, b);
  const Matrix kx = gram(a, a);
  const Matrix ky = gram(b, b);
  const Matrix kxy = gram(a, b);
  const double m = static_cast<double>(kx.rows());
  Eigen::JacobiSVD<Matrix> svd(centered(kxy));
  return mmd_term(kx, ky, kxy) + centered_trace(kx) + centered_trace(ky) -
         (2.0 / m) * svd.singularValues().sum();
}

GaussianMeasure empirical_gaussian(const Matrix& points) {
  const double m = static_cast<double>(points.rows());
  const Vector mean = points.colwise().mean();
  const Matrix centered_pts = points.rowwise() - mean.transpose();
  const Matrix cov = (centered_pts.transpose() * centered_pts) / m;
  return GaussianMeasure::fromMoments(mean, SymMatrix::fromSymmetric(cov));
}

}  // namespace gaussot
