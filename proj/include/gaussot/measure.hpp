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

#include "gaussot/spectral.hpp"

namespace gaussot {

/// Gaussian measure N(mean, cov) on R^n.  The covariance is held in spectral
/// form; singular covariances (Diracs included) are first-class.
struct GaussianMeasure {
  Vector mean;
  SpectralPsd cov;

  GaussianMeasure(Vector m, SpectralPsd c) : mean(std::move(m)), cov(std::move(c)) {
    if (mean.size() != cov.dim())
      fail("DimensionMismatch", "mean length does not match covariance dimension");
  }

  static GaussianMeasure fromMoments(Vector mean, const SymMatrix& cov,
                                     double psd_tol = tol::psd) {
    return GaussianMeasure(std::move(mean), psd_project(cov, psd_tol));
  }

  /// Point mass at m.
  static GaussianMeasure dirac(Vector m) {
    const Index n = m.size();
    return GaussianMeasure(std::move(m), SpectralPsd::zero(n));
  }

  Index dim() const noexcept { return mean.size(); }
};

inline void check_same_dim(const GaussianMeasure& a, const GaussianMeasure& b) {
  if (a.dim() != b.dim())
    fail("DimensionMismatch", "measures have dimensions " + std::to_string(a.dim()) +
                                  " and " + std::to_string(b.dim()));
}

}  // namespace gaussot
