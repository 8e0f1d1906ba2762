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
#include <string>
#include <vector>

namespace gaussot {

struct CheckResult {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

/// Full oracle-vs-closed-form suite: IPFP grids against the closed forms,
/// Monte Carlo transport cost, finite-difference derivatives, plan/dual
/// consistency, and the adjoint-switch identity.  Deterministic given the
/// seed (which drives the Monte Carlo check); every residual is reported
/// with its tolerance.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed = 42);

}  // namespace gaussot
