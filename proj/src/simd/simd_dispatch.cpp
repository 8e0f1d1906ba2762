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

#include <cstdlib>
#include <cstring>

#include "gaussot/simd.hpp"

namespace gaussot::simd {
namespace {

const Kernels& select() {
  const char* mode = std::getenv("GS_SIMD");
  if (mode && std::strcmp(mode, "scalar") == 0) return scalar_kernels();
  if (mode && std::strcmp(mode, "avx2") == 0) {
    if (const Kernels* k = avx2_kernels()) return *k;
    return scalar_kernels();
  }
  if (const Kernels* k = avx2_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& kernels() {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace gaussot::simd
