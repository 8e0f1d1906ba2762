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

#include <array>
#include <cmath>
#include <cstdint>

namespace gaussot {

/// Philox4x32-10 counter-based generator.  Output is a pure function of
/// (key, counter), so every consumer seeds explicitly and streams can be
/// indexed at random without shared state.
class Philox {
 public:
  explicit Philox(uint64_t seed)
      : key0_(static_cast<uint32_t>(seed)), key1_(static_cast<uint32_t>(seed >> 32)) {}

  /// One 128-bit block for counter (ctr_lo, ctr_hi).
  std::array<uint32_t, 4> block(uint64_t ctr_lo, uint64_t ctr_hi) const {
    uint32_t x0 = static_cast<uint32_t>(ctr_lo);
    uint32_t x1 = static_cast<uint32_t>(ctr_lo >> 32);
    uint32_t x2 = static_cast<uint32_t>(ctr_hi);
    uint32_t x3 = static_cast<uint32_t>(ctr_hi >> 32);
    uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = kMul0 * static_cast<uint64_t>(x0);
      const uint64_t p1 = kMul1 * static_cast<uint64_t>(x2);
      const uint32_t lo0 = static_cast<uint32_t>(p0), hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1), hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t y0 = hi1 ^ x1 ^ k0;
      const uint32_t y1 = lo1;
      const uint32_t y2 = hi0 ^ x3 ^ k1;
      const uint32_t y3 = lo0;
      x0 = y0; x1 = y1; x2 = y2; x3 = y3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
  }

  /// Two uniforms in (0, 1] from one block.
  std::array<double, 2> uniform2(uint64_t ctr_lo, uint64_t ctr_hi) const {
    const auto b = block(ctr_lo, ctr_hi);
    const uint64_t u0 = (static_cast<uint64_t>(b[0]) << 32) | b[1];
    const uint64_t u1 = (static_cast<uint64_t>(b[2]) << 32) | b[3];
    return {to_unit(u0), to_unit(u1)};
  }

  /// Two standard normals (Box-Muller) from one block.
  std::array<double, 2> normal2(uint64_t ctr_lo, uint64_t ctr_hi) const {
    const auto u = uniform2(ctr_lo, ctr_hi);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double theta = 2.0 * kPi * u[1];
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  static double to_unit(uint64_t bits) {
    // 53-bit mantissa, shifted into (0, 1] so log() stays finite.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
  }

  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr double kPi = 3.14159265358979323846;

  uint32_t key0_;
  uint32_t key1_;
};

/// Sequential convenience stream over a Philox key.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed, uint64_t stream = 0)
      : gen_(seed), hi_(stream), next_(0), have_spare_(false), spare_(0.0) {}

  double uniform() {
    const auto u = gen_.uniform2(next_++, hi_);
    return u[0];
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto z = gen_.normal2(next_++, hi_);
    spare_ = z[1];
    have_spare_ = true;
    return z[0];
  }

 private:
  Philox gen_;
  uint64_t hi_;
  uint64_t next_;
  bool have_spare_;
  double spare_;
};

}  // namespace gaussot
