/* Copyright 2026 The PrivChain Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace privchain {

/// Source of randomness for key generation, blindings and nonces.
/// Deterministic instances make scenarios and tests reproducible.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  uint64_t next_u64() {
    std::array<uint8_t, 8> b{};
    fill(b);
    uint64_t v = 0;
    for (auto byte : b) v = (v << 8) | byte;
    return v;
  }

  /// Uniform value in [0, bound) via rejection sampling. bound must be > 0.
  uint64_t below(uint64_t bound);
};

/// Wraps the operating system CSPRNG.
class SystemRng final : public Rng {
 public:
  void fill(std::span<uint8_t> out) override;
};

/// Stream rng keyed by a 32-byte seed; identical seeds give identical streams.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(std::span<const uint8_t> seed);
  explicit DeterministicRng(uint64_t seed);
  /// Derives a child stream whose seed binds this stream's seed and a label,
  /// so independent components of a scenario draw from unrelated streams.
  DeterministicRng fork(std::string_view label) const;

  void fill(std::span<uint8_t> out) override;

 private:
  std::array<uint8_t, 32> seed_{};
  uint64_t counter_ = 0;
  std::array<uint8_t, 64> block_{};
  size_t avail_ = 0;
};

}  // namespace privchain
