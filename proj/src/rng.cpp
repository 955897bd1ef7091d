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
#include "privchain/rng.hpp"

#include <sodium.h>

#include <cstring>

#include "privchain/bytes.hpp"

namespace privchain {

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) return 0;
  // Rejection sampling to kill modulo bias.
  uint64_t limit = ~0ull - (~0ull % bound);
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

void SystemRng::fill(std::span<uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

DeterministicRng::DeterministicRng(std::span<const uint8_t> seed) {
  ensure_sodium();
  ByteWriter w;
  w.str("privchain.drbg.v1");
  w.bytes(seed);
  auto h = sha512(w.data());
  std::memcpy(seed_.data(), h.data(), 32);
}

DeterministicRng::DeterministicRng(uint64_t seed) {
  ensure_sodium();
  std::array<uint8_t, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(seed >> (8 * (7 - i)));
  ByteWriter w;
  w.str("privchain.drbg.v1");
  w.bytes(b);
  auto h = sha512(w.data());
  std::memcpy(seed_.data(), h.data(), 32);
}

DeterministicRng DeterministicRng::fork(std::string_view label) const {
  ByteWriter w;
  w.str("privchain.drbg.fork.v1");
  w.bytes(seed_);
  w.str(label);
  auto h = sha512(w.data());
  return DeterministicRng(std::span<const uint8_t>(h.data(), 32));
}

void DeterministicRng::fill(std::span<uint8_t> out) {
  size_t pos = 0;
  while (pos < out.size()) {
    if (avail_ == 0) {
      ByteWriter w;
      w.raw(seed_);
      w.u64(counter_++);
      block_ = sha512(w.data());
      avail_ = block_.size();
    }
    size_t take = std::min(avail_, out.size() - pos);
    std::memcpy(out.data() + pos, block_.data() + (block_.size() - avail_), take);
    avail_ -= take;
    pos += take;
  }
}

}  // namespace privchain
