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

// Ed25519 party signatures (devices, sellers, buyers, banks). These are the
// conventional-authentication layer of the protocol, distinct from the
// pairing-based digit signatures inside the zero-knowledge proofs.

#include <array>
#include <span>

#include "privchain/rng.hpp"

namespace privchain {

using SigPublicKey = std::array<uint8_t, 32>;
using SigSecretKey = std::array<uint8_t, 64>;
using Signature = std::array<uint8_t, 64>;

struct SigKeyPair {
  SigPublicKey pub{};
  SigSecretKey sec{};
};

/// Key generation from the caller's rng (deterministic rng -> reproducible
/// keys, which scenario runs rely on).
SigKeyPair sig_keygen(Rng& rng);

Signature sig_sign(const SigSecretKey& sec, std::span<const uint8_t> msg);
bool sig_verify(const SigPublicKey& pub, std::span<const uint8_t> msg, const Signature& sig);

}  // namespace privchain
