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
#include "privchain/sig.hpp"

#include <sodium.h>

#include "privchain/bytes.hpp"

namespace privchain {

static_assert(crypto_sign_PUBLICKEYBYTES == 32);
static_assert(crypto_sign_SECRETKEYBYTES == 64);
static_assert(crypto_sign_BYTES == 64);
static_assert(crypto_sign_SEEDBYTES == 32);

SigKeyPair sig_keygen(Rng& rng) {
  ensure_sodium();
  std::array<uint8_t, 32> seed{};
  rng.fill(seed);
  SigKeyPair kp;
  crypto_sign_seed_keypair(kp.pub.data(), kp.sec.data(), seed.data());
  return kp;
}

Signature sig_sign(const SigSecretKey& sec, std::span<const uint8_t> msg) {
  ensure_sodium();
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sec.data());
  return sig;
}

bool sig_verify(const SigPublicKey& pub, std::span<const uint8_t> msg, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), pub.data()) == 0;
}

}  // namespace privchain
