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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privchain/bytes.hpp"
#include "privchain/rng.hpp"

namespace privchain {

class Ledger;

/// Symmetric key that hides constituent commodity identifiers from ledger
/// readers. Distributed out of band to authorized verifiers only; never
/// written to the ledger itself.
struct TradeFlowKey {
  std::string key_id;
  std::array<uint8_t, 32> key{};
};

TradeFlowKey make_tradeflow_key(std::string_view key_id, Rng& rng);

/// Static keyring configuration: one line per key, "<key_id> <hex key>".
struct Keyring {
  std::vector<TradeFlowKey> keys;

  const TradeFlowKey* find(std::string_view key_id) const;

  /// Parses keyring text. `origin` names the source in error messages.
  static Keyring parse(std::string_view text, std::string_view origin = "keyring");
  static Keyring load_file(const std::string& path);
  std::string to_text() const;
  void save_file(const std::string& path) const;
};

/// Authenticated ciphertext over the canonical encoding of an identifier
/// sequence; the associated data binds the enclosing final product id, so a
/// blob cannot be transplanted between products.
struct ConstituentBlob {
  std::string key_id;
  std::array<uint8_t, 24> nonce{};
  Bytes ciphertext;  // includes the authentication tag

  Bytes to_bytes() const;
  static std::optional<ConstituentBlob> from_bytes(std::span<const uint8_t> in);
};

/// Encrypts the constituent ids under a fresh random nonce. Throws
/// kInvalidParameter on an empty id list.
ConstituentBlob encrypt_constituents(const TradeFlowKey& key,
                                     std::span<const std::string> ids,
                                     std::string_view final_product_id, Rng& rng);

/// Decrypts and authenticates a blob. Throws kAuthFailure on a key mismatch,
/// tag failure, or wrong product binding — never returns partial output.
std::vector<std::string> decrypt_constituents(const TradeFlowKey& key,
                                              const ConstituentBlob& blob,
                                              std::string_view final_product_id);

/// One provenance branch of an audited product: the constituent commodity,
/// the transactions that created and traded it, and its verified region.
struct AuditBranch {
  std::string commodity_id;
  Digest32 create_tx_id{};
  Digest32 trade_tx_id{};
  std::string region;
};

struct AuditTrace {
  std::string final_product_id;
  std::vector<AuditBranch> branches;
};

/// Authorized reversal of the hiding: decrypts the product's constituents and
/// walks each one back through its trade and creation. Throws kUnknownProduct,
/// kAuthFailure (wrong key), or kUnknownConstituent (ledger lacks the trail).
AuditTrace audit_trace(const TradeFlowKey& key, const Ledger& ledger,
                       std::string_view final_product_id);

}  // namespace privchain
