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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privchain/bytes.hpp"
#include "privchain/group_crypto.hpp"
#include "privchain/ledger.hpp"
#include "privchain/rng.hpp"

namespace privchain {

// -- Hybrid public-key encryption to the bank --------------------------------

using BoxPublicKey = std::array<uint8_t, 32>;
using BoxSecretKey = std::array<uint8_t, 32>;

struct BoxKeyPair {
  BoxPublicKey pub{};
  BoxSecretKey sec{};
};

/// X25519 keypair from the caller's rng (deterministic rng -> reproducible
/// bank identity for scenario runs).
BoxKeyPair box_keygen(Rng& rng);

/// What seller and buyer agree on off-ledger. The buyer encrypts this to the
/// bank; the blinding is handed from seller to buyer during negotiation so
/// the bank can reopen the incentive commitment.
struct NegotiationRecord {
  uint64_t amount = 0;  // strictly below kMaxIncentiveAmount
  Scalar blinding;
  std::string seller_id;  // account credited on payment
};

/// Amounts are capped well below the group order so the scalar embedding of
/// an amount is injective and sums cannot wrap.
inline constexpr uint64_t kMaxIncentiveAmount = uint64_t{1} << 62;

/// Pedersen commitment to the incentive amount. Committing to amount zero
/// under blinding zero gives the group identity.
Commitment make_incentive_commitment(const PedersenParams& params, uint64_t amount,
                                     const Scalar& blinding);

/// Encrypts the negotiation record to the bank: an ephemeral key agreement
/// whose shared secret keys an authenticated cipher (sealed-box layout, so
/// only the bank's secret key opens it). The ephemeral key comes from the
/// caller's rng; fresh randomness gives byte-distinct blobs per call.
/// Throws kInvalidParameter on an out-of-range amount or empty seller id.
Bytes build_payment_blob(const BoxPublicKey& bank_pub, const NegotiationRecord& record,
                         Rng& rng);

/// Decrypts and parses a payment blob. Throws kDecryptFailure when the
/// ciphertext does not authenticate (any tampering lands here — never
/// garbage output), kMalformed when the authenticated plaintext is not a
/// valid record.
NegotiationRecord open_payment_blob(const BoxKeyPair& bank_keys,
                                    std::span<const uint8_t> blob);

// -- Bank state ---------------------------------------------------------------

struct PaymentLogEntry {
  Digest32 req_pay_id{};
  std::string seller_id;
  uint64_t amount = 0;
};

struct DisputeLogEntry {
  Digest32 req_pay_id{};  // the disputed request, queued for manual review
  std::string reason;
};

/// The bank simulator: decryption keys, seller balances, and the processing
/// history that makes request handling exactly-once.
struct BankState {
  PedersenParams params;  // commitment bases shared with the ledger
  BoxKeyPair keys;
  std::map<std::string, uint64_t> balances;
  std::vector<PaymentLogEntry> payments;
  std::vector<DisputeLogEntry> disputes;
  std::map<Digest32, PaymentOutcome> processed;

  static BankState create(const PedersenParams& params, Rng& rng);

  uint64_t total_balance() const;

  /// Structured text: key material, balances, and logs. Reloadable.
  std::string to_text() const;
  static BankState parse(std::string_view text, const PedersenParams& params,
                         std::string_view origin = "bank state");
  void save_file(const std::string& path) const;
  static BankState load_file(const std::string& path, const PedersenParams& params);
};

/// The bank's verdict on one request.
struct BankDecision {
  PaymentOutcome outcome = PaymentOutcome::kDisputed;
  bool replayed = false;  // a prior decision was returned; no state changed
  std::string reason;     // engaged when disputed
};

/// Pure decision core: verifies the buyer signature (kBadSignature), checks
/// the request's commitment against the ledger-recorded one, decrypts the
/// blob, and recomputes the commitment from the negotiated amount and
/// blinding. Paid exactly when everything matches; any failure after the
/// signature check is a dispute with a reason, not an exception.
struct BankEvaluation {
  PaymentOutcome outcome = PaymentOutcome::kDisputed;
  std::string reason;
  std::optional<NegotiationRecord> record;  // engaged when decryption worked
};
BankEvaluation bank_evaluate(const PedersenParams& params, const BoxKeyPair& keys,
                             const ReqPay& req, const Commitment& ledger_commitment);

/// Processes one payment request against the ledger view: cross-checks the
/// commitment the ledger recorded for this request id, evaluates, credits
/// the seller on payment, and logs. Reprocessing a request returns the
/// recorded outcome and changes nothing. Throws kBadSignature when the
/// buyer signature does not verify.
BankDecision bank_process(BankState& bank, const ReqPay& req, const Ledger& ledger);

/// Manual re-evaluation of a disputed request (the dispute queue has no
/// automatic retry). Removes the queued dispute and decides afresh.
/// Throws kUnknownReqPay when the request was never processed,
/// kAlreadyFinalized when it was paid.
BankDecision bank_resubmit(BankState& bank, const ReqPay& req, const Ledger& ledger);

}  // namespace privchain
