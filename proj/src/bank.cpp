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
#include "privchain/bank.hpp"

#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <sstream>

#include "privchain/errors.hpp"
#include "privchain/sig.hpp"

namespace privchain {

namespace {

bool valid_seller_id(std::string_view id) {
  if (id.empty() || id.size() > 256) return false;
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

Bytes encode_record(const NegotiationRecord& record) {
  ByteWriter w;
  w.u64(record.amount);
  w.raw(record.blinding.to_bytes());
  w.str(record.seller_id);
  return w.take();
}

NegotiationRecord decode_record(std::span<const uint8_t> plain) {
  ByteReader r(plain);
  NegotiationRecord record;
  record.amount = r.u64();
  const auto blinding = Scalar::from_bytes(r.fixed<32>());
  if (!blinding) throw CodecError("non-canonical blinding scalar");
  record.blinding = *blinding;
  record.seller_id = r.str();
  r.expect_done();
  if (record.amount >= kMaxIncentiveAmount) throw CodecError("amount out of range");
  if (!valid_seller_id(record.seller_id)) throw CodecError("invalid seller id");
  return record;
}

/// Seals `plaintext` to `recipient` in the standard sealed-box layout
/// (ephemeral public key, then the authenticated box under the hashed
/// nonce), but with the ephemeral key drawn from the caller's rng so a
/// seeded run reproduces the exact bytes.
Bytes seal_to(const BoxPublicKey& recipient, std::span<const uint8_t> plaintext, Rng& rng) {
  ensure_sodium();
  std::array<uint8_t, crypto_box_SEEDBYTES> seed{};
  rng.fill(seed);
  std::array<uint8_t, crypto_box_PUBLICKEYBYTES> epk{};
  std::array<uint8_t, crypto_box_SECRETKEYBYTES> esk{};
  crypto_box_seed_keypair(epk.data(), esk.data(), seed.data());

  std::array<uint8_t, crypto_box_NONCEBYTES> nonce{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, nonce.size());
  crypto_generichash_update(&st, epk.data(), epk.size());
  crypto_generichash_update(&st, recipient.data(), recipient.size());
  crypto_generichash_final(&st, nonce.data(), nonce.size());

  Bytes out(epk.size() + plaintext.size() + crypto_box_MACBYTES);
  std::copy(epk.begin(), epk.end(), out.begin());
  if (crypto_box_easy(out.data() + epk.size(), plaintext.data(), plaintext.size(),
                      nonce.data(), recipient.data(), esk.data()) != 0) {
    throw ProtocolError(ErrorCode::kIo, "sealing failed");
  }
  return out;
}

uint64_t parse_u64(std::string_view token, const std::string& context) {
  uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ProtocolError(ErrorCode::kMalformed, context + ": bad number '" +
                                                   std::string(token) + "'");
  }
  return value;
}

Digest32 parse_digest(std::string_view token, const std::string& context) {
  const auto raw = from_hex(token);
  if (!raw || raw->size() != 32) {
    throw ProtocolError(ErrorCode::kMalformed, context + ": expected a 64-hex-digit id");
  }
  Digest32 d{};
  std::copy(raw->begin(), raw->end(), d.begin());
  return d;
}

}  // namespace

BoxKeyPair box_keygen(Rng& rng) {
  ensure_sodium();
  std::array<uint8_t, crypto_box_SEEDBYTES> seed{};
  rng.fill(seed);
  BoxKeyPair kp;
  crypto_box_seed_keypair(kp.pub.data(), kp.sec.data(), seed.data());
  return kp;
}

Commitment make_incentive_commitment(const PedersenParams& params, uint64_t amount,
                                     const Scalar& blinding) {
  if (amount >= kMaxIncentiveAmount) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "incentive amount out of range");
  }
  return commit(params, Scalar::from_u64(amount), blinding);
}

Bytes build_payment_blob(const BoxPublicKey& bank_pub, const NegotiationRecord& record,
                         Rng& rng) {
  if (record.amount >= kMaxIncentiveAmount) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "incentive amount out of range");
  }
  if (!valid_seller_id(record.seller_id)) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "invalid seller id");
  }
  return seal_to(bank_pub, encode_record(record), rng);
}

NegotiationRecord open_payment_blob(const BoxKeyPair& bank_keys,
                                    std::span<const uint8_t> blob) {
  ensure_sodium();
  if (blob.size() < crypto_box_SEALBYTES) {
    throw ProtocolError(ErrorCode::kDecryptFailure, "payment blob shorter than a sealed box");
  }
  Bytes plain(blob.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(plain.data(), blob.data(), blob.size(), bank_keys.pub.data(),
                           bank_keys.sec.data()) != 0) {
    throw ProtocolError(ErrorCode::kDecryptFailure, "payment blob does not authenticate");
  }
  try {
    return decode_record(plain);
  } catch (const CodecError& e) {
    throw ProtocolError(ErrorCode::kMalformed, std::string("payment record: ") + e.what());
  }
}

// -- Bank state ---------------------------------------------------------------

BankState BankState::create(const PedersenParams& params, Rng& rng) {
  BankState bank;
  bank.params = params;
  bank.keys = box_keygen(rng);
  return bank;
}

uint64_t BankState::total_balance() const {
  uint64_t sum = 0;
  for (const auto& [seller, amount] : balances) sum += amount;
  return sum;
}

std::string BankState::to_text() const {
  std::string out = "# privchain bank state\n";
  out += "secret " + to_hex(keys.sec) + "\n";
  out += "public " + to_hex(keys.pub) + "\n";
  for (const auto& [seller, amount] : balances) {
    out += "balance " + seller + " " + std::to_string(amount) + "\n";
  }
  for (const PaymentLogEntry& p : payments) {
    out += "paid " + to_hex(p.req_pay_id) + " " + p.seller_id + " " +
           std::to_string(p.amount) + "\n";
  }
  for (const DisputeLogEntry& d : disputes) {
    out += "disputed " + to_hex(d.req_pay_id) + " " + d.reason + "\n";
  }
  for (const auto& [id, outcome] : processed) {
    out += "processed " + to_hex(id) + " " + payment_outcome_name(outcome) + "\n";
  }
  return out;
}

BankState BankState::parse(std::string_view text, const PedersenParams& params,
                           std::string_view origin) {
  const auto fail = [&](size_t line_no, const std::string& why) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed, std::string(origin) + ":" +
                                                    std::to_string(line_no) + ": " + why);
  };
  BankState bank;
  bank.params = params;
  bool have_secret = false, have_public = false;

  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const std::string context = std::string(origin) + ":" + std::to_string(line_no);

    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    {
      if (kind == "secret" || kind == "public") {
        std::string hex, extra;
        if (!(fields >> hex) || (fields >> extra)) throw fail(line_no, "expected one key");
        const auto raw = from_hex(hex);
        if (!raw || raw->size() != 32) throw fail(line_no, "key must be 64 hex characters");
        auto& slot = kind == "secret" ? bank.keys.sec : bank.keys.pub;
        std::copy(raw->begin(), raw->end(), slot.begin());
        (kind == "secret" ? have_secret : have_public) = true;
      } else if (kind == "balance") {
        std::string seller, amount, extra;
        if (!(fields >> seller >> amount) || (fields >> extra)) {
          throw fail(line_no, "expected 'balance <seller> <amount>'");
        }
        if (bank.balances.count(seller)) throw fail(line_no, "duplicate balance for " + seller);
        bank.balances[seller] = parse_u64(amount, context);
      } else if (kind == "paid") {
        std::string id, seller, amount, extra;
        if (!(fields >> id >> seller >> amount) || (fields >> extra)) {
          throw fail(line_no, "expected 'paid <id> <seller> <amount>'");
        }
        bank.payments.push_back(
            {parse_digest(id, context), seller, parse_u64(amount, context)});
      } else if (kind == "disputed") {
        std::string id;
        if (!(fields >> id)) throw fail(line_no, "expected 'disputed <id> <reason>'");
        std::string reason;
        std::getline(fields, reason);
        const size_t first = reason.find_first_not_of(' ');
        if (first == std::string::npos) throw fail(line_no, "missing dispute reason");
        bank.disputes.push_back({parse_digest(id, context), reason.substr(first)});
      } else if (kind == "processed") {
        std::string id, outcome, extra;
        if (!(fields >> id >> outcome) || (fields >> extra)) {
          throw fail(line_no, "expected 'processed <id> <outcome>'");
        }
        PaymentOutcome status;
        if (outcome == "Paid") status = PaymentOutcome::kPaid;
        else if (outcome == "Disputed") status = PaymentOutcome::kDisputed;
        else throw fail(line_no, "unknown outcome '" + outcome + "'");
        const Digest32 d = parse_digest(id, context);
        if (bank.processed.count(d)) throw fail(line_no, "request processed twice");
        bank.processed.emplace(d, status);
      } else {
        throw fail(line_no, "unknown record '" + kind + "'");
      }
    }
  }
  if (!have_secret || !have_public) {
    throw ProtocolError(ErrorCode::kMalformed,
                        std::string(origin) + ": missing bank key material");
  }
  return bank;
}

void BankState::save_file(const std::string& path) const {
  const std::string text = to_text();
  write_file(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

BankState BankState::load_file(const std::string& path, const PedersenParams& params) {
  const Bytes data = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()),
               params, path);
}

// -- Processing ---------------------------------------------------------------

BankEvaluation bank_evaluate(const PedersenParams& params, const BoxKeyPair& keys,
                             const ReqPay& req, const Commitment& ledger_commitment) {
  if (!sig_verify(req.buyer_pub, req.signing_payload(), req.buyer_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature,
                        "buyer signature on the payment request does not verify");
  }
  BankEvaluation ev;
  if (req.incentive_commitment != ledger_commitment) {
    ev.reason = "commitment differs from the ledger record";
    return ev;
  }
  try {
    ev.record = open_payment_blob(keys, req.encrypted_payment_blob);
  } catch (const ProtocolError& e) {
    ev.reason = e.code() == ErrorCode::kDecryptFailure ? "payment blob does not decrypt"
                                                       : "payment record malformed";
    return ev;
  }
  const Commitment expected =
      make_incentive_commitment(params, ev.record->amount, ev.record->blinding);
  if (expected != req.incentive_commitment) {
    ev.reason = "commitment does not open to the negotiated amount and blinding";
    return ev;
  }
  ev.outcome = PaymentOutcome::kPaid;
  return ev;
}

BankDecision bank_process(BankState& bank, const ReqPay& req, const Ledger& ledger) {
  if (!sig_verify(req.buyer_pub, req.signing_payload(), req.buyer_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature,
                        "buyer signature on the payment request does not verify");
  }
  if (const auto it = bank.processed.find(req.req_pay_id); it != bank.processed.end()) {
    return BankDecision{it->second, true, ""};
  }

  BankEvaluation ev;
  const auto summary = ledger.find_req_pay(req.req_pay_id);
  if (!summary) {
    ev.reason = "request id is not on the ledger";
  } else {
    ev = bank_evaluate(bank.params, bank.keys, req, summary->incentive_commitment);
  }

  if (ev.outcome == PaymentOutcome::kPaid) {
    uint64_t& balance = bank.balances[ev.record->seller_id];
    if (balance > UINT64_MAX - ev.record->amount) {
      throw ProtocolError(ErrorCode::kOutOfRange, "seller balance would overflow");
    }
    balance += ev.record->amount;
    bank.payments.push_back({req.req_pay_id, ev.record->seller_id, ev.record->amount});
  } else {
    bank.disputes.push_back({req.req_pay_id, ev.reason});
  }
  bank.processed.emplace(req.req_pay_id, ev.outcome);
  return BankDecision{ev.outcome, false, ev.reason};
}

BankDecision bank_resubmit(BankState& bank, const ReqPay& req, const Ledger& ledger) {
  const auto it = bank.processed.find(req.req_pay_id);
  if (it == bank.processed.end()) {
    throw ProtocolError(ErrorCode::kUnknownReqPay,
                        "request " + to_hex(req.req_pay_id) + " was never processed");
  }
  if (it->second == PaymentOutcome::kPaid) {
    throw ProtocolError(ErrorCode::kAlreadyFinalized,
                        "request " + to_hex(req.req_pay_id) + " was already paid");
  }
  bank.processed.erase(it);
  std::erase_if(bank.disputes, [&](const DisputeLogEntry& d) {
    return d.req_pay_id == req.req_pay_id;
  });
  return bank_process(bank, req, ledger);
}

}  // namespace privchain
