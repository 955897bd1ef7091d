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

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "privchain/bytes.hpp"
#include "privchain/geo_grid.hpp"
#include "privchain/group_crypto.hpp"
#include "privchain/sig.hpp"
#include "privchain/tradeflow.hpp"
#include "privchain/zkrp.hpp"

namespace privchain {

// -- Transaction vocabulary ---------------------------------------------------
//
// Every transaction has a stable id: the digest of its canonical unsigned
// fields. Signatures are made over a domain-separated payload derived from
// that id, so they transitively cover every unsigned field. The region
// attribute of a trade is set by the contract after signing and is therefore
// outside the id and the signed payload, but inside the block hash.

/// Registers a new commodity batch under the seller's key.
struct TxCreate {
  std::string commodity_id;
  Digest32 data_hash{};
  std::optional<std::string> proof_link;  // content address of an off-chain proof
  SigPublicKey seller_pub{};
  Signature seller_signature{};

  Digest32 tx_id() const;
  Bytes signing_payload() const;
  Bytes to_bytes() const;
};

/// Transfers a commodity from seller to buyer, optionally carrying an
/// incentive commitment and a bank-encrypted payment envelope.
struct TxTrade {
  std::string commodity_id;
  Digest32 data_hash{};
  std::optional<std::string> proof_link;
  std::optional<Commitment> incentive_commitment;
  std::optional<Bytes> encrypted_payment_blob;
  std::string region;  // empty at submission; populated exactly once by the contract
  SigPublicKey seller_pub{};
  SigPublicKey buyer_pub{};
  Signature seller_signature{};
  Signature buyer_signature{};

  Digest32 tx_id() const;
  Bytes seller_signing_payload() const;
  /// The buyer's payload binds the transaction id together with the
  /// commitment and payment envelope verbatim, so the bank can verify the
  /// signature from a payment request alone.
  Bytes buyer_signing_payload() const;
  Bytes to_bytes() const;
};

/// Registers a final product whose constituent ids are hidden inside an
/// authenticated blob; the verified region names travel in plaintext.
struct TxProduce {
  std::string final_product_id;
  Bytes encrypted_constituents;  // serialized ConstituentBlob
  std::vector<std::string> regions;
  SigPublicKey buyer_pub{};
  Signature buyer_signature{};

  Digest32 tx_id() const;
  Bytes signing_payload() const;
  Bytes to_bytes() const;
};

enum class PaymentOutcome : uint8_t { kPaid = 1, kDisputed = 2 };

const char* payment_outcome_name(PaymentOutcome s);

/// Records the bank's settlement outcome for a previously emitted payment
/// request. Carries nothing but the request id and the status.
struct TxPaymentStatus {
  Digest32 req_pay_id{};
  PaymentOutcome status = PaymentOutcome::kPaid;

  Digest32 tx_id() const;
  Bytes to_bytes() const;
};

using Transaction = std::variant<TxCreate, TxTrade, TxProduce, TxPaymentStatus>;

Digest32 transaction_id(const Transaction& tx);
Bytes transaction_to_bytes(const Transaction& tx);
Transaction transaction_from_bytes(std::span<const uint8_t> in);

/// One sealed batch of transactions. The genesis block has height 0 and an
/// all-zero predecessor hash.
struct Block {
  uint64_t height = 0;
  Digest32 prev_hash{};
  std::vector<Transaction> tx_list;
  Digest32 block_hash{};

  Digest32 compute_hash() const;
  Bytes to_bytes() const;
  static Block from_bytes(std::span<const uint8_t> in);
};

/// Recomputes every block hash and predecessor link; throws kMalformed on the
/// first discrepancy.
void verify_chain(std::span<const Block> chain);

// -- Participants -------------------------------------------------------------

/// Load-time roster standing in for the certification authority: only keys
/// listed here may author transactions.
struct Participant {
  std::string name;
  std::string role;
  SigPublicKey pub{};
};

struct Roster {
  std::vector<Participant> participants;

  const Participant* find(const SigPublicKey& pub) const;
  const Participant* find_by_name(std::string_view name) const;

  /// Text format: one participant per line, "<name> <role> <hex public key>",
  /// '#' comments allowed. `origin` names the source in error messages.
  static Roster parse(std::string_view text, std::string_view origin = "roster");
  static Roster load_file(const std::string& path);
  std::string to_text() const;
  void save_file(const std::string& path) const;
};

// -- World state ----------------------------------------------------------

enum class CommodityStatus : uint8_t { kCreated = 1, kTraded = 2, kConsumed = 3 };
enum class ProductStatus : uint8_t { kRegistered = 1, kSold = 2 };

const char* commodity_status_name(CommodityStatus s);
const char* product_status_name(ProductStatus s);

struct CommodityRecord {
  std::string commodity_id;
  SigPublicKey owner{};
  CommodityStatus status = CommodityStatus::kCreated;
  std::string region;  // trade outcome: a region name or a refusal marker
  std::optional<std::string> proof_link;
  Digest32 create_tx_id{};
  Digest32 trade_tx_id{};  // zero until traded
};

struct FinalProductRecord {
  std::string final_product_id;
  std::vector<std::string> regions;
  Bytes encrypted_constituents;
  ProductStatus status = ProductStatus::kRegistered;
  Digest32 produce_tx_id{};
};

// -- Payment requests -------------------------------------------------------

/// Event handed to the bank when a verified trade carries payment material.
/// req_pay_id is the trade transaction's id, so the status written back by
/// the bank is traceable to the trade.
struct ReqPay {
  Digest32 req_pay_id{};
  Commitment incentive_commitment;
  Bytes encrypted_payment_blob;
  SigPublicKey buyer_pub{};
  Signature buyer_signature{};

  /// The exact bytes the buyer signed; reconstructible from this request.
  Bytes signing_payload() const;
  Bytes to_bytes() const;
  static std::optional<ReqPay> from_bytes(std::span<const uint8_t> in);
};

/// Line-delimited file channel: one lowercase-hex ReqPay per line.
void append_req_pay_line(const std::string& path, const ReqPay& req);
std::vector<ReqPay> read_req_pay_file(const std::string& path);

// -- The ledger ---------------------------------------------------------------

struct LedgerConfig {
  /// Transactions per sealed block.
  uint32_t block_batch_size = 1;
  /// When set, every emitted ReqPay is also appended to this file.
  std::optional<std::string> req_pay_log_path;
};

/// The verification material the contract uses for location proofs.
struct ViscConfig {
  VerificationKey vk;
  RegionRegistry registry;
};

struct Receipt {
  uint64_t block_height = 0;
  Digest32 tx_id{};
};

/// Region markers written when a trade carries no proof or a failing proof.
inline constexpr std::string_view kRegionNotVerified = "not verified";
inline constexpr std::string_view kRegionProofAbsent = "proof not provided";

struct TradeOutcome {
  Receipt receipt;
  std::string region;
  bool verified = false;
  std::optional<ReqPay> req_pay;
};

/// Runs the location verification a trade triggers. Returns the region name,
/// or the "not verified" marker when the proof fails for any reason. Run
/// exactly once per trade submission; queries never re-verify.
std::string visc_verify(const VerificationKey& vk, const RegionRegistry& registry,
                        const LocationProof& proof);

/// Append-only single-sequencer ledger: all mutating operations are totally
/// ordered by arrival, one logical writer at a time. Reads return snapshots
/// or pointers invalidated only by later mutations.
class Ledger {
 public:
  /// `tradeflow_key`: when present, the ledger validates TxProduce
  /// constituents by decrypting them (the authorized-simulator model);
  /// when absent, produce transactions are accepted without constituent
  /// validation and constituent state is untouched.
  Ledger(LedgerConfig config, ViscConfig visc, Roster roster,
         std::optional<TradeFlowKey> tradeflow_key);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  Ledger(Ledger&&) = default;
  Ledger& operator=(Ledger&&) = default;

  /// Errors: kDuplicateCommodity, kUnknownParticipant, kBadSignature.
  Receipt submit_create(const TxCreate& tx);

  /// Errors: kUnknownCommodity, kAlreadyTraded, kNotOwner,
  /// kUnknownParticipant, kBadSignature, kMalformed (region pre-set).
  /// A failing or absent proof is not an error: the trade records with a
  /// marker region and emits no payment request.
  TradeOutcome submit_trade(const TxTrade& tx, const std::optional<LocationProof>& proof);

  /// Errors: kDuplicateProduct, kUnknownParticipant, kBadSignature, and with
  /// constituent validation: kMalformed, kAuthFailure, kUnknownConstituent,
  /// kNotOwner, kConstituentNotTraded, kRegionMismatch, kInvalidParameter.
  Receipt submit_produce(const TxProduce& tx);

  /// Errors: kUnknownReqPay, kAlreadyFinalized.
  Receipt append_payment_status(const Digest32& req_pay_id, PaymentOutcome status);

  /// Marks a product sold; at most once. Simulator-state annotation only —
  /// the sale sits outside the transaction vocabulary, so it does not
  /// survive save/load. Errors: kUnknownProduct, kAlreadyFinalized.
  void mark_product_sold(const std::string& final_product_id);

  /// Returns the product's region names verbatim — nothing else ever leaves
  /// this query. Errors: kUnknownProduct.
  std::vector<std::string> consumer_query(const std::string& final_product_id) const;

  // State inspection.
  const CommodityRecord* find_commodity(const std::string& commodity_id) const;
  const FinalProductRecord* find_product(const std::string& final_product_id) const;
  const Transaction* find_transaction(const Digest32& tx_id) const;

  /// The bank's cross-check view of an emitted payment request.
  struct TradeSummary {
    std::string commodity_id;
    Commitment incentive_commitment;
  };
  std::optional<TradeSummary> find_req_pay(const Digest32& req_pay_id) const;
  std::optional<PaymentOutcome> payment_status(const Digest32& req_pay_id) const;

  /// In-process event channel: returns and clears the queued ReqPays.
  std::vector<ReqPay> drain_req_pay_events();

  // Chain access and persistence.
  /// Seals any pending transactions into a block.
  void flush();
  const std::vector<Block>& blocks() const { return chain_; }
  size_t pending_count() const { return pending_.size(); }

  /// Flushes, then writes the canonical chain.
  void save_file(const std::string& path);
  /// Loads a chain file, re-verifies every hash and link, and rebuilds world
  /// state by replay. Recorded region outcomes are trusted — verification
  /// happened when the trades were submitted. Throws kMalformed on any
  /// integrity or replay inconsistency, kIo on file errors.
  static Ledger load_file(const std::string& path, LedgerConfig config, ViscConfig visc,
                          Roster roster, std::optional<TradeFlowKey> tradeflow_key);

 private:
  struct ReqPayRecord {
    std::string commodity_id;
    Commitment incentive_commitment;
    std::optional<PaymentOutcome> final_status;
  };

  Receipt append(Transaction tx);
  void seal_block();
  void replay(const Transaction& tx);
  void index_transaction(const Transaction& tx);

  LedgerConfig config_;
  ViscConfig visc_;
  Roster roster_;
  std::optional<TradeFlowKey> tradeflow_key_;

  std::vector<Block> chain_;
  std::vector<Transaction> pending_;
  std::map<Digest32, std::pair<uint64_t, size_t>> tx_index_;  // id -> (height, offset)

  std::unordered_map<std::string, CommodityRecord> commodities_;
  std::unordered_map<std::string, FinalProductRecord> products_;
  std::map<Digest32, ReqPayRecord> req_pays_;
  std::deque<ReqPay> req_pay_events_;
};

}  // namespace privchain
