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
#include "privchain/ledger.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "privchain/errors.hpp"

namespace privchain {

namespace {

constexpr std::string_view kLedgerMagic = "PCLEDGER1";

constexpr std::string_view kCreateIdDomain = "privchain.tx.create.v1";
constexpr std::string_view kTradeIdDomain = "privchain.tx.trade.v1";
constexpr std::string_view kProduceIdDomain = "privchain.tx.produce.v1";
constexpr std::string_view kPaymentIdDomain = "privchain.tx.payment.v1";
constexpr std::string_view kBlockDomain = "privchain.block.v1";

constexpr std::string_view kCreateSigDomain = "privchain.sig.create.v1";
constexpr std::string_view kTradeSellerSigDomain = "privchain.sig.trade.seller.v1";
constexpr std::string_view kTradeBuyerSigDomain = "privchain.sig.trade.buyer.v1";
constexpr std::string_view kProduceSigDomain = "privchain.sig.produce.v1";

constexpr uint8_t kTagCreate = 1;
constexpr uint8_t kTagTrade = 2;
constexpr uint8_t kTagProduce = 3;
constexpr uint8_t kTagPayment = 4;

void write_opt_str(ByteWriter& w, const std::optional<std::string>& s) {
  w.u8(s.has_value() ? 1 : 0);
  if (s) w.str(*s);
}

std::optional<std::string> read_opt_str(ByteReader& r) {
  const uint8_t flag = r.u8();
  if (flag == 0) return std::nullopt;
  if (flag != 1) throw CodecError("bad optional flag");
  return r.str();
}

void write_opt_commitment(ByteWriter& w, const std::optional<Commitment>& c) {
  w.u8(c.has_value() ? 1 : 0);
  if (c) w.raw(c->element.to_bytes());
}

std::optional<Commitment> read_opt_commitment(ByteReader& r) {
  const uint8_t flag = r.u8();
  if (flag == 0) return std::nullopt;
  if (flag != 1) throw CodecError("bad optional flag");
  const auto e = GroupElement::from_bytes(r.take(33));
  if (!e || e->group() != GroupElement::Group::kG1) throw CodecError("bad commitment element");
  return Commitment{*e};
}

void write_opt_bytes(ByteWriter& w, const std::optional<Bytes>& b) {
  w.u8(b.has_value() ? 1 : 0);
  if (b) w.bytes(*b);
}

std::optional<Bytes> read_opt_bytes(ByteReader& r) {
  const uint8_t flag = r.u8();
  if (flag == 0) return std::nullopt;
  if (flag != 1) throw CodecError("bad optional flag");
  return r.bytes();
}

/// The buyer's signed payload: the trade id plus the payment material
/// verbatim, reconstructible by the bank from a ReqPay alone.
Bytes buyer_payload(const Digest32& tx_id, const std::optional<Commitment>& com,
                    const std::optional<Bytes>& blob) {
  ByteWriter w;
  w.str(kTradeBuyerSigDomain);
  w.raw(tx_id);
  write_opt_commitment(w, com);
  write_opt_bytes(w, blob);
  return w.take();
}

Bytes domain_payload(std::string_view domain, const Digest32& tx_id) {
  ByteWriter w;
  w.str(domain);
  w.raw(tx_id);
  return w.take();
}

bool valid_identifier(std::string_view id) {
  if (id.empty() || id.size() > 256) return false;
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

[[noreturn]] void replay_fail(const std::string& why) {
  throw ProtocolError(ErrorCode::kMalformed, "ledger replay: " + why);
}

}  // namespace

// -- Transactions -------------------------------------------------------------

Digest32 TxCreate::tx_id() const {
  ByteWriter w;
  w.str(kCreateIdDomain);
  w.str(commodity_id);
  w.raw(data_hash);
  write_opt_str(w, proof_link);
  w.raw(seller_pub);
  return sha256(w.take());
}

Bytes TxCreate::signing_payload() const { return domain_payload(kCreateSigDomain, tx_id()); }

Bytes TxCreate::to_bytes() const {
  ByteWriter w;
  w.u8(kTagCreate);
  w.str(commodity_id);
  w.raw(data_hash);
  write_opt_str(w, proof_link);
  w.raw(seller_pub);
  w.raw(seller_signature);
  return w.take();
}

Digest32 TxTrade::tx_id() const {
  ByteWriter w;
  w.str(kTradeIdDomain);
  w.str(commodity_id);
  w.raw(data_hash);
  write_opt_str(w, proof_link);
  write_opt_commitment(w, incentive_commitment);
  write_opt_bytes(w, encrypted_payment_blob);
  w.raw(seller_pub);
  w.raw(buyer_pub);
  return sha256(w.take());
}

Bytes TxTrade::seller_signing_payload() const {
  return domain_payload(kTradeSellerSigDomain, tx_id());
}

Bytes TxTrade::buyer_signing_payload() const {
  return buyer_payload(tx_id(), incentive_commitment, encrypted_payment_blob);
}

Bytes TxTrade::to_bytes() const {
  ByteWriter w;
  w.u8(kTagTrade);
  w.str(commodity_id);
  w.raw(data_hash);
  write_opt_str(w, proof_link);
  write_opt_commitment(w, incentive_commitment);
  write_opt_bytes(w, encrypted_payment_blob);
  w.str(region);
  w.raw(seller_pub);
  w.raw(buyer_pub);
  w.raw(seller_signature);
  w.raw(buyer_signature);
  return w.take();
}

Digest32 TxProduce::tx_id() const {
  ByteWriter w;
  w.str(kProduceIdDomain);
  w.str(final_product_id);
  w.bytes(encrypted_constituents);
  w.u32(static_cast<uint32_t>(regions.size()));
  for (const std::string& r : regions) w.str(r);
  w.raw(buyer_pub);
  return sha256(w.take());
}

Bytes TxProduce::signing_payload() const { return domain_payload(kProduceSigDomain, tx_id()); }

Bytes TxProduce::to_bytes() const {
  ByteWriter w;
  w.u8(kTagProduce);
  w.str(final_product_id);
  w.bytes(encrypted_constituents);
  w.u32(static_cast<uint32_t>(regions.size()));
  for (const std::string& r : regions) w.str(r);
  w.raw(buyer_pub);
  w.raw(buyer_signature);
  return w.take();
}

const char* payment_outcome_name(PaymentOutcome s) {
  switch (s) {
    case PaymentOutcome::kPaid: return "Paid";
    case PaymentOutcome::kDisputed: return "Disputed";
  }
  return "Unknown";
}

Digest32 TxPaymentStatus::tx_id() const {
  ByteWriter w;
  w.str(kPaymentIdDomain);
  w.raw(req_pay_id);
  w.u8(static_cast<uint8_t>(status));
  return sha256(w.take());
}

Bytes TxPaymentStatus::to_bytes() const {
  ByteWriter w;
  w.u8(kTagPayment);
  w.raw(req_pay_id);
  w.u8(static_cast<uint8_t>(status));
  return w.take();
}

Digest32 transaction_id(const Transaction& tx) {
  return std::visit([](const auto& t) { return t.tx_id(); }, tx);
}

Bytes transaction_to_bytes(const Transaction& tx) {
  return std::visit([](const auto& t) { return t.to_bytes(); }, tx);
}

Transaction transaction_from_bytes(std::span<const uint8_t> in) {
  ByteReader r(in);
  const uint8_t tag = r.u8();
  switch (tag) {
    case kTagCreate: {
      TxCreate tx;
      tx.commodity_id = r.str();
      tx.data_hash = r.fixed<32>();
      tx.proof_link = read_opt_str(r);
      tx.seller_pub = r.fixed<32>();
      tx.seller_signature = r.fixed<64>();
      r.expect_done();
      return tx;
    }
    case kTagTrade: {
      TxTrade tx;
      tx.commodity_id = r.str();
      tx.data_hash = r.fixed<32>();
      tx.proof_link = read_opt_str(r);
      tx.incentive_commitment = read_opt_commitment(r);
      tx.encrypted_payment_blob = read_opt_bytes(r);
      tx.region = r.str();
      tx.seller_pub = r.fixed<32>();
      tx.buyer_pub = r.fixed<32>();
      tx.seller_signature = r.fixed<64>();
      tx.buyer_signature = r.fixed<64>();
      r.expect_done();
      return tx;
    }
    case kTagProduce: {
      TxProduce tx;
      tx.final_product_id = r.str();
      tx.encrypted_constituents = r.bytes();
      const uint32_t n = r.u32();
      for (uint32_t i = 0; i < n; ++i) tx.regions.push_back(r.str());
      tx.buyer_pub = r.fixed<32>();
      tx.buyer_signature = r.fixed<64>();
      r.expect_done();
      return tx;
    }
    case kTagPayment: {
      TxPaymentStatus tx;
      tx.req_pay_id = r.fixed<32>();
      const uint8_t s = r.u8();
      if (s != 1 && s != 2) throw CodecError("bad payment status");
      tx.status = static_cast<PaymentOutcome>(s);
      r.expect_done();
      return tx;
    }
    default:
      throw CodecError("unknown transaction tag");
  }
}

// -- Blocks ---------------------------------------------------------------

Digest32 Block::compute_hash() const {
  ByteWriter w;
  w.str(kBlockDomain);
  w.u64(height);
  w.raw(prev_hash);
  w.u32(static_cast<uint32_t>(tx_list.size()));
  for (const Transaction& tx : tx_list) w.bytes(transaction_to_bytes(tx));
  return sha256(w.take());
}

Bytes Block::to_bytes() const {
  ByteWriter w;
  w.u64(height);
  w.raw(prev_hash);
  w.u32(static_cast<uint32_t>(tx_list.size()));
  for (const Transaction& tx : tx_list) w.bytes(transaction_to_bytes(tx));
  w.raw(block_hash);
  return w.take();
}

Block Block::from_bytes(std::span<const uint8_t> in) {
  ByteReader r(in);
  Block b;
  b.height = r.u64();
  b.prev_hash = r.fixed<32>();
  const uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; ++i) b.tx_list.push_back(transaction_from_bytes(r.bytes()));
  b.block_hash = r.fixed<32>();
  r.expect_done();
  return b;
}

void verify_chain(std::span<const Block> chain) {
  Digest32 prev{};
  for (size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    if (b.height != i) {
      throw ProtocolError(ErrorCode::kMalformed,
                          "block " + std::to_string(i) + " carries height " +
                              std::to_string(b.height));
    }
    if (b.prev_hash != prev) {
      throw ProtocolError(ErrorCode::kMalformed,
                          "block " + std::to_string(i) + " does not link to its predecessor");
    }
    if (b.compute_hash() != b.block_hash) {
      throw ProtocolError(ErrorCode::kMalformed,
                          "block " + std::to_string(i) + " hash mismatch");
    }
    prev = b.block_hash;
  }
}

// -- Roster ---------------------------------------------------------------

const Participant* Roster::find(const SigPublicKey& pub) const {
  for (const Participant& p : participants) {
    if (p.pub == pub) return &p;
  }
  return nullptr;
}

const Participant* Roster::find_by_name(std::string_view name) const {
  for (const Participant& p : participants) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Roster Roster::parse(std::string_view text, std::string_view origin) {
  const auto fail = [&](size_t line_no, const std::string& why) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed, std::string(origin) + ":" +
                                                    std::to_string(line_no) + ": " + why);
  };
  Roster roster;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;

    std::istringstream fields(line);
    std::string name, role, hex, extra;
    if (!(fields >> name >> role >> hex)) {
      throw fail(line_no, "expected '<name> <role> <hex public key>'");
    }
    if (fields >> extra) throw fail(line_no, "unexpected trailing field '" + extra + "'");
    if (roster.find_by_name(name)) throw fail(line_no, "duplicate participant '" + name + "'");
    const auto raw = from_hex(hex);
    if (!raw || raw->size() != 32) throw fail(line_no, "public key must be 64 hex characters");
    Participant p;
    p.name = name;
    p.role = role;
    std::copy(raw->begin(), raw->end(), p.pub.begin());
    if (roster.find(p.pub)) throw fail(line_no, "duplicate public key for '" + name + "'");
    roster.participants.push_back(std::move(p));
  }
  return roster;
}

Roster Roster::load_file(const std::string& path) {
  const Bytes data = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()), path);
}

std::string Roster::to_text() const {
  std::string out;
  for (const Participant& p : participants) {
    out += p.name;
    out += ' ';
    out += p.role;
    out += ' ';
    out += to_hex(p.pub);
    out += '\n';
  }
  return out;
}

void Roster::save_file(const std::string& path) const {
  const std::string text = to_text();
  write_file(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

// -- World-state names ------------------------------------------------------

const char* commodity_status_name(CommodityStatus s) {
  switch (s) {
    case CommodityStatus::kCreated: return "Created";
    case CommodityStatus::kTraded: return "Traded";
    case CommodityStatus::kConsumed: return "Consumed";
  }
  return "Unknown";
}

const char* product_status_name(ProductStatus s) {
  switch (s) {
    case ProductStatus::kRegistered: return "Registered";
    case ProductStatus::kSold: return "Sold";
  }
  return "Unknown";
}

// -- ReqPay -----------------------------------------------------------------

Bytes ReqPay::signing_payload() const {
  return buyer_payload(req_pay_id, incentive_commitment, encrypted_payment_blob);
}

Bytes ReqPay::to_bytes() const {
  ByteWriter w;
  w.raw(req_pay_id);
  w.raw(incentive_commitment.element.to_bytes());
  w.bytes(encrypted_payment_blob);
  w.raw(buyer_pub);
  w.raw(buyer_signature);
  return w.take();
}

std::optional<ReqPay> ReqPay::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    ReqPay req;
    req.req_pay_id = r.fixed<32>();
    const auto e = GroupElement::from_bytes(r.take(33));
    if (!e || e->group() != GroupElement::Group::kG1) return std::nullopt;
    req.incentive_commitment = Commitment{*e};
    req.encrypted_payment_blob = r.bytes();
    req.buyer_pub = r.fixed<32>();
    req.buyer_signature = r.fixed<64>();
    r.expect_done();
    return req;
  } catch (const CodecError&) {
    return std::nullopt;
  }
}

void append_req_pay_line(const std::string& path, const ReqPay& req) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ProtocolError(ErrorCode::kIo, "cannot open '" + path + "' for append");
  out << to_hex(req.to_bytes()) << '\n';
  out.flush();
  if (!out) throw ProtocolError(ErrorCode::kIo, "failed to append to '" + path + "'");
}

std::vector<ReqPay> read_req_pay_file(const std::string& path) {
  const Bytes data = read_file(path);
  std::istringstream in{std::string(data.begin(), data.end())};
  std::vector<ReqPay> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto raw = from_hex(line);
    auto req = raw ? ReqPay::from_bytes(*raw) : std::nullopt;
    if (!req) {
      throw ProtocolError(ErrorCode::kMalformed,
                          path + ":" + std::to_string(line_no) + ": bad payment request line");
    }
    out.push_back(std::move(*req));
  }
  return out;
}

// -- VISC -----------------------------------------------------------------

std::string visc_verify(const VerificationKey& vk, const RegionRegistry& registry,
                        const LocationProof& proof) {
  const LocationResult res = verify_location(vk, registry, proof);
  if (res.ok()) return *res.region;
  return std::string(kRegionNotVerified);
}

// -- Ledger -----------------------------------------------------------------

Ledger::Ledger(LedgerConfig config, ViscConfig visc, Roster roster,
               std::optional<TradeFlowKey> tradeflow_key)
    : config_(std::move(config)),
      visc_(std::move(visc)),
      roster_(std::move(roster)),
      tradeflow_key_(std::move(tradeflow_key)) {
  if (config_.block_batch_size == 0) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "block batch size must be positive");
  }
  for (const Region& r : visc_.registry.all()) {
    if (r.name == kRegionNotVerified || r.name == kRegionProofAbsent) {
      throw ProtocolError(ErrorCode::kInvalidParameter,
                          "region name '" + r.name + "' collides with a reserved marker");
    }
  }
}

Receipt Ledger::append(Transaction tx) {
  const Digest32 id = transaction_id(tx);
  if (tx_index_.count(id)) {
    throw ProtocolError(ErrorCode::kMalformed, "duplicate transaction id");
  }
  const uint64_t height = chain_.size();
  tx_index_[id] = {height, pending_.size()};
  pending_.push_back(std::move(tx));
  if (pending_.size() >= config_.block_batch_size) seal_block();
  return Receipt{height, id};
}

void Ledger::seal_block() {
  Block b;
  b.height = chain_.size();
  if (!chain_.empty()) b.prev_hash = chain_.back().block_hash;
  b.tx_list = std::move(pending_);
  pending_.clear();
  b.block_hash = b.compute_hash();
  chain_.push_back(std::move(b));
}

void Ledger::flush() {
  if (!pending_.empty()) seal_block();
}

Receipt Ledger::submit_create(const TxCreate& tx) {
  if (!valid_identifier(tx.commodity_id)) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "invalid commodity id");
  }
  if (commodities_.count(tx.commodity_id)) {
    throw ProtocolError(ErrorCode::kDuplicateCommodity,
                        "commodity '" + tx.commodity_id + "' already exists");
  }
  if (!roster_.find(tx.seller_pub)) {
    throw ProtocolError(ErrorCode::kUnknownParticipant, "seller key is not on the roster");
  }
  if (!sig_verify(tx.seller_pub, tx.signing_payload(), tx.seller_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature, "seller signature does not verify");
  }

  const Receipt receipt = append(tx);
  CommodityRecord rec;
  rec.commodity_id = tx.commodity_id;
  rec.owner = tx.seller_pub;
  rec.status = CommodityStatus::kCreated;
  rec.proof_link = tx.proof_link;
  rec.create_tx_id = receipt.tx_id;
  commodities_.emplace(tx.commodity_id, std::move(rec));
  return receipt;
}

TradeOutcome Ledger::submit_trade(const TxTrade& tx, const std::optional<LocationProof>& proof) {
  auto it = commodities_.find(tx.commodity_id);
  if (it == commodities_.end()) {
    throw ProtocolError(ErrorCode::kUnknownCommodity,
                        "commodity '" + tx.commodity_id + "' does not exist");
  }
  CommodityRecord& rec = it->second;
  if (rec.status != CommodityStatus::kCreated) {
    throw ProtocolError(ErrorCode::kAlreadyTraded,
                        "commodity '" + tx.commodity_id + "' was already traded");
  }
  if (rec.owner != tx.seller_pub) {
    throw ProtocolError(ErrorCode::kNotOwner, "trade seller does not own the commodity");
  }
  if (!roster_.find(tx.seller_pub) || !roster_.find(tx.buyer_pub)) {
    throw ProtocolError(ErrorCode::kUnknownParticipant, "trade party key is not on the roster");
  }
  if (!tx.region.empty()) {
    throw ProtocolError(ErrorCode::kMalformed, "region attribute is assigned by the contract");
  }
  if (!sig_verify(tx.seller_pub, tx.seller_signing_payload(), tx.seller_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature, "seller signature does not verify");
  }
  if (!sig_verify(tx.buyer_pub, tx.buyer_signing_payload(), tx.buyer_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature, "buyer signature does not verify");
  }

  // Verification happens exactly here, at trade time; the outcome string is
  // what every later reader sees. A proof signed by someone other than the
  // trade's seller is treated as unverified, not as a transaction error.
  std::string region;
  bool verified = false;
  if (!proof) {
    region = std::string(kRegionProofAbsent);
  } else if (proof->seller_pub != tx.seller_pub) {
    region = std::string(kRegionNotVerified);
  } else {
    region = visc_verify(visc_.vk, visc_.registry, *proof);
    verified = region != kRegionNotVerified;
  }

  TxTrade stored = tx;
  stored.region = region;
  const Receipt receipt = append(stored);

  rec.owner = tx.buyer_pub;
  rec.status = CommodityStatus::kTraded;
  rec.region = region;
  rec.proof_link = tx.proof_link;
  rec.trade_tx_id = receipt.tx_id;

  TradeOutcome out;
  out.receipt = receipt;
  out.region = region;
  out.verified = verified;
  if (verified && tx.incentive_commitment && tx.encrypted_payment_blob) {
    ReqPay req;
    req.req_pay_id = receipt.tx_id;
    req.incentive_commitment = *tx.incentive_commitment;
    req.encrypted_payment_blob = *tx.encrypted_payment_blob;
    req.buyer_pub = tx.buyer_pub;
    req.buyer_signature = tx.buyer_signature;
    req_pays_.emplace(receipt.tx_id,
                      ReqPayRecord{tx.commodity_id, *tx.incentive_commitment, std::nullopt});
    req_pay_events_.push_back(req);
    if (config_.req_pay_log_path) append_req_pay_line(*config_.req_pay_log_path, req);
    out.req_pay = std::move(req);
  }
  return out;
}

Receipt Ledger::submit_produce(const TxProduce& tx) {
  if (!valid_identifier(tx.final_product_id)) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "invalid final product id");
  }
  if (products_.count(tx.final_product_id)) {
    throw ProtocolError(ErrorCode::kDuplicateProduct,
                        "product '" + tx.final_product_id + "' already exists");
  }
  if (!roster_.find(tx.buyer_pub)) {
    throw ProtocolError(ErrorCode::kUnknownParticipant, "producer key is not on the roster");
  }
  if (!sig_verify(tx.buyer_pub, tx.signing_payload(), tx.buyer_signature)) {
    throw ProtocolError(ErrorCode::kBadSignature, "producer signature does not verify");
  }

  std::vector<CommodityRecord*> constituents;
  if (tradeflow_key_) {
    const auto blob = ConstituentBlob::from_bytes(tx.encrypted_constituents);
    if (!blob) {
      throw ProtocolError(ErrorCode::kMalformed, "constituent blob does not parse");
    }
    const std::vector<std::string> ids =
        decrypt_constituents(*tradeflow_key_, *blob, tx.final_product_id);

    std::set<std::string> seen;
    constituents.reserve(ids.size());
    for (const std::string& id : ids) {
      if (!seen.insert(id).second) {
        throw ProtocolError(ErrorCode::kInvalidParameter,
                            "constituent '" + id + "' listed twice");
      }
      auto it = commodities_.find(id);
      if (it == commodities_.end()) {
        throw ProtocolError(ErrorCode::kUnknownConstituent,
                            "constituent '" + id + "' does not exist");
      }
      if (it->second.owner != tx.buyer_pub) {
        throw ProtocolError(ErrorCode::kNotOwner,
                            "constituent '" + id + "' is owned by another party");
      }
      if (it->second.status != CommodityStatus::kTraded) {
        throw ProtocolError(ErrorCode::kConstituentNotTraded,
                            "constituent '" + id + "' has status " +
                                commodity_status_name(it->second.status));
      }
      constituents.push_back(&it->second);
    }
    if (tx.regions.size() != ids.size()) {
      throw ProtocolError(ErrorCode::kRegionMismatch,
                          "regions attribute does not match the constituent count");
    }
    for (size_t i = 0; i < ids.size(); ++i) {
      if (tx.regions[i] != constituents[i]->region) {
        throw ProtocolError(ErrorCode::kRegionMismatch,
                            "regions[" + std::to_string(i) + "] is '" + tx.regions[i] +
                                "' but constituent '" + ids[i] + "' verified as '" +
                                constituents[i]->region + "'");
      }
    }
  }

  const Receipt receipt = append(tx);
  for (CommodityRecord* rec : constituents) rec->status = CommodityStatus::kConsumed;

  FinalProductRecord rec;
  rec.final_product_id = tx.final_product_id;
  rec.regions = tx.regions;
  rec.encrypted_constituents = tx.encrypted_constituents;
  rec.status = ProductStatus::kRegistered;
  rec.produce_tx_id = receipt.tx_id;
  products_.emplace(tx.final_product_id, std::move(rec));
  return receipt;
}

Receipt Ledger::append_payment_status(const Digest32& req_pay_id, PaymentOutcome status) {
  auto it = req_pays_.find(req_pay_id);
  if (it == req_pays_.end()) {
    throw ProtocolError(ErrorCode::kUnknownReqPay,
                        "no payment request with id " + to_hex(req_pay_id));
  }
  if (it->second.final_status.has_value()) {
    throw ProtocolError(ErrorCode::kAlreadyFinalized,
                        "payment request " + to_hex(req_pay_id) + " already finalized as " +
                            payment_outcome_name(*it->second.final_status));
  }
  TxPaymentStatus tx;
  tx.req_pay_id = req_pay_id;
  tx.status = status;
  const Receipt receipt = append(tx);
  it->second.final_status = status;
  return receipt;
}

void Ledger::mark_product_sold(const std::string& final_product_id) {
  auto it = products_.find(final_product_id);
  if (it == products_.end()) {
    throw ProtocolError(ErrorCode::kUnknownProduct,
                        "product '" + final_product_id + "' does not exist");
  }
  if (it->second.status == ProductStatus::kSold) {
    throw ProtocolError(ErrorCode::kAlreadyFinalized,
                        "product '" + final_product_id + "' is already sold");
  }
  it->second.status = ProductStatus::kSold;
}

std::vector<std::string> Ledger::consumer_query(const std::string& final_product_id) const {
  auto it = products_.find(final_product_id);
  if (it == products_.end()) {
    throw ProtocolError(ErrorCode::kUnknownProduct,
                        "product '" + final_product_id + "' does not exist");
  }
  return it->second.regions;
}

const CommodityRecord* Ledger::find_commodity(const std::string& commodity_id) const {
  auto it = commodities_.find(commodity_id);
  return it == commodities_.end() ? nullptr : &it->second;
}

const FinalProductRecord* Ledger::find_product(const std::string& final_product_id) const {
  auto it = products_.find(final_product_id);
  return it == products_.end() ? nullptr : &it->second;
}

const Transaction* Ledger::find_transaction(const Digest32& tx_id) const {
  auto it = tx_index_.find(tx_id);
  if (it == tx_index_.end()) return nullptr;
  const auto [height, offset] = it->second;
  if (height < chain_.size()) return &chain_[height].tx_list[offset];
  if (height == chain_.size() && offset < pending_.size()) return &pending_[offset];
  return nullptr;
}

std::optional<Ledger::TradeSummary> Ledger::find_req_pay(const Digest32& req_pay_id) const {
  auto it = req_pays_.find(req_pay_id);
  if (it == req_pays_.end()) return std::nullopt;
  return TradeSummary{it->second.commodity_id, it->second.incentive_commitment};
}

std::optional<PaymentOutcome> Ledger::payment_status(const Digest32& req_pay_id) const {
  auto it = req_pays_.find(req_pay_id);
  if (it == req_pays_.end()) return std::nullopt;
  return it->second.final_status;
}

std::vector<ReqPay> Ledger::drain_req_pay_events() {
  std::vector<ReqPay> out(req_pay_events_.begin(), req_pay_events_.end());
  req_pay_events_.clear();
  return out;
}

// -- Persistence ------------------------------------------------------------

void Ledger::save_file(const std::string& path) {
  flush();
  ByteWriter w;
  w.raw(str_bytes(kLedgerMagic));
  for (const Block& b : chain_) w.bytes(b.to_bytes());
  write_file(path, w.take());
}

void Ledger::replay(const Transaction& tx) {
  if (const auto* create = std::get_if<TxCreate>(&tx)) {
    if (!valid_identifier(create->commodity_id)) replay_fail("invalid commodity id");
    if (commodities_.count(create->commodity_id)) {
      replay_fail("commodity '" + create->commodity_id + "' created twice");
    }
    if (!roster_.find(create->seller_pub)) replay_fail("create by unknown participant");
    if (!sig_verify(create->seller_pub, create->signing_payload(), create->seller_signature)) {
      replay_fail("create signature does not verify");
    }
    CommodityRecord rec;
    rec.commodity_id = create->commodity_id;
    rec.owner = create->seller_pub;
    rec.status = CommodityStatus::kCreated;
    rec.proof_link = create->proof_link;
    rec.create_tx_id = create->tx_id();
    commodities_.emplace(create->commodity_id, std::move(rec));
    return;
  }

  if (const auto* trade = std::get_if<TxTrade>(&tx)) {
    auto it = commodities_.find(trade->commodity_id);
    if (it == commodities_.end()) replay_fail("trade of unknown commodity");
    CommodityRecord& rec = it->second;
    if (rec.status != CommodityStatus::kCreated) {
      replay_fail("commodity '" + trade->commodity_id + "' traded twice");
    }
    if (rec.owner != trade->seller_pub) replay_fail("trade seller is not the owner");
    if (!roster_.find(trade->seller_pub) || !roster_.find(trade->buyer_pub)) {
      replay_fail("trade party not on the roster");
    }
    if (!sig_verify(trade->seller_pub, trade->seller_signing_payload(),
                    trade->seller_signature) ||
        !sig_verify(trade->buyer_pub, trade->buyer_signing_payload(),
                    trade->buyer_signature)) {
      replay_fail("trade signature does not verify");
    }
    // The stored region outcome is trusted: verification ran at trade time.
    rec.owner = trade->buyer_pub;
    rec.status = CommodityStatus::kTraded;
    rec.region = trade->region;
    rec.proof_link = trade->proof_link;
    rec.trade_tx_id = trade->tx_id();
    const bool verified = !trade->region.empty() && trade->region != kRegionNotVerified &&
                          trade->region != kRegionProofAbsent;
    if (verified && trade->incentive_commitment && trade->encrypted_payment_blob) {
      req_pays_.emplace(
          trade->tx_id(),
          ReqPayRecord{trade->commodity_id, *trade->incentive_commitment, std::nullopt});
    }
    return;
  }

  if (const auto* produce = std::get_if<TxProduce>(&tx)) {
    if (products_.count(produce->final_product_id)) {
      replay_fail("product '" + produce->final_product_id + "' registered twice");
    }
    if (!roster_.find(produce->buyer_pub)) replay_fail("produce by unknown participant");
    if (!sig_verify(produce->buyer_pub, produce->signing_payload(),
                    produce->buyer_signature)) {
      replay_fail("produce signature does not verify");
    }
    if (tradeflow_key_) {
      const auto blob = ConstituentBlob::from_bytes(produce->encrypted_constituents);
      if (!blob) replay_fail("constituent blob does not parse");
      std::vector<std::string> ids;
      try {
        ids = decrypt_constituents(*tradeflow_key_, *blob, produce->final_product_id);
      } catch (const ProtocolError& e) {
        replay_fail(std::string("constituents do not decrypt: ") + e.what());
      }
      for (const std::string& id : ids) {
        auto it = commodities_.find(id);
        if (it == commodities_.end()) replay_fail("unknown constituent '" + id + "'");
        if (it->second.status != CommodityStatus::kTraded) {
          replay_fail("constituent '" + id + "' consumed without being traded");
        }
        if (it->second.owner != produce->buyer_pub) {
          replay_fail("constituent '" + id + "' not owned by the producer");
        }
        it->second.status = CommodityStatus::kConsumed;
      }
    }
    FinalProductRecord rec;
    rec.final_product_id = produce->final_product_id;
    rec.regions = produce->regions;
    rec.encrypted_constituents = produce->encrypted_constituents;
    rec.status = ProductStatus::kRegistered;
    rec.produce_tx_id = produce->tx_id();
    products_.emplace(produce->final_product_id, std::move(rec));
    return;
  }

  const auto& payment = std::get<TxPaymentStatus>(tx);
  auto it = req_pays_.find(payment.req_pay_id);
  if (it == req_pays_.end()) replay_fail("payment status for an unissued request");
  if (it->second.final_status.has_value()) replay_fail("payment request finalized twice");
  it->second.final_status = payment.status;
}

Ledger Ledger::load_file(const std::string& path, LedgerConfig config, ViscConfig visc,
                         Roster roster, std::optional<TradeFlowKey> tradeflow_key) {
  const Bytes data = read_file(path);
  std::vector<Block> blocks;
  try {
    ByteReader r(data);
    const auto magic = r.take(kLedgerMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kLedgerMagic.begin())) {
      throw CodecError("bad ledger file magic");
    }
    while (!r.done()) blocks.push_back(Block::from_bytes(r.bytes()));
  } catch (const CodecError& e) {
    throw ProtocolError(ErrorCode::kMalformed, "ledger file '" + path + "': " + e.what());
  }
  verify_chain(blocks);

  Ledger ledger(std::move(config), std::move(visc), std::move(roster),
                std::move(tradeflow_key));
  ledger.chain_ = std::move(blocks);
  for (const Block& b : ledger.chain_) {
    for (size_t i = 0; i < b.tx_list.size(); ++i) {
      const Transaction& tx = b.tx_list[i];
      const Digest32 id = transaction_id(tx);
      if (ledger.tx_index_.count(id)) replay_fail("duplicate transaction id");
      ledger.tx_index_[id] = {b.height, i};
      ledger.replay(tx);
    }
  }
  return ledger;
}

}  // namespace privchain
