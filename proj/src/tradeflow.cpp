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
#include "privchain/tradeflow.hpp"

#include <sodium.h>

#include <sstream>

#include "privchain/errors.hpp"
#include "privchain/ledger.hpp"

namespace privchain {

namespace {

constexpr std::string_view kAdDomain = "privchain.constituents.v1";

Bytes associated_data(std::string_view final_product_id) {
  Bytes ad(kAdDomain.begin(), kAdDomain.end());
  ad.insert(ad.end(), final_product_id.begin(), final_product_id.end());
  return ad;
}

Bytes encode_ids(std::span<const std::string> ids) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(ids.size()));
  for (const std::string& id : ids) w.str(id);
  return w.take();
}

std::vector<std::string> decode_ids(std::span<const uint8_t> in) {
  ByteReader r(in);
  const uint32_t n = r.u32();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (uint32_t i = 0; i < n; ++i) ids.push_back(r.str());
  r.expect_done();
  return ids;
}

bool valid_key_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

}  // namespace

TradeFlowKey make_tradeflow_key(std::string_view key_id, Rng& rng) {
  if (!valid_key_id(key_id)) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "key id must be nonempty without spaces");
  }
  TradeFlowKey k;
  k.key_id = std::string(key_id);
  rng.fill(k.key);
  return k;
}

const TradeFlowKey* Keyring::find(std::string_view key_id) const {
  for (const TradeFlowKey& k : keys) {
    if (k.key_id == key_id) return &k;
  }
  return nullptr;
}

Keyring Keyring::parse(std::string_view text, std::string_view origin) {
  const auto fail = [&](size_t line_no, const std::string& why) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed, std::string(origin) + ":" +
                                                    std::to_string(line_no) + ": " + why);
  };
  Keyring ring;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;

    std::istringstream fields(line);
    std::string key_id, hex, extra;
    if (!(fields >> key_id >> hex)) throw fail(line_no, "expected '<key_id> <hex key>'");
    if (fields >> extra) throw fail(line_no, "unexpected trailing field '" + extra + "'");
    if (!valid_key_id(key_id)) throw fail(line_no, "invalid key id");
    if (ring.find(key_id)) throw fail(line_no, "duplicate key id '" + key_id + "'");
    const auto raw = from_hex(hex);
    if (!raw || raw->size() != 32) throw fail(line_no, "key must be 64 hex characters");
    TradeFlowKey k;
    k.key_id = key_id;
    std::copy(raw->begin(), raw->end(), k.key.begin());
    ring.keys.push_back(std::move(k));
  }
  return ring;
}

Keyring Keyring::load_file(const std::string& path) {
  const Bytes data = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()), path);
}

std::string Keyring::to_text() const {
  std::string out;
  for (const TradeFlowKey& k : keys) {
    out += k.key_id;
    out += ' ';
    out += to_hex(k.key);
    out += '\n';
  }
  return out;
}

void Keyring::save_file(const std::string& path) const {
  const std::string text = to_text();
  write_file(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

Bytes ConstituentBlob::to_bytes() const {
  ByteWriter w;
  w.str(key_id);
  w.raw(nonce);
  w.bytes(ciphertext);
  return w.take();
}

std::optional<ConstituentBlob> ConstituentBlob::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    ConstituentBlob blob;
    blob.key_id = r.str();
    blob.nonce = r.fixed<24>();
    blob.ciphertext = r.bytes();
    r.expect_done();
    if (!valid_key_id(blob.key_id)) return std::nullopt;
    return blob;
  } catch (const CodecError&) {
    return std::nullopt;
  }
}

ConstituentBlob encrypt_constituents(const TradeFlowKey& key, std::span<const std::string> ids,
                                     std::string_view final_product_id, Rng& rng) {
  ensure_sodium();
  if (ids.empty()) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "constituent list must be nonempty");
  }
  const Bytes plain = encode_ids(ids);
  const Bytes ad = associated_data(final_product_id);

  ConstituentBlob blob;
  blob.key_id = key.key_id;
  rng.fill(blob.nonce);
  blob.ciphertext.resize(plain.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(blob.ciphertext.data(), &clen, plain.data(),
                                             plain.size(), ad.data(), ad.size(), nullptr,
                                             blob.nonce.data(), key.key.data());
  blob.ciphertext.resize(clen);
  return blob;
}

std::vector<std::string> decrypt_constituents(const TradeFlowKey& key,
                                              const ConstituentBlob& blob,
                                              std::string_view final_product_id) {
  ensure_sodium();
  if (blob.key_id != key.key_id) {
    throw ProtocolError(ErrorCode::kAuthFailure, "blob was encrypted under key '" +
                                                     blob.key_id + "', not '" + key.key_id +
                                                     "'");
  }
  if (blob.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw ProtocolError(ErrorCode::kAuthFailure, "ciphertext shorter than its tag");
  }
  const Bytes ad = associated_data(final_product_id);
  Bytes plain(blob.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long mlen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(plain.data(), &mlen, nullptr,
                                                 blob.ciphertext.data(), blob.ciphertext.size(),
                                                 ad.data(), ad.size(), blob.nonce.data(),
                                                 key.key.data()) != 0) {
    throw ProtocolError(ErrorCode::kAuthFailure, "constituent blob fails authentication");
  }
  plain.resize(mlen);
  try {
    return decode_ids(plain);
  } catch (const CodecError& e) {
    throw ProtocolError(ErrorCode::kMalformed, std::string("constituent payload: ") + e.what());
  }
}

AuditTrace audit_trace(const TradeFlowKey& key, const Ledger& ledger,
                       std::string_view final_product_id) {
  const FinalProductRecord* product = ledger.find_product(std::string(final_product_id));
  if (!product) {
    throw ProtocolError(ErrorCode::kUnknownProduct,
                        "product '" + std::string(final_product_id) + "' does not exist");
  }
  const auto blob = ConstituentBlob::from_bytes(product->encrypted_constituents);
  if (!blob) {
    throw ProtocolError(ErrorCode::kMalformed, "recorded constituent blob does not parse");
  }
  const std::vector<std::string> ids = decrypt_constituents(key, *blob, final_product_id);

  AuditTrace trace;
  trace.final_product_id = std::string(final_product_id);
  trace.branches.reserve(ids.size());
  for (const std::string& id : ids) {
    const CommodityRecord* rec = ledger.find_commodity(id);
    if (!rec) {
      throw ProtocolError(ErrorCode::kUnknownConstituent,
                          "constituent '" + id + "' has no ledger record");
    }
    AuditBranch branch;
    branch.commodity_id = id;
    branch.create_tx_id = rec->create_tx_id;
    branch.trade_tx_id = rec->trade_tx_id;
    branch.region = rec->region;
    trace.branches.push_back(std::move(branch));
  }
  return trace;
}

}  // namespace privchain
