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
#include "privchain/group_crypto.hpp"

namespace privchain {

using bn::Fp12;
using bn::G1;
using bn::G2;

bool GroupElement::is_identity() const {
  switch (group()) {
    case Group::kG1: return g1().is_identity();
    case Group::kG2: return g2().is_identity();
    case Group::kGt: return gt().is_one();
  }
  return false;
}

bool GroupElement::operator==(const GroupElement& o) const {
  if (group() != o.group()) return false;
  switch (group()) {
    case Group::kG1: return g1() == o.g1();
    case Group::kG2: return g2() == o.g2();
    case Group::kGt: return gt() == o.gt();
  }
  return false;
}

Bytes GroupElement::to_bytes() const {
  Bytes out;
  out.push_back(static_cast<uint8_t>(group()));
  switch (group()) {
    case Group::kG1: {
      auto b = bn::g1_to_bytes(g1());
      out.insert(out.end(), b.begin(), b.end());
      break;
    }
    case Group::kG2: {
      auto b = bn::g2_to_bytes(g2());
      out.insert(out.end(), b.begin(), b.end());
      break;
    }
    case Group::kGt: {
      auto b = bn::gt_to_bytes(gt());
      out.insert(out.end(), b.begin(), b.end());
      break;
    }
  }
  return out;
}

std::optional<GroupElement> GroupElement::from_bytes(std::span<const uint8_t> in) {
  if (in.empty()) return std::nullopt;
  switch (in[0]) {
    case static_cast<uint8_t>(Group::kG1): {
      if (in.size() != 33) return std::nullopt;
      auto p = bn::g1_from_bytes(std::span<const uint8_t, 32>(in.data() + 1, 32));
      if (!p) return std::nullopt;
      return GroupElement(*p);
    }
    case static_cast<uint8_t>(Group::kG2): {
      if (in.size() != 65) return std::nullopt;
      auto p = bn::g2_from_bytes(std::span<const uint8_t, 64>(in.data() + 1, 64));
      if (!p) return std::nullopt;
      return GroupElement(*p);
    }
    case static_cast<uint8_t>(Group::kGt): {
      if (in.size() != 385) return std::nullopt;
      auto v = bn::gt_from_bytes(std::span<const uint8_t, 384>(in.data() + 1, 384), false);
      if (!v) return std::nullopt;
      return GroupElement(*v);
    }
    default:
      return std::nullopt;
  }
}

Bytes PedersenParams::to_bytes() const {
  ByteWriter w;
  w.bytes(g.to_bytes());
  w.bytes(h.to_bytes());
  return w.take();
}

std::optional<PedersenParams> PedersenParams::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    auto gb = r.bytes();
    auto hb = r.bytes();
    r.expect_done();
    auto g = GroupElement::from_bytes(gb);
    auto h = GroupElement::from_bytes(hb);
    if (!g || !h) return std::nullopt;
    if (g->group() != GroupElement::Group::kG1 || h->group() != GroupElement::Group::kG1)
      return std::nullopt;
    if (g->is_identity() || h->is_identity()) return std::nullopt;
    return PedersenParams{*g, *h};
  } catch (const CodecError&) {
    return std::nullopt;
  }
}

Transcript::Transcript(std::string_view label) {
  buf_.str("PCFS1");
  buf_.str(label);
}

void Transcript::absorb_bytes(std::string_view tag, std::span<const uint8_t> data) {
  buf_.u8(1);
  buf_.str(tag);
  buf_.bytes(data);
}

void Transcript::absorb_scalar(std::string_view tag, const Scalar& s) {
  buf_.u8(2);
  buf_.str(tag);
  auto b = s.to_bytes();
  buf_.bytes(b);
}

void Transcript::absorb_element(std::string_view tag, const GroupElement& e) {
  buf_.u8(3);
  buf_.str(tag);
  buf_.bytes(e.to_bytes());
}

void Transcript::absorb_u64(std::string_view tag, uint64_t v) {
  buf_.u8(4);
  buf_.str(tag);
  buf_.u64(v);
}

void Transcript::absorb_i64(std::string_view tag, int64_t v) {
  buf_.u8(5);
  buf_.str(tag);
  buf_.i64(v);
}

Scalar Transcript::challenge() {
  ByteWriter w;
  w.raw(buf_.data());
  w.u8(255);  // challenge marker, distinct from any absorb tag
  w.u64(counter_++);
  auto h = sha512(w.data());
  return Scalar::from_bytes_wide(std::span<const uint8_t, 64>(h));
}

PedersenParams pedersen_setup(std::span<const uint8_t> domain_seed) {
  if (domain_seed.empty())
    throw ProtocolError(ErrorCode::kInvalidParameter, "empty pedersen domain seed");
  G1 g = G1::generator();
  G1 h = bn::hash_to_g1("privchain.pedersen.h.v1", domain_seed);
  return PedersenParams{GroupElement(g), GroupElement(h)};
}

Commitment commit(const PedersenParams& params, const Scalar& message, const Scalar& blinding) {
  return Commitment{GroupElement(params.g.g1() * message + params.h.g1() * blinding)};
}

bool open_verify(const PedersenParams& params, const Commitment& com, const Opening& opening) {
  return commit(params, opening.message, opening.blinding) == com;
}

GroupElement bb_sign(const Scalar& secret_x, const Scalar& index) {
  Scalar denom = secret_x + index;
  if (denom.is_zero())
    throw ProtocolError(ErrorCode::kDegenerateIndex, "x + index vanishes");
  return GroupElement(G1::generator() * denom.invert());
}

bool bb_verify(const GroupElement& y, const Scalar& index, const GroupElement& sig) {
  if (y.group() != GroupElement::Group::kG2 || sig.group() != GroupElement::Group::kG1)
    return false;
  if (sig.is_identity()) return false;
  static const Fp12 kBase = bn::pairing(G1::generator(), G2::generator());
  G2 rhs = y.g2() + G2::generator() * index;
  return bn::pairing(sig.g1(), rhs) == kBase;
}

}  // namespace privchain
