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

// The primitive layer: tagged pairing-group elements, Pedersen commitments,
// digit signatures of the Boneh–Boyen form A_i = g^{1/(x+i)}, and the
// Fiat–Shamir transcript all proofs derive their challenges from.

#include <variant>

#include "privchain/bytes.hpp"
#include "privchain/errors.hpp"
#include "privchain/pairing.hpp"
#include "privchain/rng.hpp"

namespace privchain {

/// Exponent arithmetic is mod the order of the pairing groups.
using Scalar = bn::Fr;

/// A point of one of the three pairing groups, tagged by group. Codecs are
/// strict: off-curve, wrong-subgroup or non-canonical bytes never decode.
class GroupElement {
 public:
  enum class Group : uint8_t { kG1 = 1, kG2 = 2, kGt = 3 };

  GroupElement() : value_(bn::G1::identity()) {}
  explicit GroupElement(const bn::G1& p) : value_(p) {}
  explicit GroupElement(const bn::G2& p) : value_(p) {}
  explicit GroupElement(const bn::Fp12& v) : value_(v) {}

  Group group() const { return static_cast<Group>(value_.index() + 1); }

  const bn::G1& g1() const { return expect<bn::G1>(); }
  const bn::G2& g2() const { return expect<bn::G2>(); }
  const bn::Fp12& gt() const { return expect<bn::Fp12>(); }

  bool is_identity() const;
  bool operator==(const GroupElement& o) const;
  bool operator!=(const GroupElement& o) const { return !(*this == o); }

  /// 1 tag byte + fixed-length payload (33 / 65 / 385 bytes total).
  Bytes to_bytes() const;
  static std::optional<GroupElement> from_bytes(std::span<const uint8_t> in);

 private:
  template <typename T>
  const T& expect() const {
    const T* p = std::get_if<T>(&value_);
    if (!p) throw ProtocolError(ErrorCode::kMalformed, "group element of unexpected group");
    return *p;
  }

  std::variant<bn::G1, bn::G2, bn::Fp12> value_;
};

struct PedersenParams {
  GroupElement g;  // source group 1 generator
  GroupElement h;  // hash-derived, discrete log base g unknown

  Bytes to_bytes() const;
  static std::optional<PedersenParams> from_bytes(std::span<const uint8_t> in);
};

struct Commitment {
  GroupElement element;  // source group 1

  bool operator==(const Commitment& o) const { return element == o.element; }
  bool operator!=(const Commitment& o) const { return !(*this == o); }
};

struct Opening {
  Scalar message;
  Scalar blinding;
};

/// Deterministic Fiat–Shamir transcript. Absorbed items are length-prefixed
/// and tagged, so distinct absorption sequences produce distinct challenge
/// streams even when their concatenated payloads collide.
class Transcript {
 public:
  explicit Transcript(std::string_view label);

  void absorb_bytes(std::string_view tag, std::span<const uint8_t> data);
  void absorb_scalar(std::string_view tag, const Scalar& s);
  void absorb_element(std::string_view tag, const GroupElement& e);
  void absorb_u64(std::string_view tag, uint64_t v);
  void absorb_i64(std::string_view tag, int64_t v);

  /// Wide-reduced hash of everything absorbed so far plus a stream counter;
  /// calling again (with or without more absorption) yields an independent
  /// value.
  Scalar challenge();

 private:
  ByteWriter buf_;
  uint64_t counter_ = 0;
};

/// Deterministic parameter derivation: g is the fixed group generator and
/// h is hashed to the group from the domain seed, so log_g h is unknowable.
PedersenParams pedersen_setup(std::span<const uint8_t> domain_seed);

Commitment commit(const PedersenParams& params, const Scalar& message, const Scalar& blinding);

bool open_verify(const PedersenParams& params, const Commitment& com, const Opening& opening);

/// Digit signature A = g^{1/(x+index)} in source group 1.
/// Throws DegenerateIndex when x + index == 0.
GroupElement bb_sign(const Scalar& secret_x, const Scalar& index);

/// Pairing check e(sig, Y * g2^index) == e(g1, g2) with Y = g2^x.
bool bb_verify(const GroupElement& y, const Scalar& index, const GroupElement& sig);

}  // namespace privchain
