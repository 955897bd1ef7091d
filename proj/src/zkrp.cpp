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
#include "privchain/zkrp.hpp"

#include <algorithm>
#include <limits>

namespace privchain {

namespace {

using int128 = __int128;

constexpr std::string_view kRangeLabel = "privchain.zkrp.range.v1";
constexpr std::string_view kSetLabel = "privchain.zkrp.set.v1";
constexpr std::string_view kDeviceDomain = "privchain.device.attest.v1";
constexpr std::string_view kLocationDomain = "privchain.zkrp.location.v1";

constexpr std::string_view kProvingKeyMagic = "PCZKPK1";
constexpr std::string_view kVerifyKeyMagic = "PCZKVK1";
constexpr std::string_view kRangeProofMagic = "PCRP1";
constexpr std::string_view kLocationProofMagic = "PCLP1";

/// e(g1, g2), the right-hand constant of the digit verification equation.
const bn::Fp12& base_pairing() {
  static const bn::Fp12 e1 = bn::pairing(bn::G1::generator(), bn::G2::generator());
  return e1;
}

/// Smallest l >= 1 with base_u^l >= width.
uint32_t digits_for_width(int128 width, uint32_t base_u) {
  uint32_t l = 1;
  int128 p = base_u;
  while (p < width) {
    p *= base_u;
    ++l;
  }
  return l;
}

/// base_u^l, saturating far above any representable interval width.
int128 pow_u_saturating(uint32_t base_u, uint32_t l) {
  constexpr int128 kCap = int128(1) << 100;
  int128 p = 1;
  for (uint32_t i = 0; i < l; ++i) {
    p *= base_u;
    if (p > kCap) return kCap;
  }
  return p;
}

std::vector<Scalar> scalar_powers(uint32_t base_u, uint32_t count) {
  std::vector<Scalar> out(count);
  const Scalar u = Scalar::from_u64(base_u);
  Scalar acc = Scalar::one();
  for (uint32_t j = 0; j < count; ++j) {
    out[j] = acc;
    acc = acc * u;
  }
  return out;
}

Scalar nonzero_scalar(Rng& rng) {
  for (;;) {
    Scalar s = Scalar::random(rng);
    if (!s.is_zero()) return s;
  }
}

/// Shared Fiat-Shamir challenge over the whole proof transcript.
Scalar range_challenge(const PedersenParams& params, const GroupElement& y, uint32_t base_u,
                       uint32_t width_digits, int64_t lo, int64_t hi, const Commitment& com,
                       const std::vector<Commitment>& commitments,
                       const std::vector<DigitProof>& proofs) {
  Transcript t(kRangeLabel);
  t.absorb_element("g", params.g);
  t.absorb_element("h", params.h);
  t.absorb_element("Y", y);
  t.absorb_u64("u", base_u);
  t.absorb_u64("l", width_digits);
  t.absorb_i64("lo", lo);
  t.absorb_i64("hi", hi);
  t.absorb_element("com", com.element);
  for (uint32_t j = 0; j < commitments.size(); ++j) {
    t.absorb_element("C", commitments[j].element);
    t.absorb_element("V", proofs[j].blinded_signature);
    t.absorb_element("a", proofs[j].announce_pairing);
    t.absorb_element("D", proofs[j].announce_commit);
  }
  return t.challenge();
}

Scalar set_challenge(const PedersenParams& params, const GroupElement& y,
                     std::span<const int64_t> elements, const Commitment& com,
                     const SetMembershipProof& proof) {
  Transcript t(kSetLabel);
  t.absorb_element("g", params.g);
  t.absorb_element("h", params.h);
  t.absorb_element("Y", y);
  t.absorb_u64("n", elements.size());
  for (int64_t e : elements) t.absorb_i64("e", e);
  t.absorb_element("com", com.element);
  t.absorb_element("V", proof.blinded_signature);
  t.absorb_element("a", proof.announce_pairing);
  t.absorb_element("D", proof.announce_commit);
  return t.challenge();
}

Bytes device_payload(const Commitment& com_x, const Commitment& com_y, int zone, bool north,
                     std::string_view device_id, uint64_t timestamp) {
  ByteWriter w;
  w.str(kDeviceDomain);
  w.bytes(com_x.element.to_bytes());
  w.bytes(com_y.element.to_bytes());
  w.u32(static_cast<uint32_t>(zone));
  w.u8(north ? 1 : 0);
  w.str(device_id);
  w.u64(timestamp);
  return w.take();
}

void write_range_proof(ByteWriter& w, const RangeProof& p) {
  w.u32(p.width_digits);
  w.i64(p.lo);
  w.raw(p.challenge.to_bytes());
  for (uint32_t j = 0; j < p.width_digits; ++j) {
    w.raw(p.digit_commitments[j].element.to_bytes());
    w.raw(p.digit_proofs[j].blinded_signature.to_bytes());
    w.raw(p.digit_proofs[j].announce_pairing.to_bytes());
    w.raw(p.digit_proofs[j].announce_commit.to_bytes());
    w.raw(p.digit_proofs[j].z_digit.to_bytes());
    w.raw(p.digit_proofs[j].z_blinding.to_bytes());
    w.raw(p.digit_proofs[j].z_exponent.to_bytes());
  }
}

GroupElement read_element(ByteReader& r, GroupElement::Group expected, size_t payload) {
  const auto span = r.take(1 + payload);
  auto e = GroupElement::from_bytes(span);
  if (!e || e->group() != expected) throw CodecError("bad group element");
  return *e;
}

Scalar read_scalar(ByteReader& r) {
  auto s = Scalar::from_bytes(r.fixed<32>());
  if (!s) throw CodecError("non-canonical scalar");
  return *s;
}

RangeProof read_range_proof(ByteReader& r) {
  RangeProof p;
  p.width_digits = r.u32();
  if (p.width_digits == 0 || p.width_digits > 64) throw CodecError("digit count out of range");
  p.lo = r.i64();
  p.challenge = read_scalar(r);
  for (uint32_t j = 0; j < p.width_digits; ++j) {
    p.digit_commitments.push_back(Commitment{read_element(r, GroupElement::Group::kG1, 32)});
    DigitProof d;
    d.blinded_signature = read_element(r, GroupElement::Group::kG1, 32);
    d.announce_pairing = read_element(r, GroupElement::Group::kGt, 384);
    d.announce_commit = read_element(r, GroupElement::Group::kG1, 32);
    d.z_digit = read_scalar(r);
    d.z_blinding = read_scalar(r);
    d.z_exponent = read_scalar(r);
    p.digit_proofs.push_back(std::move(d));
  }
  return p;
}

void expect_magic(ByteReader& r, std::string_view magic, const char* what) {
  const auto got = r.take(magic.size());
  if (!std::equal(got.begin(), got.end(), magic.begin())) {
    throw ProtocolError(ErrorCode::kMalformed, std::string("bad magic for ") + what);
  }
}

}  // namespace

Scalar scalar_from_i64(int64_t v) {
  if (v >= 0) return Scalar::from_u64(static_cast<uint64_t>(v));
  return Scalar::zero() - Scalar::from_u64(static_cast<uint64_t>(-(v + 1)) + 1);
}

// -- Keys -------------------------------------------------------------------

void ProvingKey::rebuild_cache() {
  digit_pairings.clear();
  digit_pairings.reserve(digit_signatures.size());
  for (const GroupElement& a : digit_signatures) {
    digit_pairings.push_back(bn::pairing(a.g1(), bn::G2::generator()));
  }
}

void VerificationKey::rebuild_cache() {
  prep_y = bn::prepare_g2(y.g2());
  prep_g2 = bn::prepare_g2(bn::G2::generator());
}

std::pair<ProvingKey, VerificationKey> zkrp_setup(uint32_t base_u, uint32_t max_digits_l,
                                                  std::span<const uint8_t> admin_secret_seed) {
  if (base_u < 2 || base_u > 256) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "digit base must be in [2, 256]");
  }
  if (max_digits_l < 1 || max_digits_l > 64) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "digit count must be in [1, 64]");
  }

  PedersenParams params = pedersen_setup(admin_secret_seed);
  DeterministicRng seed_rng(admin_secret_seed);
  DeterministicRng x_rng = seed_rng.fork("zkrp.setup.x");
  const Scalar x = Scalar::random(x_rng);  // discarded at return

  ProvingKey pk;
  pk.params = params;
  pk.y = GroupElement(bn::G2::generator() * x);
  pk.base_u = base_u;
  pk.max_digits_l = max_digits_l;
  pk.digit_signatures.reserve(base_u);
  for (uint32_t i = 0; i < base_u; ++i) {
    pk.digit_signatures.push_back(bb_sign(x, Scalar::from_u64(i)));
  }
  pk.rebuild_cache();

  VerificationKey vk;
  vk.params = params;
  vk.y = pk.y;
  vk.base_u = base_u;
  vk.max_digits_l = max_digits_l;
  vk.rebuild_cache();
  return {std::move(pk), std::move(vk)};
}

Bytes ProvingKey::to_bytes() const {
  ByteWriter w;
  w.raw(str_bytes(kProvingKeyMagic));
  w.u32(base_u);
  w.u32(max_digits_l);
  w.bytes(params.to_bytes());
  w.raw(y.to_bytes());
  for (const GroupElement& a : digit_signatures) w.raw(a.to_bytes());
  return w.take();
}

ProvingKey ProvingKey::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    expect_magic(r, kProvingKeyMagic, "proving key");
    ProvingKey pk;
    pk.base_u = r.u32();
    pk.max_digits_l = r.u32();
    if (pk.base_u < 2 || pk.base_u > 256 || pk.max_digits_l < 1 || pk.max_digits_l > 64) {
      throw CodecError("key parameters out of range");
    }
    const Bytes pbytes = r.bytes();
    auto params = PedersenParams::from_bytes(pbytes);
    if (!params) throw CodecError("bad commitment parameters");
    pk.params = *params;
    pk.y = read_element(r, GroupElement::Group::kG2, 64);
    for (uint32_t i = 0; i < pk.base_u; ++i) {
      pk.digit_signatures.push_back(read_element(r, GroupElement::Group::kG1, 32));
    }
    r.expect_done();
    for (uint32_t i = 0; i < pk.base_u; ++i) {
      if (!bb_verify(pk.y, Scalar::from_u64(i), pk.digit_signatures[i])) {
        throw CodecError("digit signature fails verification");
      }
    }
    pk.rebuild_cache();
    return pk;
  } catch (const CodecError& e) {
    throw ProtocolError(ErrorCode::kMalformed, std::string("proving key: ") + e.what());
  }
}

void ProvingKey::save_file(const std::string& path) const { write_file(path, to_bytes()); }

ProvingKey ProvingKey::load_file(const std::string& path) { return from_bytes(read_file(path)); }

Bytes VerificationKey::to_bytes() const {
  ByteWriter w;
  w.raw(str_bytes(kVerifyKeyMagic));
  w.u32(base_u);
  w.u32(max_digits_l);
  w.bytes(params.to_bytes());
  w.raw(y.to_bytes());
  return w.take();
}

VerificationKey VerificationKey::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    expect_magic(r, kVerifyKeyMagic, "verification key");
    VerificationKey vk;
    vk.base_u = r.u32();
    vk.max_digits_l = r.u32();
    if (vk.base_u < 2 || vk.base_u > 256 || vk.max_digits_l < 1 || vk.max_digits_l > 64) {
      throw CodecError("key parameters out of range");
    }
    const Bytes pbytes = r.bytes();
    auto params = PedersenParams::from_bytes(pbytes);
    if (!params) throw CodecError("bad commitment parameters");
    vk.params = *params;
    vk.y = read_element(r, GroupElement::Group::kG2, 64);
    r.expect_done();
    vk.rebuild_cache();
    return vk;
  } catch (const CodecError& e) {
    throw ProtocolError(ErrorCode::kMalformed, std::string("verification key: ") + e.what());
  }
}

void VerificationKey::save_file(const std::string& path) const { write_file(path, to_bytes()); }

VerificationKey VerificationKey::load_file(const std::string& path) {
  return from_bytes(read_file(path));
}

// -- Digit decomposition ----------------------------------------------------

std::vector<uint32_t> decompose(int64_t delta, uint32_t base_u, uint32_t digits_l) {
  if (base_u < 2) throw ProtocolError(ErrorCode::kInvalidParameter, "digit base must be >= 2");
  if (digits_l < 1 || digits_l > 64) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "digit count must be in [1, 64]");
  }
  if (delta < 0 || int128(delta) >= pow_u_saturating(base_u, digits_l)) {
    throw ProtocolError(ErrorCode::kOutOfRange, "value not representable in the digit range");
  }
  std::vector<uint32_t> digits(digits_l);
  uint64_t rest = static_cast<uint64_t>(delta);
  for (uint32_t j = 0; j < digits_l; ++j) {
    digits[j] = static_cast<uint32_t>(rest % base_u);
    rest /= base_u;
  }
  return digits;
}

int64_t recompose(std::span<const uint32_t> digits, uint32_t base_u) {
  if (base_u < 2) throw ProtocolError(ErrorCode::kInvalidParameter, "digit base must be >= 2");
  int128 acc = 0;
  int128 place = 1;
  for (uint32_t d : digits) {
    if (d >= base_u) throw ProtocolError(ErrorCode::kOutOfRange, "digit exceeds base");
    acc += place * d;
    place *= base_u;
    if (acc > std::numeric_limits<int64_t>::max()) {
      throw ProtocolError(ErrorCode::kOutOfRange, "recomposed value overflows");
    }
  }
  return static_cast<int64_t>(acc);
}

// -- Range proofs -----------------------------------------------------------

std::pair<Commitment, RangeProof> prove_range(const ProvingKey& pk, int64_t delta,
                                              const Scalar& blinding, int64_t lo, int64_t hi,
                                              Rng& rng) {
  if (delta < lo || delta > hi) {
    throw ProtocolError(ErrorCode::kOutOfRange,
                        "value outside the interval; no digit signature covers it");
  }
  const int128 width = int128(hi) - int128(lo) + 1;
  if (width > int128(std::numeric_limits<int64_t>::max()) ||
      width > pow_u_saturating(pk.base_u, pk.max_digits_l)) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "interval too wide for the key");
  }
  const uint32_t l = digits_for_width(width, pk.base_u);
  const int64_t w = static_cast<int64_t>(int128(delta) - int128(lo));
  const std::vector<uint32_t> digits = decompose(w, pk.base_u, l);
  const std::vector<Scalar> upow = scalar_powers(pk.base_u, l);

  const bn::G1& g = pk.params.g.g1();
  const bn::G1& h = pk.params.h.g1();

  // Digit blindings summing (base-u weighted) to the input blinding, so the
  // digit commitments recombine exactly to the returned commitment.
  std::vector<Scalar> r(l);
  Scalar weighted = Scalar::zero();
  for (uint32_t j = 1; j < l; ++j) {
    r[j] = Scalar::random(rng);
    weighted = weighted + r[j] * upow[j];
  }
  r[0] = blinding - weighted;

  RangeProof proof;
  proof.lo = lo;
  proof.width_digits = l;
  proof.digit_commitments.resize(l);
  proof.digit_proofs.resize(l);

  std::vector<Scalar> s(l), m(l), t(l), v(l);
  for (uint32_t j = 0; j < l; ++j) {
    const uint32_t d = digits[j];
    proof.digit_commitments[j] = Commitment{GroupElement(g * Scalar::from_u64(d) + h * r[j])};

    v[j] = nonzero_scalar(rng);
    s[j] = Scalar::random(rng);
    m[j] = Scalar::random(rng);
    t[j] = Scalar::random(rng);

    DigitProof& dp = proof.digit_proofs[j];
    dp.blinded_signature = GroupElement(pk.digit_signatures[d].g1() * v[j]);
    // e(V, g2)^-s * e(g1, g2)^t, via the cached digit pairings — no pairing
    // is evaluated on the proving path.
    dp.announce_pairing = GroupElement(
        bn::gt_pow(pk.digit_pairings[d], Scalar::zero() - s[j] * v[j]) *
        bn::gt_pow(base_pairing(), t[j]));
    dp.announce_commit = GroupElement(g * s[j] + h * m[j]);
  }

  const Commitment com{GroupElement(g * scalar_from_i64(w) + h * blinding)};
  proof.challenge =
      range_challenge(pk.params, pk.y, pk.base_u, l, lo, hi, com, proof.digit_commitments,
                      proof.digit_proofs);

  for (uint32_t j = 0; j < l; ++j) {
    DigitProof& dp = proof.digit_proofs[j];
    dp.z_digit = s[j] - proof.challenge * Scalar::from_u64(digits[j]);
    dp.z_blinding = m[j] - proof.challenge * r[j];
    dp.z_exponent = t[j] - proof.challenge * v[j];
  }
  return {com, std::move(proof)};
}

RangeVerifyResult verify_range_detailed(const VerificationKey& vk, const Commitment& com,
                                        int64_t lo, int64_t hi, const RangeProof& proof) {
  if (hi < lo) return RangeVerifyResult::kMalformed;
  const int128 width = int128(hi) - int128(lo) + 1;
  if (width > int128(std::numeric_limits<int64_t>::max()) ||
      width > pow_u_saturating(vk.base_u, vk.max_digits_l)) {
    return RangeVerifyResult::kMalformed;
  }
  const uint32_t l = digits_for_width(width, vk.base_u);
  if (proof.lo != lo || proof.width_digits != l) return RangeVerifyResult::kMalformed;
  if (proof.digit_commitments.size() != l || proof.digit_proofs.size() != l) {
    return RangeVerifyResult::kMalformed;
  }
  if (com.element.group() != GroupElement::Group::kG1) return RangeVerifyResult::kMalformed;
  for (uint32_t j = 0; j < l; ++j) {
    const DigitProof& dp = proof.digit_proofs[j];
    if (proof.digit_commitments[j].element.group() != GroupElement::Group::kG1 ||
        dp.blinded_signature.group() != GroupElement::Group::kG1 ||
        dp.announce_pairing.group() != GroupElement::Group::kGt ||
        dp.announce_commit.group() != GroupElement::Group::kG1) {
      return RangeVerifyResult::kMalformed;
    }
    // An identity blinded signature would decouple the digit from the
    // signed set; the honest prover never produces one.
    if (dp.blinded_signature.is_identity()) return RangeVerifyResult::kMalformed;
  }

  const Scalar expected =
      range_challenge(vk.params, vk.y, vk.base_u, l, lo, hi, com, proof.digit_commitments,
                      proof.digit_proofs);
  if (expected != proof.challenge) return RangeVerifyResult::kChallengeMismatch;

  // Digit consistency: commitments recombine (base-u weighted) to com.
  const std::vector<Scalar> upow = scalar_powers(vk.base_u, l);
  bn::G1 recombined = bn::G1::identity();
  for (uint32_t j = 0; j < l; ++j) {
    recombined += proof.digit_commitments[j].element.g1() * upow[j];
  }
  if (GroupElement(recombined) != com.element) return RangeVerifyResult::kInconsistentDigits;

  const bn::G1& g = vk.params.g.g1();
  const bn::G1& h = vk.params.h.g1();
  const Scalar& c = proof.challenge;
  for (uint32_t j = 0; j < l; ++j) {
    const DigitProof& dp = proof.digit_proofs[j];
    const bn::G1& cj = proof.digit_commitments[j].element.g1();
    const bn::G1& v = dp.blinded_signature.g1();

    if (GroupElement(cj * c + g * dp.z_digit + h * dp.z_blinding) != dp.announce_commit) {
      return RangeVerifyResult::kCommitmentRelation;
    }

    // e(V, Y)^c * e(V, g2)^{-z_digit} * e(g1, g2)^{z_exponent} must equal
    // the announcement; evaluated as one two-pair product.
    const bn::G1 p1 = v * c;
    const bn::G1 p2 = v * (Scalar::zero() - dp.z_digit) + bn::G1::generator() * dp.z_exponent;
    const bn::MillerPair pairs[] = {{&p1, &vk.prep_y}, {&p2, &vk.prep_g2}};
    if (bn::final_exponentiation(bn::miller_loop(pairs)) != dp.announce_pairing.gt()) {
      return RangeVerifyResult::kPairingRelation;
    }
  }
  return RangeVerifyResult::kOk;
}

bool verify_range(const VerificationKey& vk, const Commitment& com, int64_t lo, int64_t hi,
                  const RangeProof& proof) {
  return verify_range_detailed(vk, com, lo, hi, proof) == RangeVerifyResult::kOk;
}

const char* range_verify_result_name(RangeVerifyResult r) {
  switch (r) {
    case RangeVerifyResult::kOk: return "Ok";
    case RangeVerifyResult::kMalformed: return "Malformed";
    case RangeVerifyResult::kChallengeMismatch: return "ChallengeMismatch";
    case RangeVerifyResult::kInconsistentDigits: return "InconsistentDigits";
    case RangeVerifyResult::kCommitmentRelation: return "CommitmentRelation";
    case RangeVerifyResult::kPairingRelation: return "PairingRelation";
  }
  return "Unknown";
}

Bytes RangeProof::to_bytes() const {
  ByteWriter w;
  w.raw(str_bytes(kRangeProofMagic));
  write_range_proof(w, *this);
  return w.take();
}

std::optional<RangeProof> RangeProof::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    expect_magic(r, kRangeProofMagic, "range proof");
    RangeProof p = read_range_proof(r);
    r.expect_done();
    return p;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// -- Set membership ---------------------------------------------------------

void SetProvingKey::rebuild_cache() {
  element_pairings.clear();
  element_pairings.reserve(signatures.size());
  for (const GroupElement& a : signatures) {
    element_pairings.push_back(bn::pairing(a.g1(), bn::G2::generator()));
  }
}

void SetVerificationKey::rebuild_cache() {
  prep_y = bn::prepare_g2(y.g2());
  prep_g2 = bn::prepare_g2(bn::G2::generator());
}

std::pair<SetProvingKey, SetVerificationKey> set_setup(std::span<const int64_t> elements,
                                                       std::span<const uint8_t> admin_secret_seed) {
  if (elements.empty()) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "element set must be nonempty");
  }
  std::vector<int64_t> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ProtocolError(ErrorCode::kInvalidParameter, "element set contains duplicates");
  }

  PedersenParams params = pedersen_setup(admin_secret_seed);
  DeterministicRng seed_rng(admin_secret_seed);
  DeterministicRng x_rng = seed_rng.fork("zkrp.set.x");
  const Scalar x = Scalar::random(x_rng);

  SetProvingKey spk;
  spk.params = params;
  spk.y = GroupElement(bn::G2::generator() * x);
  spk.elements = sorted;
  spk.signatures.reserve(sorted.size());
  for (int64_t e : sorted) spk.signatures.push_back(bb_sign(x, scalar_from_i64(e)));
  spk.rebuild_cache();

  SetVerificationKey svk;
  svk.params = params;
  svk.y = spk.y;
  svk.elements = sorted;
  svk.rebuild_cache();
  return {std::move(spk), std::move(svk)};
}

std::pair<Commitment, SetMembershipProof> prove_set_membership(const SetProvingKey& spk,
                                                               int64_t value,
                                                               const Scalar& blinding, Rng& rng) {
  const auto it = std::lower_bound(spk.elements.begin(), spk.elements.end(), value);
  if (it == spk.elements.end() || *it != value) {
    throw ProtocolError(ErrorCode::kOutOfRange, "value is not a set member");
  }
  const size_t idx = static_cast<size_t>(it - spk.elements.begin());

  const bn::G1& g = spk.params.g.g1();
  const bn::G1& h = spk.params.h.g1();
  const Scalar value_fr = scalar_from_i64(value);
  const Commitment com{GroupElement(g * value_fr + h * blinding)};

  const Scalar v = nonzero_scalar(rng);
  const Scalar s = Scalar::random(rng);
  const Scalar m = Scalar::random(rng);
  const Scalar t = Scalar::random(rng);

  SetMembershipProof proof;
  proof.blinded_signature = GroupElement(spk.signatures[idx].g1() * v);
  proof.announce_pairing =
      GroupElement(bn::gt_pow(spk.element_pairings[idx], Scalar::zero() - s * v) *
                   bn::gt_pow(base_pairing(), t));
  proof.announce_commit = GroupElement(g * s + h * m);
  proof.challenge = set_challenge(spk.params, spk.y, spk.elements, com, proof);
  proof.z_value = s - proof.challenge * value_fr;
  proof.z_blinding = m - proof.challenge * blinding;
  proof.z_exponent = t - proof.challenge * v;
  return {com, std::move(proof)};
}

bool verify_set_membership(const SetVerificationKey& svk, const Commitment& com,
                           const SetMembershipProof& proof) {
  if (com.element.group() != GroupElement::Group::kG1 ||
      proof.blinded_signature.group() != GroupElement::Group::kG1 ||
      proof.announce_pairing.group() != GroupElement::Group::kGt ||
      proof.announce_commit.group() != GroupElement::Group::kG1 ||
      proof.blinded_signature.is_identity()) {
    return false;
  }
  if (set_challenge(svk.params, svk.y, svk.elements, com, proof) != proof.challenge) return false;

  const bn::G1& g = svk.params.g.g1();
  const bn::G1& h = svk.params.h.g1();
  const bn::G1& v = proof.blinded_signature.g1();
  const Scalar& c = proof.challenge;

  if (GroupElement(com.element.g1() * c + g * proof.z_value + h * proof.z_blinding) !=
      proof.announce_commit) {
    return false;
  }
  const bn::G1 p1 = v * c;
  const bn::G1 p2 = v * (Scalar::zero() - proof.z_value) + bn::G1::generator() * proof.z_exponent;
  const bn::MillerPair pairs[] = {{&p1, &svk.prep_y}, {&p2, &svk.prep_g2}};
  return bn::final_exponentiation(bn::miller_loop(pairs)) == proof.announce_pairing.gt();
}

// -- Location proofs --------------------------------------------------------

Signature device_sign(const SigSecretKey& device_sk, const Commitment& com_x,
                      const Commitment& com_y, int zone, bool north, std::string_view device_id,
                      uint64_t timestamp) {
  return sig_sign(device_sk, device_payload(com_x, com_y, zone, north, device_id, timestamp));
}

bool device_verify(const DeviceAttestation& att, const Commitment& com_x,
                   const Commitment& com_y) {
  return sig_verify(att.device_pub,
                    device_payload(com_x, com_y, att.zone, att.north, att.device_id,
                                   att.timestamp),
                    att.signature);
}

SignedCoordinates attest_coordinates(const SigSecretKey& device_sk,
                                     const SigPublicKey& device_pub, std::string_view device_id,
                                     uint64_t timestamp, const PedersenParams& params,
                                     const GridIndex& idx, Rng& rng) {
  SignedCoordinates out;
  out.witness.e10 = idx.e10;
  out.witness.n10 = idx.n10;
  out.witness.r_x = Scalar::random(rng);
  out.witness.r_y = Scalar::random(rng);
  out.commitment_x = commit(params, scalar_from_i64(idx.e10), out.witness.r_x);
  out.commitment_y = commit(params, scalar_from_i64(idx.n10), out.witness.r_y);
  out.attestation.device_id = std::string(device_id);
  out.attestation.device_pub = device_pub;
  out.attestation.timestamp = timestamp;
  out.attestation.zone = idx.zone;
  out.attestation.north = idx.north;
  out.attestation.signature = device_sign(device_sk, out.commitment_x, out.commitment_y,
                                          idx.zone, idx.north, device_id, timestamp);
  return out;
}

namespace {

void write_location_body(ByteWriter& w, const LocationProof& p) {
  w.raw(p.commitment_x.element.to_bytes());
  w.raw(p.commitment_y.element.to_bytes());
  w.str(p.device.device_id);
  w.raw(p.device.device_pub);
  w.u64(p.device.timestamp);
  w.u32(static_cast<uint32_t>(p.device.zone));
  w.u8(p.device.north ? 1 : 0);
  w.raw(p.device.signature);
  w.u32(static_cast<uint32_t>(p.bounds.zone));
  w.u8(p.bounds.north ? 1 : 0);
  w.i64(p.bounds.e10_lo);
  w.i64(p.bounds.e10_hi);
  w.i64(p.bounds.n10_lo);
  w.i64(p.bounds.n10_hi);
  for (const RangeProof* rp : {&p.lower_x, &p.upper_x, &p.lower_y, &p.upper_y}) {
    write_range_proof(w, *rp);
  }
  w.raw(p.seller_pub);
}

void read_location_body(ByteReader& r, LocationProof& p) {
  p.commitment_x = Commitment{read_element(r, GroupElement::Group::kG1, 32)};
  p.commitment_y = Commitment{read_element(r, GroupElement::Group::kG1, 32)};
  p.device.device_id = r.str();
  p.device.device_pub = r.fixed<32>();
  p.device.timestamp = r.u64();
  p.device.zone = static_cast<int>(r.u32());
  p.device.north = r.u8() != 0;
  p.device.signature = r.fixed<64>();
  p.bounds.zone = static_cast<int>(r.u32());
  p.bounds.north = r.u8() != 0;
  p.bounds.e10_lo = r.i64();
  p.bounds.e10_hi = r.i64();
  p.bounds.n10_lo = r.i64();
  p.bounds.n10_hi = r.i64();
  for (RangeProof* rp : {&p.lower_x, &p.upper_x, &p.lower_y, &p.upper_y}) {
    *rp = read_range_proof(r);
  }
  p.seller_pub = r.fixed<32>();
}

}  // namespace

Bytes LocationProof::signing_bytes() const {
  ByteWriter w;
  w.str(kLocationDomain);
  write_location_body(w, *this);
  return w.take();
}

Bytes LocationProof::to_bytes() const {
  ByteWriter w;
  w.raw(str_bytes(kLocationProofMagic));
  write_location_body(w, *this);
  w.raw(seller_signature);
  return w.take();
}

std::optional<LocationProof> LocationProof::from_bytes(std::span<const uint8_t> in) {
  try {
    ByteReader r(in);
    expect_magic(r, kLocationProofMagic, "location proof");
    LocationProof p;
    read_location_body(r, p);
    p.seller_signature = r.fixed<64>();
    r.expect_done();
    return p;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

LocationProof prove_location(const ProvingKey& pk, const SignedCoordinates& coords,
                             const Region& region, const SigSecretKey& seller_sk,
                             const SigPublicKey& seller_pub, Rng& rng) {
  if (!device_verify(coords.attestation, coords.commitment_x, coords.commitment_y)) {
    throw ProtocolError(ErrorCode::kBadDeviceSignature, "device attestation does not verify");
  }
  const CoordinateWitness& wit = coords.witness;
  if (commit(pk.params, scalar_from_i64(wit.e10), wit.r_x) != coords.commitment_x ||
      commit(pk.params, scalar_from_i64(wit.n10), wit.r_y) != coords.commitment_y) {
    throw ProtocolError(ErrorCode::kInvalidParameter,
                        "witness does not open the attested commitments");
  }
  if (coords.attestation.zone != region.zone || coords.attestation.north != region.north) {
    throw ProtocolError(ErrorCode::kOutOfRegion, "attested zone band outside the region");
  }
  if (wit.e10 < region.e10_lo || wit.e10 > region.e10_hi || wit.n10 < region.n10_lo ||
      wit.n10 > region.n10_hi) {
    throw ProtocolError(ErrorCode::kOutOfRegion, "coordinates outside the region rectangle");
  }

  LocationProof proof;
  proof.commitment_x = coords.commitment_x;
  proof.commitment_y = coords.commitment_y;
  proof.device = coords.attestation;
  proof.bounds = region.rect();

  // Two one-sided proofs per axis: delta - lo >= 0 and hi - delta >= 0, the
  // latter under the negated blinding so its commitment is derivable from
  // the public one.
  proof.lower_x =
      prove_range(pk, wit.e10, wit.r_x, region.e10_lo, region.e10_hi, rng).second;
  proof.upper_x = prove_range(pk, region.e10_hi - wit.e10, Scalar::zero() - wit.r_x, 0,
                              region.e10_hi - region.e10_lo, rng)
                      .second;
  proof.lower_y =
      prove_range(pk, wit.n10, wit.r_y, region.n10_lo, region.n10_hi, rng).second;
  proof.upper_y = prove_range(pk, region.n10_hi - wit.n10, Scalar::zero() - wit.r_y, 0,
                              region.n10_hi - region.n10_lo, rng)
                      .second;

  proof.seller_pub = seller_pub;
  proof.seller_signature = sig_sign(seller_sk, proof.signing_bytes());
  return proof;
}

const char* location_reason_name(LocationReason r) {
  switch (r) {
    case LocationReason::kVerified: return "Verified";
    case LocationReason::kMalformed: return "Malformed";
    case LocationReason::kSellerSignature: return "SellerSignature";
    case LocationReason::kDeviceSignature: return "DeviceSignature";
    case LocationReason::kZoneMismatch: return "ZoneMismatch";
    case LocationReason::kChallengeMismatch: return "ChallengeMismatch";
    case LocationReason::kInconsistentDigits: return "InconsistentDigits";
    case LocationReason::kCommitmentRelation: return "CommitmentRelation";
    case LocationReason::kPairingRelation: return "PairingRelation";
    case LocationReason::kUnknownRegion: return "UnknownRegion";
  }
  return "Unknown";
}

namespace {

LocationReason map_range_result(RangeVerifyResult r) {
  switch (r) {
    case RangeVerifyResult::kOk: return LocationReason::kVerified;
    case RangeVerifyResult::kMalformed: return LocationReason::kMalformed;
    case RangeVerifyResult::kChallengeMismatch: return LocationReason::kChallengeMismatch;
    case RangeVerifyResult::kInconsistentDigits: return LocationReason::kInconsistentDigits;
    case RangeVerifyResult::kCommitmentRelation: return LocationReason::kCommitmentRelation;
    case RangeVerifyResult::kPairingRelation: return LocationReason::kPairingRelation;
  }
  return LocationReason::kMalformed;
}

}  // namespace

LocationResult verify_location(const VerificationKey& vk, const RegionRegistry& registry,
                               const LocationProof& proof) {
  const auto fail = [](LocationReason r) { return LocationResult{std::nullopt, r}; };

  if (proof.commitment_x.element.group() != GroupElement::Group::kG1 ||
      proof.commitment_y.element.group() != GroupElement::Group::kG1 ||
      proof.bounds.e10_lo > proof.bounds.e10_hi || proof.bounds.n10_lo > proof.bounds.n10_hi) {
    return fail(LocationReason::kMalformed);
  }
  if (!sig_verify(proof.seller_pub, proof.signing_bytes(), proof.seller_signature)) {
    return fail(LocationReason::kSellerSignature);
  }
  if (!device_verify(proof.device, proof.commitment_x, proof.commitment_y)) {
    return fail(LocationReason::kDeviceSignature);
  }
  if (proof.device.zone != proof.bounds.zone || proof.device.north != proof.bounds.north) {
    return fail(LocationReason::kZoneMismatch);
  }

  const bn::G1& g = vk.params.g.g1();
  const bn::G1& com_x = proof.commitment_x.element.g1();
  const bn::G1& com_y = proof.commitment_y.element.g1();
  const GridRect& b = proof.bounds;

  struct Side {
    Commitment com;
    int64_t lo, hi;
    const RangeProof* proof;
  };
  const Side sides[4] = {
      // x - lo_x, committed as com_x shifted by -lo_x.
      {Commitment{GroupElement(com_x - g * scalar_from_i64(b.e10_lo))}, b.e10_lo, b.e10_hi,
       &proof.lower_x},
      // hi_x - x, committed as the reflection of com_x about hi_x.
      {Commitment{GroupElement(g * scalar_from_i64(b.e10_hi) - com_x)}, 0, b.e10_hi - b.e10_lo,
       &proof.upper_x},
      {Commitment{GroupElement(com_y - g * scalar_from_i64(b.n10_lo))}, b.n10_lo, b.n10_hi,
       &proof.lower_y},
      {Commitment{GroupElement(g * scalar_from_i64(b.n10_hi) - com_y)}, 0, b.n10_hi - b.n10_lo,
       &proof.upper_y},
  };
  for (const Side& side : sides) {
    const RangeVerifyResult r = verify_range_detailed(vk, side.com, side.lo, side.hi, *side.proof);
    if (r != RangeVerifyResult::kOk) return fail(map_range_result(r));
  }

  const Region* region = registry.find_by_rect(proof.bounds);
  if (!region) return fail(LocationReason::kUnknownRegion);
  return LocationResult{region->name, LocationReason::kVerified};
}

}  // namespace privchain
