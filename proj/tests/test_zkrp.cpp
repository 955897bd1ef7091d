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
#include <doctest.h>

#include <filesystem>
#include <optional>
#include <set>

#include "privchain/pairing.hpp"
#include "privchain/zkrp.hpp"

using namespace privchain;

namespace {

const std::pair<ProvingKey, VerificationKey>& decimal_keys() {
  static const auto keys = zkrp_setup(10, 8, str_bytes("zkrp unit test decimal"));
  return keys;
}

const std::pair<ProvingKey, VerificationKey>& binary_keys() {
  static const auto keys = zkrp_setup(2, 16, str_bytes("zkrp unit test binary"));
  return keys;
}

template <typename F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const ProtocolError& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Mirrors the range-proof transcript layout so tests can re-issue the
/// challenge after deliberately mutating a proof component. Any drift in the
/// production transcript shows up here as a challenge mismatch on honest
/// proofs, pinning the wire format.
Scalar recompute_challenge(const VerificationKey& vk, const Commitment& com, int64_t lo,
                           int64_t hi, const RangeProof& p) {
  Transcript t("privchain.zkrp.range.v1");
  t.absorb_element("g", vk.params.g);
  t.absorb_element("h", vk.params.h);
  t.absorb_element("Y", vk.y);
  t.absorb_u64("u", vk.base_u);
  t.absorb_u64("l", p.width_digits);
  t.absorb_i64("lo", lo);
  t.absorb_i64("hi", hi);
  t.absorb_element("com", com.element);
  for (uint32_t j = 0; j < p.width_digits; ++j) {
    t.absorb_element("C", p.digit_commitments[j].element);
    t.absorb_element("V", p.digit_proofs[j].blinded_signature);
    t.absorb_element("a", p.digit_proofs[j].announce_pairing);
    t.absorb_element("D", p.digit_proofs[j].announce_commit);
  }
  return t.challenge();
}

std::vector<Region> test_regions() {
  return {
      Region{"bordeaux", 30, true, 48000, 48159, 495000, 495099},
      Region{"rioja", 30, true, 52000, 52079, 469000, 469049},
      Region{"mendoza", 19, false, 41000, 41099, 637000, 637199},
      Region{"dot", 30, true, 48500, 48500, 495500, 495500},
  };
}

struct LocationFixture {
  ProvingKey pk;
  VerificationKey vk;
  RegionRegistry registry;
  SigKeyPair device;
  SigKeyPair seller;

  LocationFixture()
      : pk(decimal_keys().first),
        vk(decimal_keys().second),
        registry(test_regions()) {
    DeterministicRng rng(str_bytes("zkrp location fixture"));
    device = sig_keygen(rng);
    seller = sig_keygen(rng);
  }

  SignedCoordinates attest(const GridIndex& idx, Rng& rng) const {
    return attest_coordinates(device.sec, device.pub, "sensor-7", 1700000000, pk.params, idx,
                              rng);
  }
};

const LocationFixture& location_fixture() {
  static const LocationFixture f;
  return f;
}

LocationProof resigned(LocationProof p, const SigSecretKey& sk) {
  p.seller_signature = sig_sign(sk, p.signing_bytes());
  return p;
}

/// Collects the serialized group elements of a range proof, for checking that
/// independent proofs share no visible algebraic material.
std::set<std::string> element_fingerprints(const RangeProof& p) {
  std::set<std::string> out;
  for (const auto& c : p.digit_commitments) out.insert(to_hex(c.element.to_bytes()));
  for (const auto& d : p.digit_proofs) {
    out.insert(to_hex(d.blinded_signature.to_bytes()));
    out.insert(to_hex(d.announce_pairing.to_bytes()));
    out.insert(to_hex(d.announce_commit.to_bytes()));
  }
  return out;
}

}  // namespace

TEST_CASE("digit decomposition matches the direct place-value formula") {
  for (uint32_t u : {2u, 4u, 10u}) {
    for (uint32_t l : {1u, 2u, 3u}) {
      int64_t bound = 1;
      for (uint32_t i = 0; i < l; ++i) bound *= u;
      for (int64_t v = 0; v < bound; ++v) {
        const auto digits = decompose(v, u, l);
        REQUIRE(digits.size() == l);
        int64_t place = 1;
        for (uint32_t j = 0; j < l; ++j) {
          CHECK(digits[j] == static_cast<uint32_t>((v / place) % u));
          CHECK(digits[j] < u);
          place *= u;
        }
        CHECK(recompose(digits, u) == v);
      }
      CHECK(thrown_code([&] { decompose(bound, u, l); }) == ErrorCode::kOutOfRange);
      CHECK(thrown_code([&] { decompose(-1, u, l); }) == ErrorCode::kOutOfRange);
    }
  }

  CHECK(thrown_code([] { decompose(0, 1, 4); }) == ErrorCode::kInvalidParameter);
  CHECK(thrown_code([] { decompose(0, 10, 0); }) == ErrorCode::kInvalidParameter);
  const uint32_t bad_digit[] = {10};
  CHECK(thrown_code([&] { recompose(bad_digit, 10); }) == ErrorCode::kOutOfRange);
  const std::vector<uint32_t> huge(64, 1);
  CHECK(thrown_code([&] { recompose(huge, 10); }) == ErrorCode::kOutOfRange);

  // Wide but representable values survive the round trip.
  const int64_t big = 0x7edcba9876543210;
  CHECK(recompose(decompose(big, 2, 63), 2) == big);
}

TEST_CASE("signed integers embed into the scalar field homomorphically") {
  const bn::G1 g = bn::G1::generator();
  CHECK((g * scalar_from_i64(-5) + g * Scalar::from_u64(5)).is_identity());
  CHECK(scalar_from_i64(7) == Scalar::from_u64(7));
  CHECK(scalar_from_i64(0) == Scalar::zero());
  const Scalar min = scalar_from_i64(std::numeric_limits<int64_t>::min());
  CHECK(min + Scalar::from_u64(uint64_t(1) << 63) == Scalar::zero());
  CHECK(scalar_from_i64(std::numeric_limits<int64_t>::max()) ==
        Scalar::from_u64(uint64_t(std::numeric_limits<int64_t>::max())));
}

TEST_CASE("range setup is deterministic and validates its parameters") {
  const auto [pk1, vk1] = zkrp_setup(10, 4, str_bytes("setup determinism"));
  const auto [pk2, vk2] = zkrp_setup(10, 4, str_bytes("setup determinism"));
  CHECK(pk1.to_bytes() == pk2.to_bytes());
  CHECK(vk1.to_bytes() == vk2.to_bytes());

  const auto [pk3, vk3] = zkrp_setup(10, 4, str_bytes("a different admin seed"));
  CHECK(vk1.y != vk3.y);
  CHECK(vk1.params.h != vk3.params.h);

  REQUIRE(pk1.digit_signatures.size() == 10);
  for (uint32_t i = 0; i < 10; ++i) {
    CHECK(bb_verify(pk1.y, Scalar::from_u64(i), pk1.digit_signatures[i]));
  }
  // A signature for one digit never validates as another digit's.
  CHECK_FALSE(bb_verify(pk1.y, Scalar::from_u64(3), pk1.digit_signatures[4]));

  CHECK(thrown_code([] { zkrp_setup(1, 4, str_bytes("s")); }) == ErrorCode::kInvalidParameter);
  CHECK(thrown_code([] { zkrp_setup(257, 4, str_bytes("s")); }) ==
        ErrorCode::kInvalidParameter);
  CHECK(thrown_code([] { zkrp_setup(10, 0, str_bytes("s")); }) == ErrorCode::kInvalidParameter);
  CHECK(thrown_code([] { zkrp_setup(10, 65, str_bytes("s")); }) ==
        ErrorCode::kInvalidParameter);
}

TEST_CASE("range proofs verify across bases, intervals, and endpoints") {
  DeterministicRng rng(str_bytes("range completeness"));

  struct Case {
    const std::pair<ProvingKey, VerificationKey>& keys;
    int64_t lo, hi;
    std::vector<int64_t> deltas;
  };
  const Case cases[] = {
      {decimal_keys(), 0, 9999, {0, 1, 4321, 9999}},
      {decimal_keys(), -500, 499, {-500, -1, 0, 499}},
      {binary_keys(), 3, 18, {3, 10, 18}},
      {decimal_keys(), 7, 7, {7}},  // width-one interval still carries a digit
  };

  for (const Case& c : cases) {
    const auto& [pk, vk] = c.keys;
    for (int64_t delta : c.deltas) {
      CAPTURE(c.lo);
      CAPTURE(c.hi);
      CAPTURE(delta);
      const Scalar blinding = Scalar::random(rng);
      const auto [com, proof] = prove_range(pk, delta, blinding, c.lo, c.hi, rng);

      // The returned commitment opens to the shifted value delta - lo.
      CHECK(open_verify(pk.params, com, Opening{scalar_from_i64(delta - c.lo), blinding}));
      CHECK(proof.lo == c.lo);
      CHECK(verify_range_detailed(vk, com, c.lo, c.hi, proof) == RangeVerifyResult::kOk);
      CHECK(verify_range(vk, com, c.lo, c.hi, proof));

      // Honest proofs survive the test's own transcript mirror; if this
      // drifts, the mirror and the implementation have diverged.
      CHECK(recompute_challenge(vk, com, c.lo, c.hi, proof) == proof.challenge);
    }
  }
}

TEST_CASE("the prover refuses any value outside the requested interval") {
  DeterministicRng rng(str_bytes("interval exactness"));
  const auto& [pk, vk] = decimal_keys();
  const int64_t lo = 100, hi = 119;  // width 20

  for (int64_t delta = lo - 5; delta <= hi + 5; ++delta) {
    CAPTURE(delta);
    const Scalar blinding = Scalar::random(rng);
    if (delta >= lo && delta <= hi) {
      const auto [com, proof] = prove_range(pk, delta, blinding, lo, hi, rng);
      CHECK(verify_range(vk, com, lo, hi, proof));
    } else {
      CHECK(thrown_code([&] { (void)prove_range(pk, delta, blinding, lo, hi, rng); }) ==
            ErrorCode::kOutOfRange);
    }
  }

  // Intervals beyond the key's digit capacity are refused up front.
  const auto [small_pk, small_vk] = zkrp_setup(10, 2, str_bytes("narrow key"));
  CHECK(thrown_code([&] {
          (void)prove_range(small_pk, 0, Scalar::from_u64(1), 0, 100, rng);
        }) == ErrorCode::kInvalidParameter);
  // An empty interval contains nothing.
  CHECK(thrown_code([&] { (void)prove_range(pk, 5, Scalar::from_u64(1), 6, 4, rng); }) ==
        ErrorCode::kOutOfRange);
}

TEST_CASE("verification pins the interval the proof was made for") {
  DeterministicRng rng(str_bytes("interval binding"));
  const auto& [pk, vk] = decimal_keys();
  const auto [com, proof] = prove_range(pk, 42, Scalar::random(rng), 0, 99, rng);

  CHECK(verify_range_detailed(vk, com, 0, 99, proof) == RangeVerifyResult::kOk);
  // Different lower bound: structurally inconsistent with the proof body.
  CHECK(verify_range_detailed(vk, com, 1, 99, proof) == RangeVerifyResult::kMalformed);
  // Same digit count, different upper bound: the transcript disagrees.
  CHECK(verify_range_detailed(vk, com, 0, 98, proof) ==
        RangeVerifyResult::kChallengeMismatch);
  // Wider interval changes the digit count.
  CHECK(verify_range_detailed(vk, com, 0, 999, proof) == RangeVerifyResult::kMalformed);
  // Inverted interval.
  CHECK(verify_range_detailed(vk, com, 99, 0, proof) == RangeVerifyResult::kMalformed);
  // A different commitment cannot adopt this proof.
  const Commitment other{GroupElement(com.element.g1() + bn::G1::generator())};
  CHECK(verify_range_detailed(vk, other, 0, 99, proof) ==
        RangeVerifyResult::kChallengeMismatch);

  // Keys with another digit base or another admin seed reject the proof.
  const auto [com2, proof2] = prove_range(pk, 1, Scalar::random(rng), 0, 1, rng);
  REQUIRE(proof2.width_digits == 1);
  CHECK(verify_range_detailed(binary_keys().second, com2, 0, 1, proof2) ==
        RangeVerifyResult::kChallengeMismatch);
  const auto [pk3, vk3] = zkrp_setup(10, 8, str_bytes("unrelated authority"));
  CHECK(verify_range_detailed(vk3, com, 0, 99, proof) ==
        RangeVerifyResult::kChallengeMismatch);
}

TEST_CASE("every tampered range-proof component is rejected") {
  DeterministicRng rng(str_bytes("range mutations"));
  const auto& [pk, vk] = decimal_keys();
  const int64_t lo = 0, hi = 99;
  const auto [com, good] = prove_range(pk, 42, Scalar::random(rng), lo, hi, rng);
  REQUIRE(verify_range_detailed(vk, com, lo, hi, good) == RangeVerifyResult::kOk);

  const bn::G1 g1 = bn::G1::generator();
  const bn::Fp12 e1 = bn::pairing(g1, bn::G2::generator());

  SUBCASE("challenge flip") {
    RangeProof p = good;
    p.challenge = p.challenge + Scalar::one();
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kChallengeMismatch);
  }
  SUBCASE("digit commitment changed without fixing the challenge") {
    RangeProof p = good;
    p.digit_commitments[0].element = GroupElement(p.digit_commitments[0].element.g1() + g1);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kChallengeMismatch);
  }
  SUBCASE("digit commitment changed with a fixed-up challenge") {
    RangeProof p = good;
    p.digit_commitments[0].element = GroupElement(p.digit_commitments[0].element.g1() + g1);
    p.challenge = recompute_challenge(vk, com, lo, hi, p);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kInconsistentDigits);
  }
  SUBCASE("blinding response") {
    RangeProof p = good;
    p.digit_proofs[1].z_blinding = p.digit_proofs[1].z_blinding + Scalar::one();
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kCommitmentRelation);
  }
  SUBCASE("digit response") {
    RangeProof p = good;
    p.digit_proofs[0].z_digit = p.digit_proofs[0].z_digit + Scalar::one();
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kCommitmentRelation);
  }
  SUBCASE("exponent response") {
    RangeProof p = good;
    p.digit_proofs[0].z_exponent = p.digit_proofs[0].z_exponent + Scalar::one();
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kPairingRelation);
  }
  SUBCASE("blinded signature with a fixed-up challenge") {
    // Recomputing the challenge over the mutated transcript leaves every
    // response stale, so the first response equation already fails.
    RangeProof p = good;
    p.digit_proofs[0].blinded_signature =
        GroupElement(p.digit_proofs[0].blinded_signature.g1() + g1);
    p.challenge = recompute_challenge(vk, com, lo, hi, p);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kCommitmentRelation);
  }
  SUBCASE("pairing announcement with a fixed-up challenge") {
    RangeProof p = good;
    p.digit_proofs[0].announce_pairing =
        GroupElement(p.digit_proofs[0].announce_pairing.gt() * e1);
    p.challenge = recompute_challenge(vk, com, lo, hi, p);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kCommitmentRelation);
  }
  SUBCASE("commitment announcement with a fixed-up challenge") {
    RangeProof p = good;
    p.digit_proofs[1].announce_commit =
        GroupElement(p.digit_proofs[1].announce_commit.g1() + g1);
    p.challenge = recompute_challenge(vk, com, lo, hi, p);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) ==
          RangeVerifyResult::kCommitmentRelation);
  }
  SUBCASE("identity blinded signature is structurally rejected") {
    RangeProof p = good;
    p.digit_proofs[0].blinded_signature = GroupElement(bn::G1::identity());
    p.challenge = recompute_challenge(vk, com, lo, hi, p);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kMalformed);
  }
  SUBCASE("group confusion in an announcement") {
    RangeProof p = good;
    p.digit_proofs[0].announce_pairing = GroupElement(g1);
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kMalformed);
  }
  SUBCASE("dropped digit") {
    RangeProof p = good;
    p.digit_commitments.pop_back();
    p.digit_proofs.pop_back();
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kMalformed);
  }
  SUBCASE("claimed digit count changed") {
    RangeProof p = good;
    p.width_digits = 3;
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kMalformed);
  }
  SUBCASE("claimed lower bound changed") {
    RangeProof p = good;
    p.lo = 1;
    CHECK(verify_range_detailed(vk, com, lo, hi, p) == RangeVerifyResult::kMalformed);
  }
}

TEST_CASE("a value outside the interval cannot ride on mismatched signatures") {
  // Adversary: prove 105 in [0, 99]. The digit split is {5, 10}, but no
  // signature exists for digit 10, so the forger substitutes the one for 3
  // and otherwise follows the protocol exactly — consistent commitments,
  // announcements, challenge, and responses. Only the pairing equation can
  // tell the difference, and it must.
  DeterministicRng rng(str_bytes("signature forgery"));
  const auto& [pk, vk] = decimal_keys();
  const bn::G1 g = pk.params.g.g1();
  const bn::G1 h = pk.params.h.g1();
  const bn::Fp12 e1 = bn::pairing(bn::G1::generator(), bn::G2::generator());

  const Scalar blinding = Scalar::random(rng);
  const Commitment com{GroupElement(g * Scalar::from_u64(105) + h * blinding)};

  const uint32_t claimed[2] = {5, 10};
  const uint32_t signature_index[2] = {5, 3};
  Scalar r[2];
  r[1] = Scalar::random(rng);
  r[0] = blinding - r[1] * Scalar::from_u64(10);

  RangeProof p;
  p.lo = 0;
  p.width_digits = 2;
  Scalar s[2], m[2], t[2], v[2];
  for (int j = 0; j < 2; ++j) {
    p.digit_commitments.push_back(
        Commitment{GroupElement(g * Scalar::from_u64(claimed[j]) + h * r[j])});
    s[j] = Scalar::random(rng);
    m[j] = Scalar::random(rng);
    t[j] = Scalar::random(rng);
    v[j] = Scalar::random(rng);
    DigitProof d;
    d.blinded_signature = GroupElement(pk.digit_signatures[signature_index[j]].g1() * v[j]);
    d.announce_pairing =
        GroupElement(bn::gt_pow(pk.digit_pairings[signature_index[j]],
                                Scalar::zero() - s[j] * v[j]) *
                     bn::gt_pow(e1, t[j]));
    d.announce_commit = GroupElement(g * s[j] + h * m[j]);
    p.digit_proofs.push_back(std::move(d));
  }
  p.challenge = recompute_challenge(vk, com, 0, 99, p);
  for (int j = 0; j < 2; ++j) {
    p.digit_proofs[j].z_digit = s[j] - p.challenge * Scalar::from_u64(claimed[j]);
    p.digit_proofs[j].z_blinding = m[j] - p.challenge * r[j];
    p.digit_proofs[j].z_exponent = t[j] - p.challenge * v[j];
  }

  CHECK(verify_range_detailed(vk, com, 0, 99, p) == RangeVerifyResult::kPairingRelation);

  // Sanity: the same construction with honest digits and signatures passes,
  // so the rejection above is the signature mismatch, not a setup artifact.
  const Scalar blinding2 = Scalar::random(rng);
  const Commitment com2{GroupElement(g * Scalar::from_u64(35) + h * blinding2)};
  Scalar r2[2];
  r2[1] = Scalar::random(rng);
  r2[0] = blinding2 - r2[1] * Scalar::from_u64(10);
  const uint32_t honest[2] = {5, 3};
  RangeProof q;
  q.lo = 0;
  q.width_digits = 2;
  for (int j = 0; j < 2; ++j) {
    q.digit_commitments.push_back(
        Commitment{GroupElement(g * Scalar::from_u64(honest[j]) + h * r2[j])});
    DigitProof d;
    d.blinded_signature = GroupElement(pk.digit_signatures[honest[j]].g1() * v[j]);
    d.announce_pairing = GroupElement(
        bn::gt_pow(pk.digit_pairings[honest[j]], Scalar::zero() - s[j] * v[j]) *
        bn::gt_pow(e1, t[j]));
    d.announce_commit = GroupElement(g * s[j] + h * m[j]);
    q.digit_proofs.push_back(std::move(d));
  }
  q.challenge = recompute_challenge(vk, com2, 0, 99, q);
  for (int j = 0; j < 2; ++j) {
    q.digit_proofs[j].z_digit = s[j] - q.challenge * Scalar::from_u64(honest[j]);
    q.digit_proofs[j].z_blinding = m[j] - q.challenge * r2[j];
    q.digit_proofs[j].z_exponent = t[j] - q.challenge * v[j];
  }
  CHECK(verify_range_detailed(vk, com2, 0, 99, q) == RangeVerifyResult::kOk);
}

TEST_CASE("digits cannot be shuffled between positions") {
  // Swapping two digit columns preserves the per-digit relations but breaks
  // the weighted recombination, unless the digits happen to be equal.
  DeterministicRng rng(str_bytes("digit shuffle"));
  const auto& [pk, vk] = decimal_keys();
  const auto [com, good] = prove_range(pk, 42, Scalar::random(rng), 0, 99, rng);

  RangeProof p = good;
  std::swap(p.digit_commitments[0], p.digit_commitments[1]);
  std::swap(p.digit_proofs[0], p.digit_proofs[1]);
  p.challenge = recompute_challenge(vk, com, 0, 99, p);
  CHECK(verify_range_detailed(vk, com, 0, 99, p) == RangeVerifyResult::kInconsistentDigits);
}

TEST_CASE("range proof bytes round-trip and reject corruption") {
  DeterministicRng rng(str_bytes("range codec"));
  const auto& [pk, vk] = decimal_keys();
  const auto [com, proof] = prove_range(pk, -3, Scalar::random(rng), -50, 49, rng);

  const Bytes wire = proof.to_bytes();
  const auto restored = RangeProof::from_bytes(wire);
  REQUIRE(restored.has_value());
  CHECK(restored->to_bytes() == wire);
  CHECK(verify_range_detailed(vk, com, -50, 49, *restored) == RangeVerifyResult::kOk);

  CHECK_FALSE(RangeProof::from_bytes(std::span(wire).subspan(0, wire.size() - 1)).has_value());
  CHECK_FALSE(RangeProof::from_bytes(std::span(wire).subspan(1)).has_value());
  Bytes extended = wire;
  extended.push_back(0);
  CHECK_FALSE(RangeProof::from_bytes(extended).has_value());
  Bytes bad_magic = wire;
  bad_magic[0] ^= 0xff;
  CHECK_FALSE(RangeProof::from_bytes(bad_magic).has_value());

  // Random single-bit corruption either fails to decode or fails to verify.
  size_t decoded = 0;
  for (int trial = 0; trial < 64; ++trial) {
    Bytes flipped = wire;
    const size_t bit = rng.below(flipped.size() * 8);
    flipped[bit / 8] ^= uint8_t(1) << (bit % 8);
    if (auto p = RangeProof::from_bytes(flipped)) {
      ++decoded;
      CHECK(verify_range_detailed(vk, com, -50, 49, *p) != RangeVerifyResult::kOk);
    }
  }
  INFO("corrupted encodings that still decoded: ", decoded);
}

TEST_CASE("independent proofs of the same fact share no visible material") {
  DeterministicRng rng(str_bytes("zero knowledge shape"));
  const auto& [pk, vk] = decimal_keys();

  // Same value, same interval, fresh blindings: completely disjoint bytes.
  const auto [com1, p1] = prove_range(pk, 77, Scalar::random(rng), 0, 99, rng);
  const auto [com2, p2] = prove_range(pk, 77, Scalar::random(rng), 0, 99, rng);
  CHECK(com1.element != com2.element);
  CHECK(p1.to_bytes() != p2.to_bytes());
  const auto f1 = element_fingerprints(p1);
  const auto f2 = element_fingerprints(p2);
  for (const std::string& e : f1) CHECK(f2.count(e) == 0);

  // Proof size depends only on the interval shape, not on the value inside,
  // so length alone cannot narrow the committed value.
  const auto [com3, p3] = prove_range(pk, 0, Scalar::random(rng), 0, 99, rng);
  const auto [com4, p4] = prove_range(pk, 99, Scalar::random(rng), 0, 99, rng);
  CHECK(p1.to_bytes().size() == p3.to_bytes().size());
  CHECK(p3.to_bytes().size() == p4.to_bytes().size());
}

TEST_CASE("range keys survive serialization and reject forged digit tables") {
  DeterministicRng rng(str_bytes("key codec"));
  const auto& [pk, vk] = decimal_keys();

  const ProvingKey pk2 = ProvingKey::from_bytes(pk.to_bytes());
  CHECK(pk2.to_bytes() == pk.to_bytes());
  const VerificationKey vk2 = VerificationKey::from_bytes(vk.to_bytes());
  CHECK(vk2.to_bytes() == vk.to_bytes());

  // Restored keys interoperate with the originals in both directions.
  const auto [com, proof] = prove_range(pk2, 5, Scalar::random(rng), 0, 9, rng);
  CHECK(verify_range(vk, com, 0, 9, proof));
  CHECK(verify_range(vk2, com, 0, 9, proof));

  const auto dir = std::filesystem::temp_directory_path();
  const std::string pk_path = (dir / "privchain-test-range-pk.bin").string();
  const std::string vk_path = (dir / "privchain-test-range-vk.bin").string();
  pk.save_file(pk_path);
  vk.save_file(vk_path);
  CHECK(ProvingKey::load_file(pk_path).to_bytes() == pk.to_bytes());
  CHECK(VerificationKey::load_file(vk_path).to_bytes() == vk.to_bytes());
  std::filesystem::remove(pk_path);
  std::filesystem::remove(vk_path);
  CHECK(thrown_code([&] { (void)ProvingKey::load_file(pk_path); }) == ErrorCode::kIo);

  // A proving key whose digit signatures do not verify is refused outright:
  // proving with a forged table would only yield unverifiable proofs.
  Bytes forged = pk.to_bytes();
  forged[forged.size() - 5] ^= 0x01;  // inside the last digit signature
  CHECK(thrown_code([&] { (void)ProvingKey::from_bytes(forged); }) == ErrorCode::kMalformed);

  Bytes truncated = vk.to_bytes();
  truncated.pop_back();
  CHECK(thrown_code([&] { (void)VerificationKey::from_bytes(truncated); }) ==
        ErrorCode::kMalformed);
  Bytes wrong_magic = vk.to_bytes();
  wrong_magic[2] ^= 0x40;
  CHECK(thrown_code([&] { (void)VerificationKey::from_bytes(wrong_magic); }) ==
        ErrorCode::kMalformed);
  CHECK(thrown_code([&] { (void)ProvingKey::from_bytes(vk.to_bytes()); }) ==
        ErrorCode::kMalformed);
}

TEST_CASE("set membership proves exactly the signed elements") {
  DeterministicRng rng(str_bytes("set membership"));
  const std::vector<int64_t> primes = {2, 3, 5, 7, 11, 13};
  const auto [spk, svk] = set_setup(primes, str_bytes("prime set authority"));

  for (int64_t member : primes) {
    const Scalar blinding = Scalar::random(rng);
    const auto [com, proof] = prove_set_membership(spk, member, blinding, rng);
    CHECK(open_verify(spk.params, com, Opening{scalar_from_i64(member), blinding}));
    CHECK(verify_set_membership(svk, com, proof));
  }
  CHECK(thrown_code([&] {
          (void)prove_set_membership(spk, 6, Scalar::from_u64(1), rng);
        }) == ErrorCode::kOutOfRange);

  // Negative members work through the signed embedding.
  const std::vector<int64_t> offsets = {-10, 0, 10};
  const auto [opk, ovk] = set_setup(offsets, str_bytes("offset set authority"));
  const auto [ocom, oproof] = prove_set_membership(opk, -10, Scalar::random(rng), rng);
  CHECK(verify_set_membership(ovk, ocom, oproof));
  // A proof never transfers to a different authority or element set.
  CHECK_FALSE(verify_set_membership(svk, ocom, oproof));
  const auto [wider_pk, wider_vk] = set_setup(std::vector<int64_t>{-10, 0, 10, 20},
                                              str_bytes("offset set authority"));
  CHECK_FALSE(verify_set_membership(wider_vk, ocom, oproof));

  CHECK(thrown_code([] { (void)set_setup({}, str_bytes("s")); }) ==
        ErrorCode::kInvalidParameter);
  CHECK(thrown_code([] {
          (void)set_setup(std::vector<int64_t>{1, 2, 2}, str_bytes("s"));
        }) == ErrorCode::kInvalidParameter);
}

TEST_CASE("tampered set-membership proofs are rejected") {
  DeterministicRng rng(str_bytes("set mutations"));
  const auto [spk, svk] = set_setup(std::vector<int64_t>{100, 200, 300},
                                    str_bytes("set mutation authority"));
  const auto [com, good] = prove_set_membership(spk, 200, Scalar::random(rng), rng);
  REQUIRE(verify_set_membership(svk, com, good));

  auto mutated = [&](auto&& f) {
    SetMembershipProof p = good;
    f(p);
    return verify_set_membership(svk, com, p);
  };
  CHECK_FALSE(mutated([](auto& p) { p.challenge = p.challenge + Scalar::one(); }));
  CHECK_FALSE(mutated([](auto& p) { p.z_value = p.z_value + Scalar::one(); }));
  CHECK_FALSE(mutated([](auto& p) { p.z_blinding = p.z_blinding + Scalar::one(); }));
  CHECK_FALSE(mutated([](auto& p) { p.z_exponent = p.z_exponent + Scalar::one(); }));
  CHECK_FALSE(mutated([](auto& p) {
    p.blinded_signature = GroupElement(p.blinded_signature.g1() + bn::G1::generator());
  }));
  CHECK_FALSE(mutated([](auto& p) { p.blinded_signature = GroupElement(bn::G1::identity()); }));
  CHECK_FALSE(mutated([](auto& p) {
    p.announce_commit = GroupElement(p.announce_commit.g1() + bn::G1::generator());
  }));
  // The proof is welded to its commitment.
  const Commitment other{GroupElement(com.element.g1() + bn::G1::generator())};
  CHECK_FALSE(verify_set_membership(svk, other, good));
}

TEST_CASE("device attestation binds commitments, zone band, and identity") {
  DeterministicRng rng(str_bytes("device attestation"));
  const auto& fx = location_fixture();
  const GridIndex idx{30, true, 48100, 495050};
  const SignedCoordinates coords = fx.attest(idx, rng);

  CHECK(coords.witness.e10 == idx.e10);
  CHECK(coords.witness.n10 == idx.n10);
  CHECK(open_verify(fx.pk.params, coords.commitment_x,
                    Opening{scalar_from_i64(idx.e10), coords.witness.r_x}));
  CHECK(device_verify(coords.attestation, coords.commitment_x, coords.commitment_y));

  // Any drift in the signed material invalidates the attestation.
  CHECK_FALSE(device_verify(coords.attestation, coords.commitment_y, coords.commitment_x));
  DeviceAttestation att = coords.attestation;
  att.zone = 31;
  CHECK_FALSE(device_verify(att, coords.commitment_x, coords.commitment_y));
  att = coords.attestation;
  att.north = false;
  CHECK_FALSE(device_verify(att, coords.commitment_x, coords.commitment_y));
  att = coords.attestation;
  att.device_id = "sensor-8";
  CHECK_FALSE(device_verify(att, coords.commitment_x, coords.commitment_y));
  att = coords.attestation;
  att.timestamp += 1;
  CHECK_FALSE(device_verify(att, coords.commitment_x, coords.commitment_y));
  att = coords.attestation;
  att.signature[10] ^= 0x10;
  CHECK_FALSE(device_verify(att, coords.commitment_x, coords.commitment_y));
}

TEST_CASE("location proofs verify and name the region without exposing the cell") {
  DeterministicRng rng(str_bytes("location happy path"));
  const auto& fx = location_fixture();

  struct Case {
    const char* region;
    GridIndex idx;
  };
  const Case cases[] = {
      {"bordeaux", {30, true, 48100, 495050}},
      {"bordeaux", {30, true, 48000, 495000}},  // inclusive lower corner
      {"bordeaux", {30, true, 48159, 495099}},  // inclusive upper corner
      {"mendoza", {19, false, 41050, 637100}},  // southern hemisphere
      {"dot", {30, true, 48500, 495500}},       // single-cell region
  };
  for (const Case& c : cases) {
    CAPTURE(c.region);
    const SignedCoordinates coords = fx.attest(c.idx, rng);
    const Region* region = fx.registry.find_by_name(c.region);
    REQUIRE(region != nullptr);
    const LocationProof proof =
        prove_location(fx.pk, coords, *region, fx.seller.sec, fx.seller.pub, rng);

    const LocationResult res = verify_location(fx.vk, fx.registry, proof);
    CHECK(res.ok());
    CHECK(res.reason == LocationReason::kVerified);
    REQUIRE(res.region.has_value());
    CHECK(*res.region == c.region);

    // The proof reveals the region rectangle, never the cell itself: the
    // commitments are hiding, and the four range proofs are what tie them
    // to the bounds. Spot-check the lower-x linkage explicitly.
    const Commitment shifted{GroupElement(proof.commitment_x.element.g1() -
                                          fx.pk.params.g.g1() *
                                              scalar_from_i64(region->e10_lo))};
    CHECK(verify_range(fx.vk, shifted, region->e10_lo, region->e10_hi, proof.lower_x));
  }
}

TEST_CASE("location proving refuses coordinates it cannot honestly prove") {
  DeterministicRng rng(str_bytes("location prover refusals"));
  const auto& fx = location_fixture();
  const Region* bordeaux = fx.registry.find_by_name("bordeaux");
  const Region* rioja = fx.registry.find_by_name("rioja");
  const Region* mendoza = fx.registry.find_by_name("mendoza");
  REQUIRE((bordeaux && rioja && mendoza));

  const GridIndex inside{30, true, 48100, 495050};
  const SignedCoordinates coords = fx.attest(inside, rng);

  // In the right zone band but outside the rectangle.
  CHECK(thrown_code([&] {
          (void)prove_location(fx.pk, coords, *rioja, fx.seller.sec, fx.seller.pub, rng);
        }) == ErrorCode::kOutOfRegion);
  // Wrong zone band altogether.
  CHECK(thrown_code([&] {
          (void)prove_location(fx.pk, coords, *mendoza, fx.seller.sec, fx.seller.pub, rng);
        }) == ErrorCode::kOutOfRegion);
  // And the underlying range prover refuses the foreign interval directly.
  CHECK(thrown_code([&] {
          (void)prove_range(fx.pk, coords.witness.e10, coords.witness.r_x, rioja->e10_lo,
                            rioja->e10_hi, rng);
        }) == ErrorCode::kOutOfRange);

  SignedCoordinates bad_witness = coords;
  bad_witness.witness.r_x = Scalar::random(rng);
  CHECK(thrown_code([&] {
          (void)prove_location(fx.pk, bad_witness, *bordeaux, fx.seller.sec, fx.seller.pub,
                               rng);
        }) == ErrorCode::kInvalidParameter);

  SignedCoordinates bad_att = coords;
  bad_att.attestation.signature[0] ^= 0x01;
  CHECK(thrown_code([&] {
          (void)prove_location(fx.pk, bad_att, *bordeaux, fx.seller.sec, fx.seller.pub, rng);
        }) == ErrorCode::kBadDeviceSignature);
}

TEST_CASE("every tampered location proof is rejected with its reason") {
  DeterministicRng rng(str_bytes("location mutations"));
  const auto& fx = location_fixture();
  const Region* bordeaux = fx.registry.find_by_name("bordeaux");
  REQUIRE(bordeaux != nullptr);
  const SignedCoordinates coords = fx.attest({30, true, 48100, 495050}, rng);
  const LocationProof good =
      prove_location(fx.pk, coords, *bordeaux, fx.seller.sec, fx.seller.pub, rng);
  REQUIRE(verify_location(fx.vk, fx.registry, good).ok());

  auto reason_of = [&](const LocationProof& p) {
    return verify_location(fx.vk, fx.registry, p).reason;
  };

  SUBCASE("seller signature does not cover the altered body") {
    LocationProof p = good;
    p.bounds.e10_lo -= 1;
    CHECK(reason_of(p) == LocationReason::kSellerSignature);
    p = good;
    p.seller_signature[3] ^= 0x08;
    CHECK(reason_of(p) == LocationReason::kSellerSignature);
  }
  SUBCASE("a re-signing seller still cannot move the bounds") {
    // The seller holds the signing key, so the signature itself is no
    // obstacle; the range proofs are what pin the rectangle.
    LocationProof p = good;
    p.bounds.e10_lo -= 1;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kMalformed);
    p = good;
    p.bounds.e10_hi += 1;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kChallengeMismatch);
    p = good;
    const Region* rioja = fx.registry.find_by_name("rioja");
    p.bounds = rioja->rect();
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kMalformed);
  }
  SUBCASE("zone band must match the attestation") {
    LocationProof p = good;
    p.bounds.zone = 19;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kZoneMismatch);
    p = good;
    p.bounds.north = false;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kZoneMismatch);
  }
  SUBCASE("device attestation is checked under re-signing") {
    LocationProof p = good;
    p.device.signature[5] ^= 0x20;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kDeviceSignature);
    p = good;
    std::swap(p.commitment_x, p.commitment_y);
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kDeviceSignature);
    p = good;
    p.device.timestamp += 3600;
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kDeviceSignature);
  }
  SUBCASE("range-proof tampering surfaces through the mapped reasons") {
    LocationProof p = good;
    p.lower_y.digit_proofs[0].z_exponent =
        p.lower_y.digit_proofs[0].z_exponent + Scalar::one();
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kPairingRelation);
    p = good;
    p.upper_x.challenge = p.upper_x.challenge + Scalar::one();
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kChallengeMismatch);
    p = good;
    p.lower_x.digit_proofs[0].z_blinding =
        p.lower_x.digit_proofs[0].z_blinding + Scalar::one();
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kCommitmentRelation);
  }
  SUBCASE("an unknown rectangle verifies nothing") {
    const RegionRegistry partial(
        {Region{"rioja", 30, true, 52000, 52079, 469000, 469049}});
    const LocationResult res = verify_location(fx.vk, partial, good);
    CHECK(res.reason == LocationReason::kUnknownRegion);
    CHECK_FALSE(res.region.has_value());
  }
  SUBCASE("inverted bounds are structurally rejected") {
    LocationProof p = good;
    std::swap(p.bounds.n10_lo, p.bounds.n10_hi);
    CHECK(reason_of(resigned(p, fx.seller.sec)) == LocationReason::kMalformed);
  }
}

TEST_CASE("location proof bytes round-trip and reject corruption") {
  DeterministicRng rng(str_bytes("location codec"));
  const auto& fx = location_fixture();
  const Region* mendoza = fx.registry.find_by_name("mendoza");
  const SignedCoordinates coords = fx.attest({19, false, 41000, 637199}, rng);
  const LocationProof proof =
      prove_location(fx.pk, coords, *mendoza, fx.seller.sec, fx.seller.pub, rng);

  const Bytes wire = proof.to_bytes();
  const auto restored = LocationProof::from_bytes(wire);
  REQUIRE(restored.has_value());
  CHECK(restored->to_bytes() == wire);
  const LocationResult res = verify_location(fx.vk, fx.registry, *restored);
  CHECK(res.ok());
  CHECK(*res.region == "mendoza");

  CHECK_FALSE(LocationProof::from_bytes(std::span(wire).subspan(0, wire.size() - 1)));
  Bytes extended = wire;
  extended.push_back(0x42);
  CHECK_FALSE(LocationProof::from_bytes(extended));
  Bytes bad_magic = wire;
  bad_magic[1] ^= 0x01;
  CHECK_FALSE(LocationProof::from_bytes(bad_magic));
}
