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

// Signature-based zero-knowledge range and set-membership proofs.
//
// A trusted setup signs every admissible digit value i as A_i = g^{1/(x+i)}.
// To show that a committed value lies in [0, u^l), the prover decomposes it
// into base-u digits, commits to each digit, blinds the digit's signature as
// V_j = A_{d_j}^{v_j}, and proves in zero knowledge that (a) each commitment
// opens to a digit whose signature it can blind — possible only for digits
// in [0, u) — and (b) the digit commitments recombine to the input
// commitment. Arbitrary intervals [lo, hi] use the offset trick: a proof on
// delta - lo establishes the lower bound and a companion proof on hi - delta
// the upper bound, both against commitments any verifier can derive from the
// public commitment to delta.
//
// The location layer wraps four such proofs (lower/upper per grid axis) with
// a device attestation binding the coordinate commitments to a zone band and
// a seller signature over the whole object.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privchain/geo_grid.hpp"
#include "privchain/group_crypto.hpp"
#include "privchain/sig.hpp"

namespace privchain {

/// Scalar embedding of signed 64-bit integers (negatives wrap mod the group
/// order, matching exponent arithmetic).
Scalar scalar_from_i64(int64_t v);

// -- Keys -------------------------------------------------------------------

struct ProvingKey {
  PedersenParams params;
  GroupElement y;  // signer public key in source group 2
  std::vector<GroupElement> digit_signatures;  // A_i for i in [0, base_u)
  uint32_t base_u = 0;
  uint32_t max_digits_l = 0;

  // Derived cache (never serialized): e(A_i, g2) per digit, letting the
  // prover build pairing-relation announcements without any pairing.
  std::vector<bn::Fp12> digit_pairings;
  void rebuild_cache();

  Bytes to_bytes() const;
  /// Strict decode; re-verifies every digit signature against y.
  static ProvingKey from_bytes(std::span<const uint8_t> in);
  void save_file(const std::string& path) const;
  static ProvingKey load_file(const std::string& path);
};

struct VerificationKey {
  PedersenParams params;
  GroupElement y;
  uint32_t base_u = 0;
  uint32_t max_digits_l = 0;

  // Derived caches (never serialized): line programs for the two fixed
  // pairing arguments of the verification equation.
  bn::G2Prepared prep_y, prep_g2;
  void rebuild_cache();

  Bytes to_bytes() const;
  static VerificationKey from_bytes(std::span<const uint8_t> in);
  void save_file(const std::string& path) const;
  static VerificationKey load_file(const std::string& path);
};

/// Deterministic trusted setup from an admin seed. The signing secret x is
/// derived, used for the digit signatures, and discarded — it appears in no
/// returned or serialized object.
/// Throws InvalidParameter unless base_u in [2, 256], max_digits_l in [1, 64].
std::pair<ProvingKey, VerificationKey> zkrp_setup(uint32_t base_u, uint32_t max_digits_l,
                                                  std::span<const uint8_t> admin_secret_seed);

// -- Digit decomposition ----------------------------------------------------

/// Base-u digits of delta, least significant first, exactly digits_l of them.
/// Throws OutOfRange unless 0 <= delta < base_u^digits_l.
std::vector<uint32_t> decompose(int64_t delta, uint32_t base_u, uint32_t digits_l);

/// Inverse of decompose (throws OutOfRange on digit or overflow violations).
int64_t recompose(std::span<const uint32_t> digits, uint32_t base_u);

// -- Range proofs -----------------------------------------------------------

struct DigitProof {
  GroupElement blinded_signature;  // V_j = A_{d_j}^{v_j}, source group 1
  GroupElement announce_pairing;   // pairing-relation announcement, target group
  GroupElement announce_commit;    // commitment-relation announcement, source group 1
  Scalar z_digit;                  // response for the digit value
  Scalar z_blinding;               // response for the commitment blinding
  Scalar z_exponent;               // response for the signature-blinding exponent
};

struct RangeProof {
  std::vector<Commitment> digit_commitments;
  std::vector<DigitProof> digit_proofs;
  Scalar challenge;
  int64_t lo = 0;
  uint32_t width_digits = 0;  // l' = number of digits covering hi - lo + 1

  Bytes to_bytes() const;
  static std::optional<RangeProof> from_bytes(std::span<const uint8_t> in);
};

/// Proves delta in [lo, hi] under the commitment g^(delta-lo) h^blinding
/// (which is returned). The proof establishes delta - lo in [0, u^l'); the
/// matching upper bound is proven by a second call on hi - delta.
/// Throws OutOfRange when delta is outside [lo, hi]: there is no signature
/// for an out-of-range digit, so the prover must refuse up front.
/// Throws InvalidParameter when hi - lo + 1 exceeds u^max_digits_l.
std::pair<Commitment, RangeProof> prove_range(const ProvingKey& pk, int64_t delta,
                                              const Scalar& blinding, int64_t lo, int64_t hi,
                                              Rng& rng);

enum class RangeVerifyResult {
  kOk,
  kMalformed,           // structural mismatch with (lo, hi) or the key bounds
  kChallengeMismatch,   // transcript does not reproduce the stated challenge
  kInconsistentDigits,  // digit commitments do not recombine to com
  kCommitmentRelation,  // a digit's commitment-relation equation fails
  kPairingRelation,     // a digit's pairing-relation equation fails
};
const char* range_verify_result_name(RangeVerifyResult r);

/// `com` is the commitment to delta - lo, as returned by prove_range (or
/// derived homomorphically from a commitment to delta). Never throws.
RangeVerifyResult verify_range_detailed(const VerificationKey& vk, const Commitment& com,
                                        int64_t lo, int64_t hi, const RangeProof& proof);
bool verify_range(const VerificationKey& vk, const Commitment& com, int64_t lo, int64_t hi,
                  const RangeProof& proof);

// -- Set membership ---------------------------------------------------------
//
// The same blinded-signature protocol over an explicit element set: the
// setup signs exactly the set members, so possessing any blindable
// signature proves membership. Keys are per-set; a range key's signatures
// would prove membership of [0, u) instead.

struct SetProvingKey {
  PedersenParams params;
  GroupElement y;
  std::vector<int64_t> elements;  // sorted, unique
  std::vector<GroupElement> signatures;

  std::vector<bn::Fp12> element_pairings;  // derived cache
  void rebuild_cache();
};

struct SetVerificationKey {
  PedersenParams params;
  GroupElement y;
  std::vector<int64_t> elements;

  bn::G2Prepared prep_y, prep_g2;  // derived caches
  void rebuild_cache();
};

std::pair<SetProvingKey, SetVerificationKey> set_setup(std::span<const int64_t> elements,
                                                       std::span<const uint8_t> admin_secret_seed);

struct SetMembershipProof {
  GroupElement blinded_signature;
  GroupElement announce_pairing;
  GroupElement announce_commit;
  Scalar challenge;
  Scalar z_value, z_blinding, z_exponent;
};

/// Proves the committed value is a set member; returns the commitment
/// g^value h^blinding alongside. Throws OutOfRange when value is not in the
/// set.
std::pair<Commitment, SetMembershipProof> prove_set_membership(const SetProvingKey& spk,
                                                               int64_t value,
                                                               const Scalar& blinding, Rng& rng);
bool verify_set_membership(const SetVerificationKey& svk, const Commitment& com,
                           const SetMembershipProof& proof);

// -- Location proofs --------------------------------------------------------

/// GPS-device statement: "I measured coordinates committing to
/// (commitment_x, commitment_y) in this zone band". The zone is part of the
/// signed payload — grid indices alone are ambiguous across zones.
struct DeviceAttestation {
  std::string device_id;
  SigPublicKey device_pub{};
  uint64_t timestamp = 0;
  int zone = 0;
  bool north = true;
  Signature signature{};
};

Signature device_sign(const SigSecretKey& device_sk, const Commitment& com_x,
                      const Commitment& com_y, int zone, bool north, std::string_view device_id,
                      uint64_t timestamp);
bool device_verify(const DeviceAttestation& att, const Commitment& com_x,
                   const Commitment& com_y);

/// The seller-side secret: grid indices and commitment openings.
struct CoordinateWitness {
  int64_t e10 = 0;
  int64_t n10 = 0;
  Scalar r_x, r_y;
};

/// Device-signed commitment pair plus the openings the prover needs.
struct SignedCoordinates {
  Commitment commitment_x, commitment_y;
  DeviceAttestation attestation;
  CoordinateWitness witness;
};

/// Convenience for the device role: commit to the grid indices with fresh
/// blindings and sign the result.
SignedCoordinates attest_coordinates(const SigSecretKey& device_sk,
                                     const SigPublicKey& device_pub, std::string_view device_id,
                                     uint64_t timestamp, const PedersenParams& params,
                                     const GridIndex& idx, Rng& rng);

struct LocationProof {
  Commitment commitment_x, commitment_y;
  DeviceAttestation device;
  GridRect bounds;  // the claimed region rectangle
  RangeProof lower_x, upper_x, lower_y, upper_y;
  SigPublicKey seller_pub{};
  Signature seller_signature{};

  /// Canonical bytes of everything except the seller signature, under the
  /// location domain label; this is what the seller signs.
  Bytes signing_bytes() const;

  Bytes to_bytes() const;
  static std::optional<LocationProof> from_bytes(std::span<const uint8_t> in);
};

/// Builds the four interval proofs for the region's rectangle and signs the
/// object. Throws OutOfRegion when the witness indices (or the attested zone
/// band) fall outside the region, BadDeviceSignature when the attestation
/// does not verify, InvalidParameter when the witness does not open the
/// attested commitments.
LocationProof prove_location(const ProvingKey& pk, const SignedCoordinates& coords,
                             const Region& region, const SigSecretKey& seller_sk,
                             const SigPublicKey& seller_pub, Rng& rng);

enum class LocationReason {
  kVerified,
  kMalformed,
  kSellerSignature,
  kDeviceSignature,
  kZoneMismatch,         // attested zone band differs from the claimed bounds
  kChallengeMismatch,
  kInconsistentDigits,
  kCommitmentRelation,
  kPairingRelation,
  kUnknownRegion,        // proven bounds match no registry entry
};
const char* location_reason_name(LocationReason r);

struct LocationResult {
  std::optional<std::string> region;  // engaged iff verified
  LocationReason reason = LocationReason::kMalformed;
  bool ok() const { return region.has_value(); }
};

/// Full verification: seller signature, device attestation, zone binding,
/// the four interval proofs against commitments derived from the attested
/// pair, and finally the registry lookup of the proven bounds.
/// Never throws; failures carry a reason.
LocationResult verify_location(const VerificationKey& vk, const RegionRegistry& registry,
                               const LocationProof& proof);

}  // namespace privchain
