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

// 254-bit prime field arithmetic for the BN254 pairing curve, in 4x64-bit
// Montgomery form. Fq is the base field of the curve equation
// y^2 = x^3 + 3 and Fr is the scalar field (the group order).

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "privchain/rng.hpp"

namespace privchain::bn {

using Limbs4 = std::array<uint64_t, 4>;

// q = 21888242871839275222246405745257275088696311157297823662689037894645226208583
struct FqParams {
  static constexpr Limbs4 kModulus = {0x3c208c16d87cfd47ull, 0x97816a916871ca8dull,
                                      0xb85045b68181585dull, 0x30644e72e131a029ull};
  static constexpr uint64_t kInv = 0x87d20782e4866389ull;  // -q^-1 mod 2^64
  static constexpr Limbs4 kR1 = {0xd35d438dc58f0d9dull, 0x0a78eb28f5c70b3dull,
                                 0x666ea36f7879462cull, 0x0e0a77c19a07df2full};
  static constexpr Limbs4 kR2 = {0xf32cfc5b538afa89ull, 0xb5e71911d44501fbull,
                                 0x47ab1eff0a417ff6ull, 0x06d89f71cab8351full};
  static constexpr Limbs4 kR3 = {0xb1cd6dafda1530dfull, 0x62f210e6a7283db6ull,
                                 0xef7f0b0c0ada0afbull, 0x20fd6e902d592544ull};
};

// r = 21888242871839275222246405745257275088548364400416034343698204186575808495617
struct FrParams {
  static constexpr Limbs4 kModulus = {0x43e1f593f0000001ull, 0x2833e84879b97091ull,
                                      0xb85045b68181585dull, 0x30644e72e131a029ull};
  static constexpr uint64_t kInv = 0xc2e1f593efffffffull;
  static constexpr Limbs4 kR1 = {0xac96341c4ffffffbull, 0x36fc76959f60cd29ull,
                                 0x666ea36f7879462eull, 0x0e0a77c19a07df2full};
  static constexpr Limbs4 kR2 = {0x1bb8e645ae216da7ull, 0x53fe3ab1e35c59e3ull,
                                 0x8c49833d53bb8085ull, 0x0216d0b17f4e44a5ull};
  static constexpr Limbs4 kR3 = {0x5e94d8e1b4bf0040ull, 0x2a489cbe1cfbb6b8ull,
                                 0x893cc664a19fcfedull, 0x0cf8594b7fcc657cull};
};

namespace detail {

using u128 = unsigned __int128;

inline int limbs_cmp(const Limbs4& a, const Limbs4& b) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

// out = a - b, returns borrow.
inline uint64_t limbs_sub(Limbs4& out, const Limbs4& a, const Limbs4& b) {
  uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<uint64_t>(d);
    borrow = static_cast<uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

// out = a + b, returns carry.
inline uint64_t limbs_add(Limbs4& out, const Limbs4& a, const Limbs4& b) {
  uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    out[i] = static_cast<uint64_t>(s);
    carry = static_cast<uint64_t>(s >> 64);
  }
  return carry;
}

}  // namespace detail

/// Prime field element in Montgomery representation.
template <typename Params>
class Fp {
 public:
  Limbs4 v{};

  constexpr Fp() = default;

  static constexpr Fp zero() { return Fp{}; }
  static Fp one() {
    Fp r;
    r.v = Params::kR1;
    return r;
  }

  static Fp from_u64(uint64_t x) {
    Fp r;
    r.v = {x, 0, 0, 0};
    return mont_mul(r, r2());
  }

  /// Interprets 4 little-endian limbs as an integer < modulus (unchecked
  /// precondition) and converts into Montgomery form.
  static Fp from_limbs(const Limbs4& limbs) {
    Fp r;
    r.v = limbs;
    return mont_mul(r, r2());
  }

  /// Canonical big-endian decoding; rejects values >= modulus.
  static std::optional<Fp> from_bytes(std::span<const uint8_t, 32> in) {
    Fp r;
    for (int i = 0; i < 4; ++i) {
      uint64_t limb = 0;
      for (int j = 0; j < 8; ++j) limb = (limb << 8) | in[(3 - i) * 8 + j];
      r.v[i] = limb;
    }
    if (detail::limbs_cmp(r.v, Params::kModulus) >= 0) return std::nullopt;
    return mont_mul(r, r2());
  }

  /// Reduces 64 big-endian bytes mod the modulus (for hashing to the field).
  static Fp from_bytes_wide(std::span<const uint8_t, 64> in) {
    auto load = [&](size_t off) {
      Fp r;
      for (int i = 0; i < 4; ++i) {
        uint64_t limb = 0;
        for (int j = 0; j < 8; ++j) limb = (limb << 8) | in[off + (3 - i) * 8 + j];
        r.v[i] = limb;
      }
      return r;
    };
    // in = hi * 2^256 + lo; hi*2^256 = hi_raw * R^2 * R^-1... handled as
    // mont_mul(hi, R3) + mont_mul(lo, R2) which equals (hi*2^256 + lo)*R mod m.
    Fp hi = load(0);
    Fp lo = load(32);
    return mont_mul(hi, r3()) + mont_mul(lo, r2());
  }

  void to_bytes(std::span<uint8_t, 32> out) const {
    Limbs4 canon = to_canonical();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 8; ++j)
        out[(3 - i) * 8 + j] = static_cast<uint8_t>(canon[i] >> (8 * (7 - j)));
  }

  std::array<uint8_t, 32> to_bytes() const {
    std::array<uint8_t, 32> out{};
    to_bytes(std::span<uint8_t, 32>(out));
    return out;
  }

  /// Little-endian limbs of the canonical (non-Montgomery) value.
  Limbs4 to_canonical() const {
    Fp unit;
    unit.v = {1, 0, 0, 0};
    return mont_mul(*this, unit).v;
  }

  bool is_zero() const { return v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0; }
  bool operator==(const Fp& o) const { return v == o.v; }
  bool operator!=(const Fp& o) const { return v != o.v; }

  /// Parity of the canonical value; used as the serialized sign bit.
  bool is_odd() const { return to_canonical()[0] & 1; }

  Fp operator+(const Fp& o) const {
    Fp r;
    uint64_t carry = detail::limbs_add(r.v, v, o.v);
    r.reduce_once(carry);
    return r;
  }

  Fp operator-(const Fp& o) const {
    Fp r;
    uint64_t borrow = detail::limbs_sub(r.v, v, o.v);
    if (borrow) detail::limbs_add(r.v, r.v, Params::kModulus);
    return r;
  }

  Fp operator-() const {
    if (is_zero()) return *this;
    Fp r;
    detail::limbs_sub(r.v, Params::kModulus, v);
    return r;
  }

  Fp operator*(const Fp& o) const { return mont_mul(*this, o); }

  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp square() const { return mont_mul(*this, *this); }

  Fp dbl() const { return *this + *this; }

  /// Exponentiation by a multi-limb little-endian exponent.
  Fp pow(std::span<const uint64_t> exp) const {
    Fp acc = one();
    bool started = false;
    for (int limb = static_cast<int>(exp.size()) - 1; limb >= 0; --limb) {
      for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = acc.square();
        if ((exp[limb] >> bit) & 1) {
          acc = acc * *this;
          started = true;
        }
      }
    }
    return started ? acc : one();
  }

  Fp pow(const Limbs4& exp) const { return pow(std::span<const uint64_t>(exp.data(), 4)); }

  /// Multiplicative inverse via Fermat; inverse of zero is zero.
  Fp invert() const {
    Limbs4 e;
    detail::limbs_sub(e, Params::kModulus, {2, 0, 0, 0});
    return pow(e);
  }

  /// Legendre symbol == 1 (zero reports true).
  bool is_square() const {
    if (is_zero()) return true;
    Limbs4 e;
    detail::limbs_sub(e, Params::kModulus, {1, 0, 0, 0});
    // e /= 2
    for (int i = 0; i < 3; ++i) e[i] = (e[i] >> 1) | (e[i + 1] << 63);
    e[3] >>= 1;
    return pow(e) == one();
  }

  /// Square root for moduli == 3 mod 4: candidate = a^((m+1)/4), verified.
  std::optional<Fp> sqrt() const {
    Limbs4 e = Params::kModulus;
    uint64_t carry = 0;
    // e = (m+1)/4: m is odd so m+1 doesn't overflow limb 0 meaningfully here,
    // but handle the ripple anyway.
    {
      detail::u128 s = static_cast<detail::u128>(e[0]) + 1;
      e[0] = static_cast<uint64_t>(s);
      carry = static_cast<uint64_t>(s >> 64);
      for (int i = 1; i < 4 && carry; ++i) {
        s = static_cast<detail::u128>(e[i]) + carry;
        e[i] = static_cast<uint64_t>(s);
        carry = static_cast<uint64_t>(s >> 64);
      }
    }
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 3; ++i) e[i] = (e[i] >> 1) | (e[i + 1] << 63);
      e[3] >>= 1;
    }
    Fp cand = pow(e);
    if (cand.square() == *this) return cand;
    return std::nullopt;
  }

  static Fp random(Rng& rng) {
    // 64 bytes reduced mod m keeps bias negligible.
    std::array<uint8_t, 64> buf{};
    rng.fill(buf);
    return from_bytes_wide(std::span<const uint8_t, 64>(buf));
  }

 private:
  static Fp r2() {
    Fp r;
    r.v = Params::kR2;
    return r;
  }
  static Fp r3() {
    Fp r;
    r.v = Params::kR3;
    return r;
  }

  void reduce_once(uint64_t carry) {
    if (carry || detail::limbs_cmp(v, Params::kModulus) >= 0)
      detail::limbs_sub(v, v, Params::kModulus);
  }

  // CIOS Montgomery multiplication. Result < modulus.
  static Fp mont_mul(const Fp& a, const Fp& b) {
    using detail::u128;
    uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      uint64_t carry = 0;
      for (int j = 0; j < 4; ++j) {
        u128 cur = static_cast<u128>(a.v[i]) * b.v[j] + t[j] + carry;
        t[j] = static_cast<uint64_t>(cur);
        carry = static_cast<uint64_t>(cur >> 64);
      }
      {
        u128 cur = static_cast<u128>(t[4]) + carry;
        t[4] = static_cast<uint64_t>(cur);
        t[5] = static_cast<uint64_t>(cur >> 64);
      }
      uint64_t m = t[0] * Params::kInv;
      {
        u128 cur = static_cast<u128>(m) * Params::kModulus[0] + t[0];
        carry = static_cast<uint64_t>(cur >> 64);
      }
      for (int j = 1; j < 4; ++j) {
        u128 cur = static_cast<u128>(m) * Params::kModulus[j] + t[j] + carry;
        t[j - 1] = static_cast<uint64_t>(cur);
        carry = static_cast<uint64_t>(cur >> 64);
      }
      {
        u128 cur = static_cast<u128>(t[4]) + carry;
        t[3] = static_cast<uint64_t>(cur);
        t[4] = t[5] + static_cast<uint64_t>(cur >> 64);
      }
    }
    Fp r;
    r.v = {t[0], t[1], t[2], t[3]};
    r.reduce_once(t[4]);
    return r;
  }
};

using Fq = Fp<FqParams>;
using Fr = Fp<FrParams>;

}  // namespace privchain::bn
