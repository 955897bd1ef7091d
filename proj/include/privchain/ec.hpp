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

// The two pairing source groups.
//   G1: y^2 = x^3 + 3 over Fq, prime order r (cofactor 1), generator (1, 2).
//   G2: y^2 = x^3 + 3/xi over Fp2 (sextic twist), r-order subgroup.
// Point arithmetic uses the complete homogeneous-projective formulas for
// a = 0 curves, so no branch on identity or equal inputs is needed.

#include <optional>
#include <span>

#include "privchain/bytes.hpp"
#include "privchain/fptower.hpp"

namespace privchain::bn {

template <typename Traits>
struct Point {
  using F = typename Traits::Field;

  F x = F::zero();
  F y = F::one();
  F z = F::zero();

  static Point identity() { return Point{}; }
  static Point generator() { return Traits::generator(); }

  bool is_identity() const { return z.is_zero(); }

  bool operator==(const Point& o) const {
    // Cross-multiplied projective equality.
    if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
    return x * o.z == o.x * z && y * o.z == o.y * z;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }

  Point operator-() const { return {x, -y, z}; }

  Point operator+(const Point& o) const {
    const F b3 = Traits::b3();
    F t0 = x * o.x;
    F t1 = y * o.y;
    F t2 = z * o.z;
    F t3 = (x + y) * (o.x + o.y) - t0 - t1;
    F t4 = (y + z) * (o.y + o.z) - t1 - t2;
    F ty = (x + z) * (o.x + o.z) - t0 - t2;
    F tx = t0.dbl() + t0;
    t2 = b3 * t2;
    F tz = t1 + t2;
    t1 = t1 - t2;
    ty = b3 * ty;
    F x3 = t4 * ty;
    t2 = t3 * t1;
    x3 = t2 - x3;
    F y3 = ty * tx;
    t1 = t1 * tz;
    y3 = t1 + y3;
    tx = tx * t3;
    F z3 = tz * t4;
    z3 = z3 + tx;
    return {x3, y3, z3};
  }

  Point dbl() const {
    const F b3 = Traits::b3();
    F t0 = y.square();
    F z3 = t0.dbl().dbl().dbl();
    F t1 = y * z;
    F t2 = z.square();
    t2 = b3 * t2;
    F x3 = t2 * z3;
    F y3 = t0 + t2;
    z3 = t1 * z3;
    t1 = t2.dbl();
    t2 = t1 + t2;
    t0 = t0 - t2;
    y3 = t0 * y3;
    y3 = x3 + y3;
    t1 = x * y;
    x3 = t0 * t1;
    x3 = x3.dbl();
    return {x3, y3, z3};
  }

  Point& operator+=(const Point& o) { return *this = *this + o; }
  Point operator-(const Point& o) const { return *this + (-o); }

  /// Scalar multiplication by a canonical (non-Montgomery) 256-bit value.
  Point mul(const Limbs4& k) const {
    Point acc = identity();
    bool started = false;
    for (int limb = 3; limb >= 0; --limb) {
      for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = acc.dbl();
        if ((k[limb] >> bit) & 1) {
          acc = acc + *this;
          started = true;
        }
      }
    }
    return acc;
  }

  Point operator*(const Fr& k) const { return mul(k.to_canonical()); }

  /// Affine coordinates; identity reports (0, 0).
  void affine(F& ax, F& ay) const {
    if (is_identity()) {
      ax = F::zero();
      ay = F::zero();
      return;
    }
    F zi = z.invert();
    ax = x * zi;
    ay = y * zi;
  }

  bool on_curve() const {
    if (is_identity()) return true;
    // Y^2 Z == X^3 + b Z^3 with 3b = b3.
    const F b3 = Traits::b3();
    F three = F::one() + F::one() + F::one();
    F b = b3 * three.invert();
    return y.square() * z == x * x.square() + b * z.square() * z;
  }

  bool in_subgroup() const { return mul(FrParams::kModulus).is_identity(); }
};

struct G1Traits {
  using Field = Fq;
  static Fq b3() { return Fq::from_u64(9); }
  static Point<G1Traits> generator();
};

struct G2Traits {
  using Field = Fp2;
  static Fp2 b3();
  static Point<G2Traits> generator();
};

using G1 = Point<G1Traits>;
using G2 = Point<G2Traits>;

/// Twist coefficient b' = 3/xi of the G2 curve equation.
Fp2 g2_b();

// -- Canonical codecs ------------------------------------------------------
// G1: 32 bytes -- big-endian x with bit7 of byte 0 = identity flag and
//     bit6 = parity of y. G2: 64 bytes -- x.c1 block then x.c0 block, flags
//     on the first byte, parity taken from y.c1 unless it is zero.
// Decoding is strict: non-canonical field values, unused flag patterns,
// off-curve x and (for G2) wrong-subgroup points are all rejected.

std::array<uint8_t, 32> g1_to_bytes(const G1& p);
std::optional<G1> g1_from_bytes(std::span<const uint8_t, 32> in);
std::array<uint8_t, 64> g2_to_bytes(const G2& p);
std::optional<G2> g2_from_bytes(std::span<const uint8_t, 64> in);

/// Deterministic hash to a G1 point of unknown discrete log, by try-and-
/// increment on the x coordinate.
G1 hash_to_g1(std::string_view domain, std::span<const uint8_t> data);

}  // namespace privchain::bn
