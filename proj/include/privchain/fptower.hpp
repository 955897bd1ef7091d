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

// Extension tower for BN254:
//   Fp2  = Fq[u]  / (u^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + u
//   Fp12 = Fp6[w] / (w^2 - v)
// Fp12 hosts pairing values; the target group GT is its r-order subgroup.

#include <optional>

#include "privchain/fp.hpp"

namespace privchain::bn {

struct Fp2 {
  Fq c0, c1;

  static Fp2 zero() { return {Fq::zero(), Fq::zero()}; }
  static Fp2 one() { return {Fq::one(), Fq::zero()}; }
  static Fp2 from(const Fq& a) { return {a, Fq::zero()}; }

  // xi = 9 + u, the cubic non-residue the tower is built on.
  static Fp2 xi() { return {Fq::from_u64(9), Fq::one()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fp2& o) const { return !(*this == o); }

  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }

  Fp2 operator*(const Fp2& o) const {
    // Karatsuba over u^2 = -1.
    Fq t0 = c0 * o.c0;
    Fq t1 = c1 * o.c1;
    Fq t2 = (c0 + c1) * (o.c0 + o.c1);
    return {t0 - t1, t2 - t0 - t1};
  }

  Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
  Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
  Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

  Fp2 square() const {
    // (c0 + c1 u)^2 = (c0+c1)(c0-c1) + 2 c0 c1 u
    Fq t0 = (c0 + c1) * (c0 - c1);
    Fq t1 = c0 * c1;
    return {t0, t1 + t1};
  }

  Fp2 scale(const Fq& k) const { return {c0 * k, c1 * k}; }

  Fp2 dbl() const { return {c0 + c0, c1 + c1}; }

  /// Conjugate c0 - c1 u; this is also the p-power Frobenius on Fp2.
  Fp2 conjugate() const { return {c0, -c1}; }

  /// Multiplication by xi = 9 + u: (9 c0 - c1) + (c0 + 9 c1) u.
  Fp2 mul_by_xi() const {
    Fq nine_c0 = c0.dbl().dbl().dbl() + c0;
    Fq nine_c1 = c1.dbl().dbl().dbl() + c1;
    return {nine_c0 - c1, c0 + nine_c1};
  }

  Fp2 invert() const {
    // 1/(c0 + c1 u) = (c0 - c1 u) / (c0^2 + c1^2)
    Fq norm = c0.square() + c1.square();
    Fq inv = norm.invert();
    return {c0 * inv, -(c1 * inv)};
  }

  Fp2 pow(std::span<const uint64_t> exp) const {
    Fp2 acc = one();
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

  bool is_square() const {
    // a is a square in Fp2 iff its norm is a square in Fq.
    return (c0.square() + c1.square()).is_square();
  }

  /// Square root via the norm trick (q == 3 mod 4); returns nullopt for
  /// non-squares. The result is verified before returning.
  std::optional<Fp2> sqrt() const {
    if (is_zero()) return zero();
    Fq norm = c0.square() + c1.square();
    auto lambda = norm.sqrt();
    if (!lambda) return std::nullopt;
    Fq half = Fq::from_u64(2).invert();
    for (Fq l : {*lambda, -*lambda}) {
      Fq delta = (c0 + l) * half;
      auto x0 = delta.sqrt();
      if (!x0) continue;
      if (x0->is_zero()) continue;
      Fq x1 = c1 * half * x0->invert();
      Fp2 cand{*x0, x1};
      if (cand.square() == *this) return cand;
    }
    // Pure imaginary / boundary cases: try candidates (0, y1) and (y0, 0).
    if (c1.is_zero()) {
      if (auto y0 = c0.sqrt()) return Fp2{*y0, Fq::zero()};
      if (auto y1 = (-c0).sqrt()) return Fp2{Fq::zero(), *y1};
    }
    return std::nullopt;
  }
};

struct Fp6 {
  Fp2 b0, b1, b2;

  static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return b0.is_zero() && b1.is_zero() && b2.is_zero(); }
  bool operator==(const Fp6& o) const { return b0 == o.b0 && b1 == o.b1 && b2 == o.b2; }
  bool operator!=(const Fp6& o) const { return !(*this == o); }

  Fp6 operator+(const Fp6& o) const { return {b0 + o.b0, b1 + o.b1, b2 + o.b2}; }
  Fp6 operator-(const Fp6& o) const { return {b0 - o.b0, b1 - o.b1, b2 - o.b2}; }
  Fp6 operator-() const { return {-b0, -b1, -b2}; }

  Fp6 operator*(const Fp6& o) const {
    // Karatsuba-style cubic multiplication over v^3 = xi.
    Fp2 t0 = b0 * o.b0;
    Fp2 t1 = b1 * o.b1;
    Fp2 t2 = b2 * o.b2;
    Fp2 c0 = t0 + ((b1 + b2) * (o.b1 + o.b2) - t1 - t2).mul_by_xi();
    Fp2 c1 = (b0 + b1) * (o.b0 + o.b1) - t0 - t1 + t2.mul_by_xi();
    Fp2 c2 = (b0 + b2) * (o.b0 + o.b2) - t0 - t2 + t1;
    return {c0, c1, c2};
  }

  Fp6& operator+=(const Fp6& o) { return *this = *this + o; }
  Fp6& operator-=(const Fp6& o) { return *this = *this - o; }
  Fp6& operator*=(const Fp6& o) { return *this = *this * o; }

  Fp6 square() const { return *this * *this; }

  /// Sparse multiplication by d0 + d1 v (top coefficient zero).
  Fp6 mul_by_01(const Fp2& d0, const Fp2& d1) const {
    Fp2 t0 = b0 * d0;
    Fp2 t1 = b1 * d1;
    Fp2 c0 = t0 + (b2 * d1).mul_by_xi();
    Fp2 c1 = b0 * d1 + b1 * d0;
    Fp2 c2 = t1 + b2 * d0;
    return {c0, c1, c2};
  }

  /// Multiplication by v: (b0, b1, b2) -> (xi b2, b0, b1).
  Fp6 mul_by_v() const { return {b2.mul_by_xi(), b0, b1}; }

  Fp6 scale(const Fp2& k) const { return {b0 * k, b1 * k, b2 * k}; }
  Fp6 scale(const Fq& k) const { return {b0.scale(k), b1.scale(k), b2.scale(k)}; }

  Fp6 invert() const {
    Fp2 a = b0.square() - (b1 * b2).mul_by_xi();
    Fp2 b = b2.square().mul_by_xi() - b0 * b1;
    Fp2 c = b1.square() - b0 * b2;
    Fp2 f = (b0 * a + (b2 * b + b1 * c).mul_by_xi()).invert();
    return {a * f, b * f, c * f};
  }
};

struct Fp12 {
  Fp6 a, b;  // a + b w

  static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_one() const { return *this == one(); }
  bool operator==(const Fp12& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Fp12& o) const { return !(*this == o); }

  Fp12 operator*(const Fp12& o) const {
    Fp6 t0 = a * o.a;
    Fp6 t1 = b * o.b;
    Fp6 c0 = t0 + t1.mul_by_v();
    Fp6 c1 = (a + b) * (o.a + o.b) - t0 - t1;
    return {c0, c1};
  }
  Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

  Fp12 square() const {
    Fp6 t0 = a.square();
    Fp6 t1 = b.square();
    Fp6 c1 = (a + b).square() - t0 - t1;
    return {t0 + t1.mul_by_v(), c1};
  }

  /// Conjugation over Fp6 (negate the w part). For unitary elements — all
  /// outputs of the reduced pairing — this equals the inverse.
  Fp12 conjugate() const { return {a, -b}; }

  Fp12 invert() const {
    Fp6 t = (a.square() - b.square().mul_by_v()).invert();
    return {a * t, -(b * t)};
  }

  /// Sparse multiplication by a line value
  ///   l = e0 + e1 w + e3 w^3   (e0 in Fq, e1/e3 in Fp2),
  /// i.e. the Fp6 pair (e0, e3 v? ...) laid out as a' = (e0,0,0), b' = (e1,e3,0).
  Fp12 mul_by_line(const Fq& e0, const Fp2& e1, const Fp2& e3) const {
    Fp6 t0 = a.scale(e0);
    Fp6 t1 = b.mul_by_01(e1, e3);
    Fp6 c0 = t0 + t1.mul_by_v();
    Fp6 sum_ab = a + b;
    Fp2 s0 = Fp2::from(e0) + e1;
    Fp6 c1 = sum_ab.mul_by_01(s0, e3) - t0 - t1;
    return {c0, c1};
  }

  /// p-power Frobenius. gamma[i] = xi^(i (p-1)/6) are supplied by the caller
  /// (cached in the pairing context).
  Fp12 frobenius(const std::array<Fp2, 6>& gamma) const {
    // Coefficients of w^i: a.b0, b.b0, a.b1, b.b1, a.b2, b.b2.
    Fp12 r;
    r.a.b0 = a.b0.conjugate();
    r.b.b0 = b.b0.conjugate() * gamma[1];
    r.a.b1 = a.b1.conjugate() * gamma[2];
    r.b.b1 = b.b1.conjugate() * gamma[3];
    r.a.b2 = a.b2.conjugate() * gamma[4];
    r.b.b2 = b.b2.conjugate() * gamma[5];
    return r;
  }

  /// Squaring restricted to the cyclotomic subgroup (where the reduced
  /// pairing lives); roughly three times faster than a generic squaring.
  Fp12 cyclotomic_square() const {
    const Fp2 z0 = a.b0, z4 = a.b1, z3 = a.b2;
    const Fp2 z2 = b.b0, z1 = b.b1, z5 = b.b2;
    Fp2 t0, t1, t2, t3, t4, t5, tmp;

    tmp = z0 * z1;
    t0 = (z0 + z1) * (z0 + z1.mul_by_xi()) - tmp - tmp.mul_by_xi();
    t1 = tmp + tmp;
    tmp = z2 * z3;
    t2 = (z2 + z3) * (z2 + z3.mul_by_xi()) - tmp - tmp.mul_by_xi();
    t3 = tmp + tmp;
    tmp = z4 * z5;
    t4 = (z4 + z5) * (z4 + z5.mul_by_xi()) - tmp - tmp.mul_by_xi();
    t5 = tmp + tmp;

    Fp2 r0 = t0 - z0;
    r0 = r0 + r0 + t0;
    Fp2 r1 = t1 + z1;
    r1 = r1 + r1 + t1;
    tmp = t5.mul_by_xi();
    Fp2 r2 = tmp + z2;
    r2 = r2 + r2 + tmp;
    Fp2 r3 = t4 - z3;
    r3 = r3 + r3 + t4;
    Fp2 r4 = t2 - z4;
    r4 = r4 + r4 + t2;
    Fp2 r5 = t3 + z5;
    r5 = r5 + r5 + t3;

    return {{r0, r4, r3}, {r2, r1, r5}};
  }

  /// Exponentiation of a unitary element by a multi-limb exponent, using
  /// cyclotomic squarings.
  Fp12 cyclotomic_pow(std::span<const uint64_t> exp) const {
    Fp12 acc = one();
    bool started = false;
    for (int limb = static_cast<int>(exp.size()) - 1; limb >= 0; --limb) {
      for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = acc.cyclotomic_square();
        if ((exp[limb] >> bit) & 1) {
          acc = acc * *this;
          started = true;
        }
      }
    }
    return started ? acc : one();
  }

  Fp12 pow(std::span<const uint64_t> exp) const {
    Fp12 acc = one();
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
};

}  // namespace privchain::bn
