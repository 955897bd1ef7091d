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
#include "privchain/ec.hpp"

namespace privchain::bn {

namespace {

// b' = 3/(9+u) for the twist equation y^2 = x^3 + b'.
const Fp2& twist_b() {
  static const Fp2 b = {
      Fq::from_limbs({0x3267e6dc24a138e5ull, 0xb5b4c5e559dbefa3ull, 0x81be18991be06ac3ull,
                      0x2b149d40ceb8aaaeull}),
      Fq::from_limbs({0xe4a2bd0685c315d2ull, 0xa74fa084e52d1852ull, 0xcd2cafadeed8fdf4ull,
                      0x009713b03af0fed4ull})};
  return b;
}

constexpr uint8_t kFlagInfinity = 0x80;
constexpr uint8_t kFlagOdd = 0x40;

}  // namespace

Fp2 g2_b() { return twist_b(); }

Point<G1Traits> G1Traits::generator() {
  return {Fq::from_u64(1), Fq::from_u64(2), Fq::one()};
}

Fp2 G2Traits::b3() {
  static const Fp2 b3 = twist_b() + twist_b() + twist_b();
  return b3;
}

Point<G2Traits> G2Traits::generator() {
  static const Point<G2Traits> g = {
      {Fq::from_limbs({0x46debd5cd992f6edull, 0x674322d4f75edaddull, 0x426a00665e5c4479ull,
                       0x1800deef121f1e76ull}),
       Fq::from_limbs({0x97e485b7aef312c2ull, 0xf1aa493335a9e712ull, 0x7260bfb731fb5d25ull,
                       0x198e9393920d483aull})},
      {Fq::from_limbs({0x4ce6cc0166fa7daaull, 0xe3d1e7690c43d37bull, 0x4aab71808dcb408full,
                       0x12c85ea5db8c6debull}),
       Fq::from_limbs({0x55acdadcd122975bull, 0xbc4b313370b38ef3ull, 0xec9e99ad690c3395ull,
                       0x090689d0585ff075ull})},
      Fp2::one()};
  return g;
}

std::array<uint8_t, 32> g1_to_bytes(const G1& p) {
  std::array<uint8_t, 32> out{};
  if (p.is_identity()) {
    out[0] = kFlagInfinity;
    return out;
  }
  Fq ax, ay;
  p.affine(ax, ay);
  ax.to_bytes(std::span<uint8_t, 32>(out));
  if (ay.is_odd()) out[0] |= kFlagOdd;
  return out;
}

std::optional<G1> g1_from_bytes(std::span<const uint8_t, 32> in) {
  std::array<uint8_t, 32> buf{};
  std::copy(in.begin(), in.end(), buf.begin());
  const uint8_t flags = buf[0] & 0xc0;
  buf[0] &= 0x3f;
  if (flags & kFlagInfinity) {
    if (flags & kFlagOdd) return std::nullopt;
    for (auto b : buf)
      if (b != 0) return std::nullopt;
    return G1::identity();
  }
  auto x = Fq::from_bytes(std::span<const uint8_t, 32>(buf));
  if (!x) return std::nullopt;
  Fq rhs = x->square() * *x + Fq::from_u64(3);
  auto y = rhs.sqrt();
  if (!y) return std::nullopt;
  if (y->is_odd() != static_cast<bool>(flags & kFlagOdd)) *y = -*y;
  return G1{*x, *y, Fq::one()};
}

std::array<uint8_t, 64> g2_to_bytes(const G2& p) {
  std::array<uint8_t, 64> out{};
  if (p.is_identity()) {
    out[0] = kFlagInfinity;
    return out;
  }
  Fp2 ax, ay;
  p.affine(ax, ay);
  ax.c1.to_bytes(std::span<uint8_t, 32>(out.data(), 32));
  ax.c0.to_bytes(std::span<uint8_t, 32>(out.data() + 32, 32));
  bool odd = ay.c1.is_zero() ? ay.c0.is_odd() : ay.c1.is_odd();
  if (odd) out[0] |= kFlagOdd;
  return out;
}

std::optional<G2> g2_from_bytes(std::span<const uint8_t, 64> in) {
  std::array<uint8_t, 64> buf{};
  std::copy(in.begin(), in.end(), buf.begin());
  const uint8_t flags = buf[0] & 0xc0;
  buf[0] &= 0x3f;
  if (flags & kFlagInfinity) {
    if (flags & kFlagOdd) return std::nullopt;
    for (auto b : buf)
      if (b != 0) return std::nullopt;
    return G2::identity();
  }
  auto xc1 = Fq::from_bytes(std::span<const uint8_t, 32>(buf.data(), 32));
  auto xc0 = Fq::from_bytes(std::span<const uint8_t, 32>(buf.data() + 32, 32));
  if (!xc0 || !xc1) return std::nullopt;
  Fp2 x{*xc0, *xc1};
  Fp2 rhs = x.square() * x + twist_b();
  auto y = rhs.sqrt();
  if (!y) return std::nullopt;
  bool odd = y->c1.is_zero() ? y->c0.is_odd() : y->c1.is_odd();
  if (odd != static_cast<bool>(flags & kFlagOdd)) *y = -*y;
  G2 p{x, *y, Fp2::one()};
  if (!p.in_subgroup()) return std::nullopt;
  return p;
}

G1 hash_to_g1(std::string_view domain, std::span<const uint8_t> data) {
  for (uint32_t ctr = 0;; ++ctr) {
    ByteWriter w;
    w.str(domain);
    w.bytes(data);
    w.u32(ctr);
    auto h = sha512(w.data());
    Fq x = Fq::from_bytes_wide(std::span<const uint8_t, 64>(h));
    Fq rhs = x.square() * x + Fq::from_u64(3);
    if (auto y = rhs.sqrt()) {
      if (y->is_odd() != static_cast<bool>(h[63] & 1)) *y = -*y;
      return G1{x, *y, Fq::one()};
    }
  }
}

}  // namespace privchain::bn
