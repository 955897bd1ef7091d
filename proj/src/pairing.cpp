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
#include "privchain/pairing.hpp"

namespace privchain::bn {

namespace {

// Loop constant 6z + 2 = 29793968203157093288 for the curve parameter
// z = 4965661367192848881; bits below the most significant one, MSB first.
constexpr char kLoopBits[] =
    "1001110101111001011100000011100110111110011101100011101110101000";

// Hard part of the final exponentiation, (p^4 - p^2 + 1)/r, little-endian.
constexpr std::array<uint64_t, 12> kHardExp = {
    0xe81bb482ccdf42b1ull, 0x5abf5cc4f49c36d4ull, 0xf1154e7e1da014fdull, 0xdcc7b44c87cdbacfull,
    0xaaa441e3954bcf8aull, 0x6b887d56d5095f23ull, 0x79581e16f3fd90c6ull, 0x3b1b1355d189227dull,
    0x4e529a5861876f6bull, 0x6c0eb522d5b12278ull, 0x331ec15183177fafull, 0x01baaa710b0759adull};

// (p - 1) / 6, the base Frobenius exponent for the tower constants.
constexpr Limbs4 kFrobExp = {0x34b017592414d4e1ull, 0xee9591c2e6bda1c2ull, 0xf40d60f3c0403964ull,
                             0x0810b7bdd032f006ull};

struct PairingCtx {
  std::array<Fp2, 6> frob_gamma;  // gamma[i] = xi^(i (p-1)/6)
  Fp2 gamma12, gamma13;           // twist Frobenius coefficients

  PairingCtx() {
    Fp2 g1 = Fp2::xi().pow(std::span<const uint64_t>(kFrobExp.data(), 4));
    frob_gamma[0] = Fp2::one();
    for (int i = 1; i < 6; ++i) frob_gamma[i] = frob_gamma[i - 1] * g1;
    gamma12 = frob_gamma[2];
    gamma13 = frob_gamma[3];
  }
};

const PairingCtx& ctx() {
  static const PairingCtx c;
  return c;
}

struct AffineG2 {
  Fp2 x, y;
};

// psi(x, y) = (conj(x) gamma12, conj(y) gamma13): untwist-Frobenius-twist.
AffineG2 mul_by_char(const AffineG2& q) {
  return {q.x.conjugate() * ctx().gamma12, q.y.conjugate() * ctx().gamma13};
}

// Emits the line through T and Q (or the tangent at T when T == Q is
// intended) and advances T. Affine side-channel-free arithmetic is not a
// goal; inputs during the ate loop never hit the degenerate cases.
void step_double(AffineG2& t, G2Prepared& out) {
  Fp2 lambda = (t.x.square().dbl() + t.x.square()) * (t.y.dbl()).invert();
  Fp2 c = lambda * t.x - t.y;
  Fp2 x3 = lambda.square() - t.x.dbl();
  Fp2 y3 = lambda * (t.x - x3) - t.y;
  out.lines.push_back({lambda, c});
  t = {x3, y3};
}

void step_add(AffineG2& t, const AffineG2& q, G2Prepared& out) {
  Fp2 lambda = (t.y - q.y) * (t.x - q.x).invert();
  Fp2 c = lambda * t.x - t.y;
  Fp2 x3 = lambda.square() - t.x - q.x;
  Fp2 y3 = lambda * (t.x - x3) - t.y;
  out.lines.push_back({lambda, c});
  t = {x3, y3};
}

}  // namespace

G2Prepared prepare_g2(const G2& q) {
  G2Prepared out;
  if (q.is_identity()) return out;
  out.infinity = false;

  AffineG2 qa;
  q.affine(qa.x, qa.y);
  AffineG2 t = qa;

  for (const char* bit = kLoopBits; *bit; ++bit) {
    step_double(t, out);
    if (*bit == '1') step_add(t, qa, out);
  }

  AffineG2 q1 = mul_by_char(qa);
  AffineG2 q2 = mul_by_char(q1);
  q2.y = -q2.y;
  step_add(t, q1, out);
  step_add(t, q2, out);
  return out;
}

Fp12 miller_loop(std::span<const MillerPair> pairs) {
  // Affine G1 inputs; identity on either side contributes the factor 1.
  struct Active {
    Fq px, py;
    const G2Prepared* q;
    size_t cursor = 0;
  };
  std::vector<Active> act;
  act.reserve(pairs.size());
  for (const auto& pr : pairs) {
    if (pr.p->is_identity() || pr.q->infinity) continue;
    Active a;
    pr.p->affine(a.px, a.py);
    a.q = pr.q;
    act.push_back(a);
  }
  if (act.empty()) return Fp12::one();

  auto consume = [](Active& a, Fp12& f) {
    const auto& ln = a.q->lines[a.cursor++];
    // l(P) = y_P - (lambda x_P) w + (lambda x_T - y_T) w^3
    f = f.mul_by_line(a.py, -(ln.lambda.scale(a.px)), ln.c);
  };

  Fp12 f = Fp12::one();
  for (const char* bit = kLoopBits; *bit; ++bit) {
    f = f.square();
    for (auto& a : act) consume(a, f);
    if (*bit == '1')
      for (auto& a : act) consume(a, f);
  }
  for (auto& a : act) consume(a, f);
  for (auto& a : act) consume(a, f);
  return f;
}

Fp12 final_exponentiation(const Fp12& f) {
  const auto& g = ctx().frob_gamma;
  // Easy part: f^((p^6 - 1)(p^2 + 1)). The result is unitary, so the hard
  // part can run on cyclotomic squarings.
  Fp12 t = f.conjugate() * f.invert();
  t = t.frobenius(g).frobenius(g) * t;
  return t.cyclotomic_pow(kHardExp);
}

Fp12 pairing(const G1& p, const G2Prepared& q) {
  MillerPair mp{&p, &q};
  return final_exponentiation(miller_loop(std::span<const MillerPair>(&mp, 1)));
}

Fp12 pairing(const G1& p, const G2& q) {
  G2Prepared prep = prepare_g2(q);
  return pairing(p, prep);
}

Fp12 gt_pow(const Fp12& base, const Fr& e) {
  Limbs4 k = e.to_canonical();
  return base.cyclotomic_pow(std::span<const uint64_t>(k.data(), 4));
}

std::array<uint8_t, 384> gt_to_bytes(const Fp12& v) {
  std::array<uint8_t, 384> out{};
  const Fp2* coeffs[6] = {&v.a.b0, &v.a.b1, &v.a.b2, &v.b.b0, &v.b.b1, &v.b.b2};
  size_t off = 0;
  for (const Fp2* c : coeffs) {
    c->c0.to_bytes(std::span<uint8_t, 32>(out.data() + off, 32));
    c->c1.to_bytes(std::span<uint8_t, 32>(out.data() + off + 32, 32));
    off += 64;
  }
  return out;
}

std::optional<Fp12> gt_from_bytes(std::span<const uint8_t, 384> in, bool check_subgroup) {
  Fp12 v;
  Fp2* coeffs[6] = {&v.a.b0, &v.a.b1, &v.a.b2, &v.b.b0, &v.b.b1, &v.b.b2};
  size_t off = 0;
  for (Fp2* c : coeffs) {
    auto c0 = Fq::from_bytes(std::span<const uint8_t, 32>(in.data() + off, 32));
    auto c1 = Fq::from_bytes(std::span<const uint8_t, 32>(in.data() + off + 32, 32));
    if (!c0 || !c1) return std::nullopt;
    *c = {*c0, *c1};
    off += 64;
  }
  if (check_subgroup) {
    // v^r == 1 via generic squarings: cyclotomic shortcuts are only sound
    // once membership is established, so they cannot be used to test it.
    if (v.pow(std::span<const uint64_t>(FrParams::kModulus.data(), 4)) != Fp12::one())
      return std::nullopt;
  }
  return v;
}

}  // namespace privchain::bn
