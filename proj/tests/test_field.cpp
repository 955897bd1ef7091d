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

// Base/scalar field arithmetic checked against GMP as an independent
// big-integer oracle, plus tower-field algebraic properties.

#include <doctest.h>
#include <gmpxx.h>

#include "privchain/fptower.hpp"
#include "privchain/rng.hpp"

using namespace privchain;
using namespace privchain::bn;

namespace {

const char* kQDec =
    "21888242871839275222246405745257275088696311157297823662689037894645226208583";
const char* kRDec =
    "21888242871839275222246405745257275088548364400416034343698204186575808495617";

mpz_class to_mpz(std::span<const uint8_t> bytes) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

template <typename F>
mpz_class fp_to_mpz(const F& x) {
  auto b = x.to_bytes();
  return to_mpz(b);
}

template <typename F>
F mpz_to_fp(const mpz_class& v, const mpz_class& mod) {
  mpz_class c = ((v % mod) + mod) % mod;
  std::array<uint8_t, 32> buf{};
  size_t count = 0;
  mpz_export(buf.data(), &count, 1, 1, 1, 0, c.get_mpz_t());
  // mpz_export writes `count` big-endian bytes at the front; right-align.
  std::array<uint8_t, 32> out{};
  std::copy(buf.begin(), buf.begin() + count, out.begin() + (32 - count));
  auto r = F::from_bytes(std::span<const uint8_t, 32>(out));
  REQUIRE(r.has_value());
  return *r;
}

template <typename F>
F random_fp(Rng& rng) {
  return F::random(rng);
}

}  // namespace

TEST_CASE("base field matches the big-integer oracle") {
  mpz_class q(kQDec);
  DeterministicRng rng(uint64_t{0x11feed});

  for (int i = 0; i < 500; ++i) {
    Fq a = random_fp<Fq>(rng);
    Fq b = random_fp<Fq>(rng);
    mpz_class za = fp_to_mpz(a), zb = fp_to_mpz(b);

    CHECK(fp_to_mpz(a + b) == (za + zb) % q);
    CHECK(fp_to_mpz(a - b) == ((za - zb) % q + q) % q);
    CHECK(fp_to_mpz(a * b) == (za * zb) % q);
    CHECK(fp_to_mpz(a.square()) == (za * za) % q);
    CHECK(fp_to_mpz(-a) == (q - za) % q);

    if (!a.is_zero()) {
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), za.get_mpz_t(), q.get_mpz_t());
      CHECK(fp_to_mpz(a.invert()) == inv);
    }
  }
}

TEST_CASE("scalar field matches the big-integer oracle") {
  mpz_class r(kRDec);
  DeterministicRng rng(uint64_t{0x22feed});

  for (int i = 0; i < 500; ++i) {
    Fr a = random_fp<Fr>(rng);
    Fr b = random_fp<Fr>(rng);
    mpz_class za = fp_to_mpz(a), zb = fp_to_mpz(b);

    CHECK(fp_to_mpz(a + b) == (za + zb) % r);
    CHECK(fp_to_mpz(a - b) == ((za - zb) % r + r) % r);
    CHECK(fp_to_mpz(a * b) == (za * zb) % r);
    if (!a.is_zero()) {
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), za.get_mpz_t(), r.get_mpz_t());
      CHECK(fp_to_mpz(a.invert()) == inv);
    }
  }
}

TEST_CASE("exponentiation matches the oracle") {
  mpz_class q(kQDec);
  DeterministicRng rng(uint64_t{0x33feed});
  for (int i = 0; i < 20; ++i) {
    Fq a = random_fp<Fq>(rng);
    Limbs4 e{rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64()};
    std::array<uint8_t, 32> ebuf{};
    for (int limb = 0; limb < 4; ++limb)
      for (int j = 0; j < 8; ++j)
        ebuf[(3 - limb) * 8 + j] = static_cast<uint8_t>(e[limb] >> (8 * (7 - j)));
    mpz_class ze = to_mpz(ebuf);
    mpz_class want;
    mpz_powm(want.get_mpz_t(), fp_to_mpz(a).get_mpz_t(), ze.get_mpz_t(), q.get_mpz_t());
    CHECK(fp_to_mpz(a.pow(e)) == want);
  }
}

TEST_CASE("wide reduction matches the oracle") {
  mpz_class q(kQDec);
  DeterministicRng rng(uint64_t{0x44feed});
  for (int i = 0; i < 200; ++i) {
    std::array<uint8_t, 64> buf{};
    rng.fill(buf);
    Fq got = Fq::from_bytes_wide(std::span<const uint8_t, 64>(buf));
    CHECK(fp_to_mpz(got) == to_mpz(buf) % q);
  }
}

TEST_CASE("canonical decoding rejects out-of-range values") {
  mpz_class q(kQDec);
  const std::vector<mpz_class> bads = {q, mpz_class(q + 1), mpz_class((mpz_class(1) << 256) - 1)};
  for (const mpz_class& bad : bads) {
    std::array<uint8_t, 32> buf{};
    size_t count = 0;
    mpz_export(buf.data(), &count, 1, 1, 1, 0, bad.get_mpz_t());
    std::array<uint8_t, 32> out{};
    std::copy(buf.begin(), buf.begin() + count, out.begin() + (32 - count));
    CHECK_FALSE(Fq::from_bytes(std::span<const uint8_t, 32>(out)).has_value());
  }

  // q - 1 is in range and must round-trip.
  mpz_class ok = q - 1;
  Fq v = mpz_to_fp<Fq>(ok, q);
  CHECK(fp_to_mpz(v) == ok);
}

TEST_CASE("square roots") {
  DeterministicRng rng(uint64_t{0x55feed});
  int residues = 0;
  for (int i = 0; i < 100; ++i) {
    Fq a = random_fp<Fq>(rng);
    Fq sq = a.square();
    CHECK(sq.is_square());
    auto root = sq.sqrt();
    REQUIRE(root.has_value());
    CHECK((*root == a || *root == -a));
    if (a.is_square()) ++residues;
  }
  // Roughly half of random elements are squares.
  CHECK(residues > 20);
  CHECK(residues < 80);
}

TEST_CASE("quadratic extension arithmetic") {
  DeterministicRng rng(uint64_t{0x66feed});
  auto rand2 = [&] { return Fp2{Fq::random(rng), Fq::random(rng)}; };

  for (int i = 0; i < 200; ++i) {
    Fp2 a = rand2(), b = rand2(), c = rand2();
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a.square() == a * a);
    if (!a.is_zero()) CHECK(a * a.invert() == Fp2::one());
    CHECK(a.mul_by_xi() == a * Fp2::xi());
    // Conjugation is the q-power Frobenius, hence multiplicative.
    CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
  }
}

TEST_CASE("quadratic extension square roots") {
  DeterministicRng rng(uint64_t{0x77feed});
  for (int i = 0; i < 50; ++i) {
    Fp2 a{Fq::random(rng), Fq::random(rng)};
    Fp2 sq = a.square();
    auto root = sq.sqrt();
    REQUIRE(root.has_value());
    CHECK((*root == a || *root == -a));
  }
  // An element with non-square norm has no root.
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    Fp2 a{Fq::random(rng), Fq::random(rng)};
    if (!a.is_square()) {
      CHECK_FALSE(a.sqrt().has_value());
      ++rejected;
    }
  }
  CHECK(rejected > 5);
}

TEST_CASE("sextic and dodecic extension arithmetic") {
  DeterministicRng rng(uint64_t{0x88feed});
  auto rand2 = [&] { return Fp2{Fq::random(rng), Fq::random(rng)}; };
  auto rand6 = [&] { return Fp6{rand2(), rand2(), rand2()}; };
  auto rand12 = [&] { return Fp12{rand6(), rand6()}; };

  for (int i = 0; i < 50; ++i) {
    Fp6 a = rand6(), b = rand6(), c = rand6();
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    if (!a.is_zero()) CHECK(a * a.invert() == Fp6::one());
    CHECK(a.mul_by_v() == a * Fp6{Fp2::zero(), Fp2::one(), Fp2::zero()});
    CHECK(a.mul_by_01(b.b0, b.b1) == a * Fp6{b.b0, b.b1, Fp2::zero()});
  }

  for (int i = 0; i < 30; ++i) {
    Fp12 a = rand12(), b = rand12(), c = rand12();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a.square() == a * a);
    CHECK(a * a.invert() == Fp12::one());
    // Sparse line-shaped multiplication agrees with the generic product.
    Fq e0 = Fq::random(rng);
    Fp2 e1 = rand2(), e3 = rand2();
    Fp12 line{{Fp2::from(e0), Fp2::zero(), Fp2::zero()}, {e1, e3, Fp2::zero()}};
    CHECK(a.mul_by_line(e0, e1, e3) == a * line);
  }
}

TEST_CASE("dodecic Frobenius agrees with generic exponentiation") {
  // frobenius() uses precomputed tower constants; compare against raising
  // to the q-th power directly, which exercises none of them.
  DeterministicRng rng(uint64_t{0x99feed});
  // gamma[i] = xi^(i (q-1)/6) recomputed here from scratch.
  mpz_class q(kQDec);
  mpz_class e = (q - 1) / 6;
  std::vector<uint64_t> elimbs;
  {
    mpz_class t = e, lo;
    while (t > 0) {
      mpz_fdiv_r_2exp(lo.get_mpz_t(), t.get_mpz_t(), 64);
      elimbs.push_back(mpz_get_ui(lo.get_mpz_t()));
      t >>= 64;
    }
  }
  std::array<Fp2, 6> gamma;
  gamma[0] = Fp2::one();
  Fp2 g1 = Fp2::xi().pow(std::span<const uint64_t>(elimbs.data(), elimbs.size()));
  for (int i = 1; i < 6; ++i) gamma[i] = gamma[i - 1] * g1;

  std::vector<uint64_t> qlimbs(FqParams::kModulus.begin(), FqParams::kModulus.end());
  auto rand2 = [&] { return Fp2{Fq::random(rng), Fq::random(rng)}; };
  for (int i = 0; i < 5; ++i) {
    Fp12 a{{rand2(), rand2(), rand2()}, {rand2(), rand2(), rand2()}};
    Fp12 via_pow = a.pow(std::span<const uint64_t>(qlimbs.data(), qlimbs.size()));
    CHECK(a.frobenius(gamma) == via_pow);
  }
}
