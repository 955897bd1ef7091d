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

// Optimal ate pairing e: G1 x G2 -> GT on BN254.
//
// G2 arguments can be preprocessed into a line program (G2Prepared); the
// protocol pairs against a small fixed set of G2 points, so this moves all
// G2 work out of the per-proof path. A shared Miller loop over several
// (G1, G2Prepared) pairs amortizes the loop squarings, and products of
// pairings then need only one final exponentiation.

#include <span>
#include <vector>

#include "privchain/ec.hpp"

namespace privchain::bn {

/// Precomputed line program for a fixed G2 point.
struct G2Prepared {
  struct Line {
    Fp2 lambda;  // slope on the twist
    Fp2 c;       // lambda * x_T - y_T
  };
  std::vector<Line> lines;
  bool infinity = true;
};

G2Prepared prepare_g2(const G2& q);

struct MillerPair {
  const G1* p;
  const G2Prepared* q;
};

/// Product of Miller loops; apply final_exponentiation to obtain the pairing
/// product Prod_i e(p_i, q_i).
Fp12 miller_loop(std::span<const MillerPair> pairs);

Fp12 final_exponentiation(const Fp12& f);

/// Single reduced pairing e(p, q).
Fp12 pairing(const G1& p, const G2& q);
Fp12 pairing(const G1& p, const G2Prepared& q);

// -- GT (r-order subgroup of Fp12*) helpers --------------------------------

/// Exponentiation of a GT element (unitary; all reduced pairing values are).
Fp12 gt_pow(const Fp12& base, const Fr& e);

/// 384-byte canonical encoding: the twelve Fq coefficients big-endian, in
/// order a.b0.c0, a.b0.c1, a.b1.c0, a.b1.c1, a.b2.c0, a.b2.c1 then the same
/// for b.
std::array<uint8_t, 384> gt_to_bytes(const Fp12& v);

/// Strict decode. check_subgroup additionally verifies r-order membership
/// (linear in the exponent size; used for long-lived key material).
std::optional<Fp12> gt_from_bytes(std::span<const uint8_t, 384> in, bool check_subgroup);

}  // namespace privchain::bn
