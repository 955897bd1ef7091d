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

// Relative-overhead benchmark. Absolute numbers are machine-bound; what the
// report asserts are orderings and ratios:
//   - trade with a location proof costs strictly more than a baseline trade,
//     with the ratio expected in [1.5, 50];
//   - produce with constituent encryption stays below 3x the opaque baseline;
//   - proof generation stays below 5 s and the one-time setup below 10 s.
// Every phase mean is taken over >= 10 trials with dispersion reported;
// assertions use means only. Setup runs exactly once per report.

#include <cstdint>
#include <string>
#include <vector>

namespace privchain::tools {

struct BenchPhase {
  std::string name;
  int trials = 0;
  double mean_ms = 0;
  double median_ms = 0;  // the ratios are defined on medians: a single
                         // scheduler hiccup must not move the verdict
  double stddev_ms = 0;
};

struct BenchAssertion {
  std::string label;
  bool ok = false;
};

struct BenchReport {
  uint32_t base_u = 0;
  double setup_ms = 0;  // one-time cost, measured once
  BenchPhase prove, verify, trade_proof, trade_base, produce_enc, produce_base;
  double trade_ratio = 0;
  double produce_ratio = 0;
  std::vector<BenchAssertion> assertions;

  bool all_ok() const;
  std::string to_text() const;
};

/// Runs all phases. `trials` is clamped to at least 10.
BenchReport run_bench(int trials, uint64_t seed);

}  // namespace privchain::tools
