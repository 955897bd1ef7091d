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

// Scripted end-to-end runs: a line-oriented action script executed against a
// fresh ledger and bank, producing a deterministic transcript. One action per
// line ('#' comments allowed):
//
//   create <seller> <commodity>
//   trade <seller> <buyer> <commodity> [proof=<region>|proof=offregion]
//         [pay=<amount>] [expect=<Refusal>]
//   produce <producer> <product> <id>[,<id>...] [expect=<Refusal>]
//   settle
//   query <product>
//
// proof=<region> attests coordinates at the region's center and proves that
// region; proof=offregion attests outside every registered region and proves
// the (unregistered) local square, so the trade records "not verified".
// expect=<Refusal> marks an action that must fail with exactly that refusal
// (e.g. expect=AlreadyTraded); the run aborts on any other divergence.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "demo_world.hpp"

namespace privchain::tools {

struct ScenarioWorld {
  ProvingKey pk;
  VerificationKey vk;
  RegionRegistry registry;
  Roster roster;
  Secrets secrets;
  Keyring keyring;
  BankState bank;
  uint32_t batch = 1;
  uint64_t seed = 7;
};

ScenarioWorld scenario_world_from_demo(DemoWorld world, uint32_t batch, uint64_t seed);

/// Key=value config file naming the world inputs:
///   regions/roster/secrets/keyring/proving_key/verification_key/bank <path>
///   batch <n>   seed <n>
/// Every key except batch and seed is required; parse errors carry
/// file+line. Referenced files are loaded immediately.
ScenarioWorld load_scenario_world(const std::string& config_path);

struct ScenarioResult {
  std::string transcript;
  int exit_code = 0;  // 0 all actions as scripted, 2 unexpected refusal
  Ledger ledger;
  BankState bank;
};

/// Executes the script. Script syntax errors throw kMalformed with
/// "<origin>:<line>"; protocol divergence sets exit_code 2 and stops.
/// When `req_pay_log` is set, the ledger also appends emitted payment
/// requests to that file as they happen.
ScenarioResult run_scenario(ScenarioWorld world, std::string_view script,
                            std::string_view script_origin,
                            const std::optional<std::string>& req_pay_log);

/// The built-in wine-bottle demonstration script.
std::string_view default_script();

}  // namespace privchain::tools
