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

// Self-contained demo/benchmark world: two wine regions, a small roster, a
// shared trade-flow key, a proof authority, and a fresh bank. Everything is
// derived deterministically from one seed so scenario transcripts reproduce
// byte for byte.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "privchain/bank.hpp"
#include "privchain/geo_grid.hpp"
#include "privchain/ledger.hpp"
#include "privchain/sig.hpp"
#include "privchain/tradeflow.hpp"
#include "privchain/zkrp.hpp"

namespace privchain::tools {

/// Named Ed25519 keys for everyone who signs anything: the roster parties
/// plus the GPS device under the reserved name "device".
using Secrets = std::map<std::string, SigKeyPair>;

/// Text format: one "<name> <hex secret key>" per line, '#' comments.
/// Public keys are rederived from the secrets on load.
void save_secrets(const Secrets& secrets, const std::string& path);
Secrets parse_secrets(std::string_view text, std::string_view origin);
Secrets load_secrets(const std::string& path);

struct DemoWorld {
  ProvingKey pk;
  VerificationKey vk;
  RegionRegistry registry;
  Roster roster;
  Secrets secrets;
  Keyring keyring;   // single authority key "authority-1"
  BankState bank;    // fresh; params shared with the proof system
};

/// Builds the world from one seed: regions bordeaux and rioja (zone 30N),
/// farmers alice and carol, producer bob, trader dave, a device key, one
/// trade-flow key, and a bank keyed from the same stream.
DemoWorld make_demo_world(uint64_t seed, uint32_t base_u = 10, uint32_t max_digits = 8);

/// File names used inside a world directory.
struct WorldPaths {
  std::filesystem::path dir;
  std::string regions() const { return (dir / "regions.txt").string(); }
  std::string roster() const { return (dir / "roster.txt").string(); }
  std::string secrets() const { return (dir / "secrets.txt").string(); }
  std::string keyring() const { return (dir / "keyring.txt").string(); }
  std::string proving_key() const { return (dir / "proving.key").string(); }
  std::string verification_key() const { return (dir / "verification.key").string(); }
  std::string bank() const { return (dir / "bank.txt").string(); }
  std::string ledger() const { return (dir / "ledger").string(); }
  std::string req_pays() const { return (dir / "reqpays.txt").string(); }
  std::string script() const { return (dir / "script.txt").string(); }
  std::string transcript() const { return (dir / "transcript.txt").string(); }
};

/// Writes every world file into `dir` (created if missing).
void write_demo_world(const DemoWorld& world, const WorldPaths& paths);

/// Region registry text output, matching RegionRegistry::parse.
std::string registry_to_text(const RegionRegistry& registry);

}  // namespace privchain::tools
