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
#include "demo_world.hpp"

#include <sodium.h>

#include <fstream>
#include <sstream>

#include "privchain/bytes.hpp"
#include "privchain/rng.hpp"

namespace privchain::tools {

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProtocolError(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProtocolError(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out.flush()) throw ProtocolError(ErrorCode::kIo, "cannot write " + path);
}

}  // namespace

void save_secrets(const Secrets& secrets, const std::string& path) {
  std::string text = "# privchain signing secrets: <name> <hex secret key>\n";
  for (const auto& [name, kp] : secrets) {
    text += name + " " + to_hex(kp.sec) + "\n";
  }
  write_text_file(path, text);
}

Secrets parse_secrets(std::string_view text, std::string_view origin) {
  ensure_sodium();
  Secrets out;
  size_t line_no = 0;
  std::istringstream stream{std::string(text)};
  std::string line;
  const auto fail = [&](const std::string& what) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed,
                         std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string name, hex, extra;
    if (!(fields >> name) || name.front() == '#') continue;
    if (!(fields >> hex)) throw fail("expected '<name> <hex secret key>'");
    if (fields >> extra) throw fail("trailing field '" + extra + "'");
    const std::optional<Bytes> raw = from_hex(hex);
    if (!raw || raw->size() != crypto_sign_SECRETKEYBYTES) {
      throw fail("secret key must be " + std::to_string(2 * crypto_sign_SECRETKEYBYTES) +
                 " hex characters");
    }
    SigKeyPair kp;
    std::copy(raw->begin(), raw->end(), kp.sec.begin());
    if (crypto_sign_ed25519_sk_to_pk(kp.pub.data(), kp.sec.data()) != 0) {
      throw fail("secret key for '" + name + "' is invalid");
    }
    if (!out.emplace(name, kp).second) throw fail("duplicate name '" + name + "'");
  }
  return out;
}

Secrets load_secrets(const std::string& path) {
  return parse_secrets(read_text_file(path), path);
}

DemoWorld make_demo_world(uint64_t seed, uint32_t base_u, uint32_t max_digits) {
  Bytes setup_seed = str_bytes("privchain.demo.setup.");
  {
    ByteWriter w;
    w.u64(seed);
    const Bytes tail = w.take();
    setup_seed.insert(setup_seed.end(), tail.begin(), tail.end());
  }
  auto [pk, vk] = zkrp_setup(base_u, max_digits, setup_seed);

  Bytes rng_seed = str_bytes("privchain.demo.parties.");
  {
    ByteWriter w;
    w.u64(seed);
    const Bytes tail = w.take();
    rng_seed.insert(rng_seed.end(), tail.begin(), tail.end());
  }
  DeterministicRng rng(rng_seed);

  DemoWorld world{
      .pk = std::move(pk),
      .vk = std::move(vk),
      .registry = RegionRegistry({
          Region{"bordeaux", 30, true, 48000, 48099, 495000, 495099},
          Region{"rioja", 30, true, 52000, 52099, 469000, 469099},
      }),
      .roster = {},
      .secrets = {},
      .keyring = {},
      .bank = {},
  };

  for (const auto& [name, role] : std::initializer_list<std::pair<const char*, const char*>>{
           {"alice", "farmer"}, {"carol", "farmer"}, {"dave", "farmer"}, {"bob", "producer"}}) {
    const SigKeyPair kp = sig_keygen(rng);
    world.roster.participants.push_back({name, role, kp.pub});
    world.secrets.emplace(name, kp);
  }
  world.secrets.emplace("device", sig_keygen(rng));
  world.keyring.keys.push_back(make_tradeflow_key("authority-1", rng));
  world.bank = BankState::create(world.vk.params, rng);
  return world;
}

std::string registry_to_text(const RegionRegistry& registry) {
  std::string text = "# privchain regions: region <name> <zone> <N|S> <e10_lo> <e10_hi> <n10_lo> <n10_hi>\n";
  for (const Region& r : registry.all()) {
    text += "region " + r.name + " " + std::to_string(r.zone) + (r.north ? " N " : " S ") +
            std::to_string(r.e10_lo) + " " + std::to_string(r.e10_hi) + " " +
            std::to_string(r.n10_lo) + " " + std::to_string(r.n10_hi) + "\n";
  }
  return text;
}

void write_demo_world(const DemoWorld& world, const WorldPaths& paths) {
  std::filesystem::create_directories(paths.dir);
  write_text_file(paths.regions(), registry_to_text(world.registry));
  world.roster.save_file(paths.roster());
  save_secrets(world.secrets, paths.secrets());
  world.keyring.save_file(paths.keyring());
  world.pk.save_file(paths.proving_key());
  world.vk.save_file(paths.verification_key());
  world.bank.save_file(paths.bank());
}

}  // namespace privchain::tools
