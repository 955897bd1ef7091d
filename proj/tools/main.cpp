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

// privchain: command-line driver for the ledger, proofs, bank, and the
// scripted scenario/benchmark harnesses.
//
// Exit codes: 0 success, 2 protocol rejection, 3 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bench.hpp"
#include "demo_world.hpp"
#include "scenario.hpp"
#include "privchain/bytes.hpp"
#include "privchain/geo_grid.hpp"
#include "privchain/rng.hpp"

namespace {

using namespace privchain;
using namespace privchain::tools;

constexpr int kOk = 0;
constexpr int kProtocolRejection = 2;
constexpr int kConfigError = 3;

[[noreturn]] void config_error(const std::string& what) {
  throw ProtocolError(ErrorCode::kInvalidParameter, what);
}

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

DeterministicRng seeded_rng(std::string_view label, uint64_t seed) {
  Bytes bytes = str_bytes(label);
  ByteWriter w;
  w.u64(seed);
  const Bytes tail = w.take();
  bytes.insert(bytes.end(), tail.begin(), tail.end());
  return DeterministicRng(bytes);
}

/// Options shared by every command that opens a ledger.
struct WorldOptions {
  std::string ledger_path;
  std::string roster_path;
  std::string regions_path;
  std::string vk_path;
  std::string keyring_path;  // optional
  uint32_t batch = 1;
  std::string req_pay_log;  // optional

  void add_to(CLI::App* cmd, bool with_req_pay_log = false) {
    cmd->add_option("--ledger", ledger_path, "ledger chain file")->required();
    cmd->add_option("--roster", roster_path, "participant roster file")->required();
    cmd->add_option("--regions", regions_path, "region registry file")->required();
    cmd->add_option("--vk", vk_path, "proof verification key file")->required();
    cmd->add_option("--keyring", keyring_path, "trade-flow keyring (enables constituent checks)");
    cmd->add_option("--batch", batch, "transactions per sealed block")->capture_default_str();
    if (with_req_pay_log) {
      cmd->add_option("--req-pay-log", req_pay_log, "append emitted payment requests here");
    }
  }

  /// Loads the world and the chain; a missing ledger file starts fresh.
  struct Loaded {
    RegionRegistry registry;
    Roster roster;
    VerificationKey vk;
    std::optional<TradeFlowKey> key;
    std::optional<Ledger> ledger;
  };
  Loaded load() const {
    Loaded out{RegionRegistry::load_file(regions_path), Roster::load_file(roster_path),
               VerificationKey::load_file(vk_path), std::nullopt, std::nullopt};
    if (!keyring_path.empty()) {
      const Keyring ring = Keyring::load_file(keyring_path);
      if (ring.keys.empty()) config_error(keyring_path + ": keyring is empty");
      out.key = ring.keys.front();
    }
    LedgerConfig config{batch, req_pay_log.empty()
                                   ? std::nullopt
                                   : std::optional<std::string>(req_pay_log)};
    if (std::filesystem::exists(ledger_path)) {
      out.ledger = Ledger::load_file(ledger_path, config, ViscConfig{out.vk, out.registry},
                                     out.roster, out.key);
    } else {
      out.ledger.emplace(config, ViscConfig{out.vk, out.registry}, out.roster, out.key);
    }
    return out;
  }
};

const SigKeyPair& party_key(const Secrets& secrets, const std::string& name) {
  const auto it = secrets.find(name);
  if (it == secrets.end()) config_error("no secret key for '" + name + "' in the secrets file");
  return it->second;
}

/// Wraps the action phase: protocol refusals exit 2 (config problems were
/// already handled by the caller's loading phase).
template <typename F>
int action_phase(F&& f) {
  try {
    return f();
  } catch (const ProtocolError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kProtocolRejection;
  }
}

// ---------------------------------------------------------------------------

struct SetupOptions {
  uint32_t base_u = 10;
  uint32_t max_digits = 8;
  uint64_t seed = 7;
  std::string out_dir;
};

int run_setup(const SetupOptions& opt) {
  if (opt.base_u < 2) config_error("--u must be at least 2");
  if (opt.max_digits == 0 || opt.max_digits > 18) config_error("--l must be in 1..18");
  std::filesystem::create_directories(opt.out_dir);
  const WorldPaths paths{opt.out_dir};
  Bytes seed_bytes = str_bytes("privchain.authority.setup.");
  {
    ByteWriter w;
    w.u64(opt.seed);
    const Bytes tail = w.take();
    seed_bytes.insert(seed_bytes.end(), tail.begin(), tail.end());
  }
  auto [pk, vk] = zkrp_setup(opt.base_u, opt.max_digits, seed_bytes);
  pk.save_file(paths.proving_key());
  vk.save_file(paths.verification_key());
  std::cout << "proving key " << paths.proving_key() << "\n";
  std::cout << "verification key " << paths.verification_key() << "\n";
  return kOk;
}

struct RosterOptions {
  uint64_t seed = 7;
  std::string roster_path;
  std::string secrets_path;
  std::vector<std::string> parties;
};

int run_register_roster(const RosterOptions& opt) {
  DeterministicRng rng = seeded_rng("privchain.roster.", opt.seed);
  Roster roster;
  Secrets secrets;
  for (const std::string& spec : opt.parties) {
    const size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    if (name.empty()) config_error("party spec '" + spec + "' has an empty name");
    const SigKeyPair kp = sig_keygen(rng);
    if (!secrets.emplace(name, kp).second) config_error("duplicate party '" + name + "'");
    if (name == "device") continue;  // signing device: secrets only, not a participant
    if (colon == std::string::npos || colon + 1 == spec.size()) {
      config_error("party spec '" + spec + "' must be <name>:<role>");
    }
    roster.participants.push_back({name, spec.substr(colon + 1), kp.pub});
  }
  roster.save_file(opt.roster_path);
  save_secrets(secrets, opt.secrets_path);
  std::cout << "roster " << opt.roster_path << " (" << roster.participants.size()
            << " participants)\n";
  std::cout << "secrets " << opt.secrets_path << " (" << secrets.size() << " keys)\n";
  return kOk;
}

struct CreateOptions {
  WorldOptions world;
  std::string secrets_path;
  std::string seller;
  std::string commodity;
  std::string proof_link;
};

int run_create(const CreateOptions& opt) {
  auto world = opt.world.load();
  const Secrets secrets = load_secrets(opt.secrets_path);
  const SigKeyPair& seller = party_key(secrets, opt.seller);
  return action_phase([&] {
    TxCreate tx;
    tx.commodity_id = opt.commodity;
    tx.data_hash = sha256(str_bytes("cli-data:" + opt.commodity));
    if (!opt.proof_link.empty()) tx.proof_link = opt.proof_link;
    tx.seller_pub = seller.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.signing_payload());
    const Receipt receipt = world.ledger->submit_create(tx);
    world.ledger->save_file(opt.world.ledger_path);
    std::cout << "created " << opt.commodity << " height=" << receipt.block_height
              << " tx=" << to_hex(receipt.tx_id) << "\n";
    return kOk;
  });
}

struct TradeOptions {
  WorldOptions world;
  std::string secrets_path;
  std::string seller;
  std::string buyer;
  std::string commodity;
  // Payment material.
  uint64_t amount = 0;
  std::string bank_pub_hex;
  // Location proof material.
  std::string proof_region;
  std::string pk_path;
  double lat = 0, lon = 0;
  std::string device_id = "sensor-1";
  uint64_t timestamp = 1700000000;
  uint64_t seed = 0;
};

int run_trade(const TradeOptions& opt, const CLI::App* cmd) {
  auto world = opt.world.load();
  const Secrets secrets = load_secrets(opt.secrets_path);
  const SigKeyPair& seller = party_key(secrets, opt.seller);
  const SigKeyPair& buyer = party_key(secrets, opt.buyer);
  DeterministicRng rng = seeded_rng("privchain.cli.trade.", opt.seed);

  const bool with_payment = cmd->count("--amount") > 0;
  BoxPublicKey bank_pub{};
  if (with_payment) {
    const std::optional<Bytes> raw = from_hex(opt.bank_pub_hex);
    if (!raw || raw->size() != bank_pub.size()) {
      config_error("--bank-pub must be " + std::to_string(2 * bank_pub.size()) +
                   " hex characters");
    }
    std::copy(raw->begin(), raw->end(), bank_pub.begin());
  }

  std::optional<ProvingKey> pk;
  const Region* region = nullptr;
  if (!opt.proof_region.empty()) {
    if (opt.pk_path.empty()) config_error("--proof-region needs --pk");
    if (cmd->count("--lat") == 0 || cmd->count("--lon") == 0) {
      config_error("--proof-region needs --lat and --lon");
    }
    pk = ProvingKey::load_file(opt.pk_path);
    region = world.registry.find_by_name(opt.proof_region);
    if (!region) config_error("region '" + opt.proof_region + "' is not in the registry");
  }

  return action_phase([&] {
    TxTrade tx;
    tx.commodity_id = opt.commodity;
    tx.data_hash = sha256(str_bytes("cli-trade:" + opt.commodity));
    if (with_payment) {
      NegotiationRecord record{opt.amount, Scalar::random(rng), opt.seller};
      tx.incentive_commitment =
          make_incentive_commitment(world.vk.params, record.amount, record.blinding);
      tx.encrypted_payment_blob = build_payment_blob(bank_pub, record, rng);
    }
    tx.seller_pub = seller.pub;
    tx.buyer_pub = buyer.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.seller_signing_payload());
    tx.buyer_signature = sig_sign(buyer.sec, tx.buyer_signing_payload());

    std::optional<LocationProof> proof;
    if (region) {
      const GridIndex idx = utm_to_grid(wgs84_to_utm({opt.lat, opt.lon}));
      const SigKeyPair& device = party_key(secrets, "device");
      const SignedCoordinates coords = attest_coordinates(
          device.sec, device.pub, opt.device_id, opt.timestamp, world.vk.params, idx, rng);
      proof = prove_location(*pk, coords, *region, seller.sec, seller.pub, rng);
    }

    const TradeOutcome outcome = world.ledger->submit_trade(tx, proof);
    world.ledger->save_file(opt.world.ledger_path);
    std::cout << "traded " << opt.commodity << " height=" << outcome.receipt.block_height
              << " tx=" << to_hex(outcome.receipt.tx_id) << "\n";
    std::cout << "region " << outcome.region << (outcome.verified ? " (verified)" : " (unverified)")
              << "\n";
    if (outcome.req_pay) std::cout << "reqpay id=" << to_hex(outcome.req_pay->req_pay_id) << "\n";
    return kOk;
  });
}

struct ProduceOptions {
  WorldOptions world;
  std::string secrets_path;
  std::string producer;
  std::string product;
  std::vector<std::string> constituents;
  uint64_t seed = 0;
};

int run_produce(const ProduceOptions& opt) {
  auto world = opt.world.load();
  if (!world.key) config_error("produce needs --keyring to encrypt the constituent list");
  const Secrets secrets = load_secrets(opt.secrets_path);
  const SigKeyPair& producer = party_key(secrets, opt.producer);
  DeterministicRng rng = seeded_rng("privchain.cli.produce.", opt.seed);
  return action_phase([&] {
    std::vector<std::string> regions;
    for (const std::string& id : opt.constituents) {
      const CommodityRecord* record = world.ledger->find_commodity(id);
      regions.push_back(record ? record->region : "unknown");
    }
    TxProduce tx;
    tx.final_product_id = opt.product;
    tx.encrypted_constituents =
        encrypt_constituents(*world.key, opt.constituents, opt.product, rng).to_bytes();
    tx.regions = std::move(regions);
    tx.buyer_pub = producer.pub;
    tx.buyer_signature = sig_sign(producer.sec, tx.signing_payload());
    const Receipt receipt = world.ledger->submit_produce(tx);
    world.ledger->save_file(opt.world.ledger_path);
    std::cout << "produced " << opt.product << " height=" << receipt.block_height
              << " tx=" << to_hex(receipt.tx_id) << "\n";
    return kOk;
  });
}

struct QueryOptions {
  WorldOptions world;
  std::string product;
};

int run_query(const QueryOptions& opt) {
  auto world = opt.world.load();
  return action_phase([&] {
    // The consumer view: region names only, nothing else on stdout.
    for (const std::string& region : world.ledger->consumer_query(opt.product)) {
      std::cout << region << "\n";
    }
    return kOk;
  });
}

struct AuditOptions {
  WorldOptions world;
  std::string keyring_path;
  std::string key_id;
  std::string product;
};

int run_audit(const AuditOptions& opt) {
  auto world = opt.world.load();
  const Keyring ring = Keyring::load_file(opt.keyring_path);
  const TradeFlowKey* key =
      opt.key_id.empty() ? (ring.keys.empty() ? nullptr : &ring.keys.front())
                         : ring.find(opt.key_id);
  if (!key) config_error("trade-flow key not found in " + opt.keyring_path);
  return action_phase([&] {
    const AuditTrace trace = audit_trace(*key, *world.ledger, opt.product);
    std::cout << "product " << trace.final_product_id << "\n";
    for (const AuditBranch& branch : trace.branches) {
      std::cout << "branch " << branch.commodity_id << " create=" << to_hex(branch.create_tx_id)
                << " trade=" << to_hex(branch.trade_tx_id) << " region=[" << branch.region
                << "]\n";
    }
    return kOk;
  });
}

struct BankRunOptions {
  WorldOptions world;
  std::string bank_path;
  std::string req_pays_path;
  bool init = false;
  uint64_t seed = 7;
};

int run_bank(const BankRunOptions& opt) {
  if (opt.init) {
    VerificationKey vk = VerificationKey::load_file(opt.world.vk_path);
    DeterministicRng rng = seeded_rng("privchain.bank.init.", opt.seed);
    const BankState bank = BankState::create(vk.params, rng);
    bank.save_file(opt.bank_path);
    std::cout << "bank state " << opt.bank_path << "\n";
    std::cout << "bank public key " << to_hex(bank.keys.pub) << "\n";
    return kOk;
  }
  auto world = opt.world.load();
  BankState bank = BankState::load_file(opt.bank_path, world.vk.params);
  const std::vector<ReqPay> requests = read_req_pay_file(opt.req_pays_path);
  return action_phase([&] {
    for (const ReqPay& req : requests) {
      const BankDecision decision = bank_process(bank, req, *world.ledger);
      if (decision.replayed) {
        std::cout << "replayed id=" << to_hex(req.req_pay_id) << " "
                  << payment_outcome_name(decision.outcome) << "\n";
        continue;
      }
      world.ledger->append_payment_status(req.req_pay_id, decision.outcome);
      if (decision.outcome == PaymentOutcome::kPaid) {
        std::cout << "paid id=" << to_hex(req.req_pay_id) << "\n";
      } else {
        std::cout << "disputed id=" << to_hex(req.req_pay_id) << " reason=" << decision.reason
                  << "\n";
      }
    }
    for (const auto& [seller, balance] : bank.balances) {
      std::cout << "balance " << seller << " " << balance << "\n";
    }
    world.ledger->save_file(opt.world.ledger_path);
    bank.save_file(opt.bank_path);
    return kOk;
  });
}

struct ScenarioOptions {
  uint64_t seed = 7;
  std::string out_dir;
  std::string script_path;
  std::string config_path;
  uint32_t batch = 1;
  uint32_t base_u = 10;
  uint32_t max_digits = 8;
};

int run_scenario_cmd(const ScenarioOptions& opt) {
  const WorldPaths paths{opt.out_dir};
  std::filesystem::create_directories(paths.dir);

  ScenarioWorld world = opt.config_path.empty()
                            ? [&] {
                                DemoWorld demo =
                                    make_demo_world(opt.seed, opt.base_u, opt.max_digits);
                                write_demo_world(demo, paths);
                                return scenario_world_from_demo(std::move(demo), opt.batch,
                                                                opt.seed);
                              }()
                            : load_scenario_world(opt.config_path);

  std::string script{default_script()};
  std::string origin = "script";
  if (!opt.script_path.empty()) {
    script = read_text_file(opt.script_path);
    origin = opt.script_path;
  }
  write_text_file(paths.script(), script);

  // A stale event channel from an earlier run would replay into this one.
  std::filesystem::remove(paths.req_pays());
  ScenarioResult result = run_scenario(std::move(world), script, origin, paths.req_pays());

  write_text_file(paths.transcript(), result.transcript);
  result.ledger.save_file(paths.ledger());
  result.bank.save_file(paths.bank());
  std::cout << result.transcript;
  return result.exit_code;
}

struct BenchOptions {
  int trials = 10;
  uint64_t seed = 7;
};

int run_bench_cmd(const BenchOptions& opt) {
  const BenchReport report = run_bench(opt.trials, opt.seed);
  std::cout << report.to_text();
  return report.all_ok() ? kOk : kProtocolRejection;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PrivChain driver: privacy-preserving provenance on an append-only ledger"};
  app.require_subcommand(1);
  int rc = kOk;

  SetupOptions setup_opt;
  CLI::App* setup = app.add_subcommand("setup", "generate the proof authority's keys");
  setup->add_option("--u", setup_opt.base_u, "digit base")->capture_default_str();
  setup->add_option("--l", setup_opt.max_digits, "maximum digits per bound")->capture_default_str();
  setup->add_option("--seed", setup_opt.seed, "authority seed")->capture_default_str();
  setup->add_option("--out", setup_opt.out_dir, "output directory")->required();
  setup->callback([&] { rc = run_setup(setup_opt); });

  RosterOptions roster_opt;
  CLI::App* roster = app.add_subcommand("register-roster", "generate participant keys and roster");
  roster->add_option("--seed", roster_opt.seed, "key generation seed")->capture_default_str();
  roster->add_option("--roster", roster_opt.roster_path, "roster output file")->required();
  roster->add_option("--secrets", roster_opt.secrets_path, "secret keys output file")->required();
  roster->add_option("parties", roster_opt.parties, "<name>:<role> (use plain 'device' for the GPS key)")
      ->required();
  roster->callback([&] { rc = run_register_roster(roster_opt); });

  CreateOptions create_opt;
  CLI::App* create = app.add_subcommand("create", "register a commodity");
  create_opt.world.add_to(create);
  create->add_option("--secrets", create_opt.secrets_path, "secret keys file")->required();
  create->add_option("--seller", create_opt.seller, "selling party name")->required();
  create->add_option("--commodity", create_opt.commodity, "commodity identifier")->required();
  create->add_option("--proof-link", create_opt.proof_link, "off-chain proof link");
  create->callback([&] { rc = run_create(create_opt); });

  TradeOptions trade_opt;
  CLI::App* trade = app.add_subcommand("trade", "trade a commodity, optionally with proof and payment");
  trade_opt.world.add_to(trade, /*with_req_pay_log=*/true);
  trade->add_option("--secrets", trade_opt.secrets_path, "secret keys file")->required();
  trade->add_option("--seller", trade_opt.seller, "selling party name")->required();
  trade->add_option("--buyer", trade_opt.buyer, "buying party name")->required();
  trade->add_option("--commodity", trade_opt.commodity, "commodity identifier")->required();
  trade->add_option("--amount", trade_opt.amount, "negotiated incentive amount");
  trade->add_option("--bank-pub", trade_opt.bank_pub_hex, "bank public key (hex)");
  trade->add_option("--proof-region", trade_opt.proof_region, "region to prove");
  trade->add_option("--pk", trade_opt.pk_path, "proving key file");
  trade->add_option("--lat", trade_opt.lat, "device latitude (degrees)");
  trade->add_option("--lon", trade_opt.lon, "device longitude (degrees)");
  trade->add_option("--device-id", trade_opt.device_id, "device identifier")->capture_default_str();
  trade->add_option("--timestamp", trade_opt.timestamp, "attestation timestamp")
      ->capture_default_str();
  trade->add_option("--seed", trade_opt.seed, "rng seed for blinding and envelope")
      ->capture_default_str();
  trade->callback([&] { rc = run_trade(trade_opt, trade); });

  ProduceOptions produce_opt;
  CLI::App* produce = app.add_subcommand("produce", "register a final product");
  produce_opt.world.add_to(produce);
  produce->add_option("--secrets", produce_opt.secrets_path, "secret keys file")->required();
  produce->add_option("--producer", produce_opt.producer, "producing party name")->required();
  produce->add_option("--product", produce_opt.product, "final product identifier")->required();
  produce->add_option("--constituents", produce_opt.constituents, "constituent commodity ids")
      ->required()
      ->delimiter(',');
  produce->add_option("--seed", produce_opt.seed, "rng seed for the encryption nonce")
      ->capture_default_str();
  produce->callback([&] { rc = run_produce(produce_opt); });

  QueryOptions query_opt;
  CLI::App* query = app.add_subcommand("query", "consumer view: a product's region names");
  query_opt.world.add_to(query);
  query->add_option("--product", query_opt.product, "final product identifier")->required();
  query->callback([&] { rc = run_query(query_opt); });

  AuditOptions audit_opt;
  CLI::App* audit = app.add_subcommand("audit", "authorized trace of a product's constituents");
  audit_opt.world.add_to(audit);
  audit->add_option("--audit-keyring", audit_opt.keyring_path, "keyring holding the audit key")
      ->required();
  audit->add_option("--key-id", audit_opt.key_id, "key id (default: first key)");
  audit->add_option("--product", audit_opt.product, "final product identifier")->required();
  audit->callback([&] { rc = run_audit(audit_opt); });

  BankRunOptions bank_opt;
  CLI::App* bank = app.add_subcommand("bank-run", "process the payment request channel");
  bank_opt.world.add_to(bank);
  bank->add_option("--bank", bank_opt.bank_path, "bank state file")->required();
  bank->add_option("--req-pays", bank_opt.req_pays_path, "payment request channel file");
  bank->add_flag("--init", bank_opt.init, "create a fresh bank state file and print its key");
  bank->add_option("--seed", bank_opt.seed, "key seed for --init")->capture_default_str();
  bank->callback([&] {
    if (!bank_opt.init && bank_opt.req_pays_path.empty()) {
      config_error("bank-run needs --req-pays (or --init)");
    }
    rc = run_bank(bank_opt);
  });

  ScenarioOptions scenario_opt;
  CLI::App* scenario = app.add_subcommand("scenario", "run a scripted end-to-end scenario");
  scenario->add_option("--seed", scenario_opt.seed, "world + action seed")->capture_default_str();
  scenario->add_option("--out", scenario_opt.out_dir, "output directory")->required();
  scenario->add_option("--script", scenario_opt.script_path, "action script (default: built-in)");
  scenario->add_option("--config", scenario_opt.config_path,
                       "world config file (default: generate a demo world)");
  scenario->add_option("--batch", scenario_opt.batch, "transactions per sealed block")
      ->capture_default_str();
  scenario->add_option("--u", scenario_opt.base_u, "digit base for the generated world")
      ->capture_default_str();
  scenario->add_option("--l", scenario_opt.max_digits, "max digits for the generated world")
      ->capture_default_str();
  scenario->callback([&] { rc = run_scenario_cmd(scenario_opt); });

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "measure relative protocol overheads");
  bench->add_option("--trials", bench_opt.trials, "trials per phase (minimum 10)")
      ->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "bench world seed")->capture_default_str();
  bench->callback([&] { rc = run_bench_cmd(bench_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const ProtocolError& e) {
    // Anything thrown outside an action_phase is a configuration problem:
    // bad flags, missing files, unparseable inputs, corrupt key material.
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  return rc;
}
