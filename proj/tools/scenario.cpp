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
#include "scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "privchain/bytes.hpp"
#include "privchain/rng.hpp"

namespace privchain::tools {

namespace {

constexpr uint64_t kBaseTimestamp = 1700000000;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProtocolError(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::optional<ErrorCode> error_code_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (name == error_code_name(code)) return code;
  }
  return std::nullopt;
}

struct Action {
  size_t line_no = 0;
  std::string verb;
  std::vector<std::string> args;                // positional tokens
  std::optional<std::string> proof_region;      // trade: proof=... value
  std::optional<uint64_t> pay;                  // trade: pay=...
  std::optional<ErrorCode> expect;              // create/trade/produce
  std::string text;                             // original line, trimmed
};

std::vector<Action> parse_script(std::string_view script, std::string_view origin) {
  std::vector<Action> actions;
  std::istringstream stream{std::string(script)};
  std::string line;
  size_t line_no = 0;
  const auto fail = [&](const std::string& what) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed,
                         std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token) || token.front() == '#') continue;

    Action act;
    act.line_no = line_no;
    act.verb = token;
    while (fields >> token) {
      if (token.starts_with("proof=")) {
        act.proof_region = token.substr(6);
      } else if (token.starts_with("pay=")) {
        const std::string_view num = std::string_view(token).substr(4);
        uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc{} || ptr != num.data() + num.size()) {
          throw fail("pay= expects an unsigned amount, got '" + token + "'");
        }
        act.pay = value;
      } else if (token.starts_with("expect=")) {
        const std::optional<ErrorCode> code = error_code_from_name(token.substr(7));
        if (!code) throw fail("unknown refusal name in '" + token + "'");
        act.expect = code;
      } else {
        act.args.push_back(token);
      }
    }

    const auto need_args = [&](size_t n, const char* usage) {
      if (act.args.size() != n) throw fail(std::string("usage: ") + usage);
    };
    if (act.verb == "create") {
      need_args(2, "create <seller> <commodity>");
    } else if (act.verb == "trade") {
      need_args(3, "trade <seller> <buyer> <commodity> [proof=..] [pay=..] [expect=..]");
    } else if (act.verb == "produce") {
      need_args(3, "produce <producer> <product> <id>[,<id>...] [expect=..]");
    } else if (act.verb == "settle") {
      need_args(0, "settle");
    } else if (act.verb == "query") {
      need_args(1, "query <product>");
    } else {
      throw fail("unknown action '" + act.verb + "'");
    }
    if (act.expect && (act.verb == "settle" || act.verb == "query")) {
      throw fail("expect= applies to create/trade/produce only");
    }

    // Reconstruct a canonical form for the transcript.
    act.text = act.verb;
    for (const std::string& a : act.args) act.text += " " + a;
    if (act.proof_region) act.text += " proof=" + *act.proof_region;
    if (act.pay) act.text += " pay=" + std::to_string(*act.pay);
    if (act.expect) act.text += std::string(" expect=") + error_code_name(*act.expect);
    actions.push_back(std::move(act));
  }
  return actions;
}

std::vector<std::string> split_commas(const std::string& joined) {
  std::vector<std::string> out;
  std::string current;
  for (char c : joined) {
    if (c == ',') {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

class Runner {
 public:
  Runner(ScenarioWorld&& world, const std::optional<std::string>& req_pay_log)
      : world_(std::move(world)),
        rng_([&] {
          Bytes seed = str_bytes("privchain.scenario.actions.");
          ByteWriter w;
          w.u64(world_.seed);
          const Bytes tail = w.take();
          seed.insert(seed.end(), tail.begin(), tail.end());
          return seed;
        }()),
        ledger_(LedgerConfig{world_.batch, req_pay_log}, ViscConfig{world_.vk, world_.registry},
                world_.roster, world_.keyring.keys.empty()
                                   ? std::nullopt
                                   : std::optional<TradeFlowKey>(world_.keyring.keys.front())) {}

  ScenarioResult run(std::span<const Action> actions) {
    out_ << "# privchain scenario transcript\n";
    out_ << "seed " << world_.seed << "\n";
    out_ << "batch " << world_.batch << "\n";
    out_ << "parties";
    for (const Participant& p : world_.roster.participants) out_ << " " << p.name << ":" << p.role;
    out_ << "\n";
    out_ << "regions";
    for (const Region& r : world_.registry.all()) out_ << " " << r.name;
    out_ << "\n";

    int exit_code = 0;
    for (const Action& act : actions) {
      out_ << "action " << act.line_no << " " << act.text << "\n";
      if (!step(act)) {
        exit_code = 2;
        break;
      }
    }
    out_ << (exit_code == 0 ? "end ok\n" : "end failed\n");
    ledger_.flush();
    return ScenarioResult{out_.str(), exit_code, std::move(ledger_), std::move(world_.bank)};
  }

 private:
  const SigKeyPair& key_of(const std::string& name, size_t line_no) {
    const auto it = world_.secrets.find(name);
    if (it == world_.secrets.end()) {
      throw ProtocolError(ErrorCode::kMalformed,
                          "script:" + std::to_string(line_no) + ": no secret key for '" + name +
                              "' in the secrets file");
    }
    return it->second;
  }

  /// Runs `submit`, writing either a receipt line (via `on_ok`) or a refusal
  /// line. Returns false when the outcome diverges from the script.
  template <typename Submit, typename OnOk>
  bool guarded(const Action& act, Submit&& submit, OnOk&& on_ok) {
    try {
      auto outcome = submit();
      if (act.expect) {
        out_ << "  error expected refusal " << error_code_name(*act.expect)
             << " but the action was accepted\n";
        return false;
      }
      on_ok(outcome);
      return true;
    } catch (const ProtocolError& e) {
      if (act.expect && e.code() == *act.expect) {
        out_ << "  refused " << error_code_name(e.code()) << " (expected)\n";
        return true;
      }
      out_ << "  refused " << e.what() << "\n";
      return false;
    }
  }

  bool step(const Action& act) {
    if (act.verb == "create") return do_create(act);
    if (act.verb == "trade") return do_trade(act);
    if (act.verb == "produce") return do_produce(act);
    if (act.verb == "settle") return do_settle();
    return do_query(act);
  }

  bool do_create(const Action& act) {
    const SigKeyPair& seller = key_of(act.args[0], act.line_no);
    TxCreate tx;
    tx.commodity_id = act.args[1];
    tx.data_hash = sha256(str_bytes("demo-data:" + act.args[1]));
    tx.seller_pub = seller.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.signing_payload());
    return guarded(
        act, [&] { return ledger_.submit_create(tx); },
        [&](const Receipt& r) {
          out_ << "  receipt height=" << r.block_height << " tx=" << to_hex(r.tx_id) << "\n";
        });
  }

  std::optional<LocationProof> build_proof(const std::string& spec, const SigKeyPair& seller,
                                           size_t line_no) {
    const SigKeyPair& device = key_of("device", line_no);
    const uint64_t timestamp = kBaseTimestamp + timestamp_counter_++;
    if (spec == "offregion") {
      // A square outside every registered region; the proof verifies but the
      // bounds match no registry entry.
      int64_t e10 = 0, n10 = 0;
      int zone = 30;
      bool north = true;
      for (const Region& r : world_.registry.all()) {
        e10 = std::max(e10, r.e10_hi);
        n10 = std::max(n10, r.n10_hi);
        zone = r.zone;
        north = r.north;
      }
      e10 += 1000;
      n10 += 1000;
      const SignedCoordinates coords =
          attest_coordinates(device.sec, device.pub, "sensor-1", timestamp, world_.vk.params,
                             GridIndex{zone, north, e10, n10}, rng_);
      const Region local{"local", zone, north, e10, e10, n10, n10};
      return prove_location(world_.pk, coords, local, seller.sec, seller.pub, rng_);
    }
    const Region* region = world_.registry.find_by_name(spec);
    if (!region) {
      throw ProtocolError(ErrorCode::kMalformed, "script:" + std::to_string(line_no) +
                                                     ": unknown region '" + spec + "'");
    }
    const GridIndex center{region->zone, region->north, (region->e10_lo + region->e10_hi) / 2,
                           (region->n10_lo + region->n10_hi) / 2};
    const SignedCoordinates coords = attest_coordinates(device.sec, device.pub, "sensor-1",
                                                        timestamp, world_.vk.params, center, rng_);
    return prove_location(world_.pk, coords, *region, seller.sec, seller.pub, rng_);
  }

  bool do_trade(const Action& act) {
    const SigKeyPair& seller = key_of(act.args[0], act.line_no);
    const SigKeyPair& buyer = key_of(act.args[1], act.line_no);

    TxTrade tx;
    tx.commodity_id = act.args[2];
    tx.data_hash = sha256(str_bytes("demo-trade:" + act.args[2]));
    if (act.pay) {
      NegotiationRecord record;
      record.amount = *act.pay;
      record.blinding = Scalar::random(rng_);
      record.seller_id = act.args[0];
      tx.incentive_commitment =
          make_incentive_commitment(world_.vk.params, record.amount, record.blinding);
      tx.encrypted_payment_blob = build_payment_blob(world_.bank.keys.pub, record, rng_);
    }
    tx.seller_pub = seller.pub;
    tx.buyer_pub = buyer.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.seller_signing_payload());
    tx.buyer_signature = sig_sign(buyer.sec, tx.buyer_signing_payload());

    std::optional<LocationProof> proof;
    if (act.proof_region) proof = build_proof(*act.proof_region, seller, act.line_no);
    return guarded(
        act, [&] { return ledger_.submit_trade(tx, proof); },
        [&](const TradeOutcome& out) {
          out_ << "  receipt height=" << out.receipt.block_height
               << " tx=" << to_hex(out.receipt.tx_id) << "\n";
          out_ << "  region " << out.region << (out.verified ? " (verified)" : " (unverified)")
               << "\n";
          if (out.req_pay) {
            out_ << "  reqpay id=" << to_hex(out.req_pay->req_pay_id) << "\n";
          }
        });
  }

  bool do_produce(const Action& act) {
    const SigKeyPair& producer = key_of(act.args[0], act.line_no);
    const std::vector<std::string> ids = split_commas(act.args[2]);

    // The producer declares regions from its trade receipts; unknown
    // constituents get a placeholder so the refusal stays the ledger's call.
    std::vector<std::string> regions;
    for (const std::string& id : ids) {
      const CommodityRecord* record = ledger_.find_commodity(id);
      regions.push_back(record ? record->region : "unknown");
    }

    TxProduce tx;
    tx.final_product_id = act.args[1];
    if (world_.keyring.keys.empty()) {
      throw ProtocolError(ErrorCode::kMalformed, "script:" + std::to_string(act.line_no) +
                                                     ": produce needs a trade-flow key");
    }
    tx.encrypted_constituents =
        encrypt_constituents(world_.keyring.keys.front(), ids, tx.final_product_id, rng_)
            .to_bytes();
    tx.regions = std::move(regions);
    tx.buyer_pub = producer.pub;
    tx.buyer_signature = sig_sign(producer.sec, tx.signing_payload());
    return guarded(
        act, [&] { return ledger_.submit_produce(tx); },
        [&](const Receipt& r) {
          out_ << "  receipt height=" << r.block_height << " tx=" << to_hex(r.tx_id) << "\n";
          out_ << "  regions";
          for (const std::string& region : tx.regions) out_ << " [" << region << "]";
          out_ << "\n";
        });
  }

  bool do_settle() {
    const std::vector<ReqPay> requests = ledger_.drain_req_pay_events();
    for (const ReqPay& req : requests) {
      const BankDecision decision = bank_process(world_.bank, req, ledger_);
      ledger_.append_payment_status(req.req_pay_id, decision.outcome);
      if (decision.outcome == PaymentOutcome::kPaid) {
        out_ << "  paid id=" << to_hex(req.req_pay_id) << "\n";
      } else {
        out_ << "  disputed id=" << to_hex(req.req_pay_id) << " reason=" << decision.reason
             << "\n";
      }
    }
    for (const auto& [seller, balance] : world_.bank.balances) {
      out_ << "  balance " << seller << " " << balance << "\n";
    }
    return true;
  }

  bool do_query(const Action& act) {
    try {
      for (const std::string& region : ledger_.consumer_query(act.args[0])) {
        out_ << "  region " << region << "\n";
      }
      return true;
    } catch (const ProtocolError& e) {
      out_ << "  refused " << e.what() << "\n";
      return false;
    }
  }

  ScenarioWorld world_;
  DeterministicRng rng_;
  Ledger ledger_;
  std::ostringstream out_;
  uint64_t timestamp_counter_ = 0;
};

}  // namespace

ScenarioWorld scenario_world_from_demo(DemoWorld world, uint32_t batch, uint64_t seed) {
  return ScenarioWorld{std::move(world.pk),     std::move(world.vk),      std::move(world.registry),
                       std::move(world.roster), std::move(world.secrets), std::move(world.keyring),
                       std::move(world.bank),   batch,                    seed};
}

ScenarioWorld load_scenario_world(const std::string& config_path) {
  const std::string text = read_text_file(config_path);
  std::map<std::string, std::string> values;
  std::istringstream stream(text);
  std::string line;
  size_t line_no = 0;
  const auto fail = [&](const std::string& what) -> ProtocolError {
    return ProtocolError(ErrorCode::kMalformed,
                         config_path + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key) || key.front() == '#') continue;
    if (!(fields >> value)) throw fail("expected '<key> <value>'");
    if (fields >> extra) throw fail("trailing field '" + extra + "'");
    if (!values.emplace(key, value).second) throw fail("duplicate key '" + key + "'");
  }
  const auto require = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) {
      throw ProtocolError(ErrorCode::kMalformed,
                          config_path + ": missing required key '" + key + "'");
    }
    return it->second;
  };
  const auto parse_u = [&](const std::string& key, uint64_t fallback) -> uint64_t {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    uint64_t out = 0;
    const std::string& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ProtocolError(ErrorCode::kMalformed, config_path + ": key '" + key +
                                                     "' expects an unsigned integer, got '" + s +
                                                     "'");
    }
    return out;
  };

  VerificationKey vk = VerificationKey::load_file(require("verification_key"));
  BankState bank = BankState::load_file(require("bank"), vk.params);
  ScenarioWorld world{
      .pk = ProvingKey::load_file(require("proving_key")),
      .vk = std::move(vk),
      .registry = RegionRegistry::load_file(require("regions")),
      .roster = Roster::load_file(require("roster")),
      .secrets = load_secrets(require("secrets")),
      .keyring = Keyring::load_file(require("keyring")),
      .bank = std::move(bank),
      .batch = static_cast<uint32_t>(parse_u("batch", 1)),
      .seed = parse_u("seed", 7),
  };
  return world;
}

ScenarioResult run_scenario(ScenarioWorld world, std::string_view script,
                            std::string_view script_origin,
                            const std::optional<std::string>& req_pay_log) {
  const std::vector<Action> actions = parse_script(script, script_origin);
  Runner runner(std::move(world), req_pay_log);
  return runner.run(actions);
}

std::string_view default_script() {
  return R"(# wine bottle with three grape lots
create alice grapes-1
create alice grapes-2
create carol grapes-3
trade alice bob grapes-1 proof=bordeaux pay=120
trade alice bob grapes-2 proof=bordeaux pay=80
trade carol bob grapes-3 proof=rioja pay=200
trade alice bob grapes-1 expect=AlreadyTraded
create dave grapes-4
trade dave bob grapes-4 proof=offregion pay=75
produce bob wine-1 grapes-1,grapes-2,grapes-3
settle
query wine-1
)";
}

}  // namespace privchain::tools
