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
#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "privchain/bank.hpp"
#include "privchain/bytes.hpp"
#include "privchain/geo_grid.hpp"
#include "privchain/ledger.hpp"
#include "privchain/rng.hpp"
#include "privchain/sig.hpp"
#include "privchain/tradeflow.hpp"
#include "privchain/zkrp.hpp"

namespace privchain::tools {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

/// Times `op()` once per trial; `prepare(trial)` runs outside the clock.
BenchPhase measure(std::string name, int trials, const std::function<void(int)>& prepare,
                   const std::function<void(int)>& op) {
  std::vector<double> samples;
  samples.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    prepare(t);
    const auto t0 = Clock::now();
    op(t);
    const auto t1 = Clock::now();
    samples.push_back(elapsed_ms(t0, t1));
  }
  double mean = 0;
  for (double s : samples) mean += s;
  mean /= samples.size();
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= samples.size();
  return BenchPhase{std::move(name), trials, mean, std::sqrt(var)};
}

struct Counters {
  int commodity = 0;
  int product = 0;
  std::string next_commodity() { return "bench-c" + std::to_string(commodity++); }
  std::string next_product() { return "bench-p" + std::to_string(product++); }
};

}  // namespace

bool BenchReport::all_ok() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const BenchAssertion& a) { return a.ok; });
}

std::string BenchReport::to_text() const {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "# privchain bench\n";
  out << "digit_base " << base_u << "\n";
  out << "setup_ms " << setup_ms << " trials=1 (one-time)\n";
  for (const BenchPhase* phase :
       {&prove, &verify, &trade_proof, &trade_base, &produce_enc, &produce_base}) {
    out << phase->name << "_ms mean=" << phase->mean_ms << " stddev=" << phase->stddev_ms
        << " trials=" << phase->trials << "\n";
  }
  out.precision(2);
  out << "ratio trade_proof/trade_base " << trade_ratio << "\n";
  out << "ratio produce_enc/produce_base " << produce_ratio << "\n";
  for (const BenchAssertion& a : assertions) {
    out << "assert " << a.label << ": " << (a.ok ? "ok" : "FAILED") << "\n";
  }
  out << (all_ok() ? "bench ok\n" : "bench FAILED\n");
  return out.str();
}

BenchReport run_bench(int trials, uint64_t seed) {
  trials = std::max(trials, 10);
  BenchReport report;
  report.base_u = 10;

  Bytes seed_bytes = str_bytes("privchain.bench.");
  {
    ByteWriter w;
    w.u64(seed);
    const Bytes tail = w.take();
    seed_bytes.insert(seed_bytes.end(), tail.begin(), tail.end());
  }
  DeterministicRng rng(seed_bytes);

  // One-time authority setup, measured exactly once.
  const auto setup0 = Clock::now();
  auto [pk, vk] = zkrp_setup(report.base_u, 8, seed_bytes);
  const auto setup1 = Clock::now();
  report.setup_ms = elapsed_ms(setup0, setup1);

  // A 10x10-cell region: each interval bound fits in one digit at u=10.
  const Region benchland{"benchland", 30, true, 48000, 48009, 495000, 495009};
  const RegionRegistry registry({benchland});
  const GridIndex farm{30, true, 48004, 495006};

  const SigKeyPair seller = sig_keygen(rng);
  const SigKeyPair buyer = sig_keygen(rng);
  const SigKeyPair device = sig_keygen(rng);
  Roster roster;
  roster.participants = {{"seller", "farmer", seller.pub}, {"buyer", "producer", buyer.pub}};
  const TradeFlowKey flow_key = make_tradeflow_key("bench-key", rng);
  const BoxKeyPair bank = box_keygen(rng);

  // Proof generation and verification in isolation.
  uint64_t timestamp = 1700000000;
  SignedCoordinates coords;
  LocationProof proof;
  report.prove = measure(
      "prove", trials,
      [&](int) {
        coords = attest_coordinates(device.sec, device.pub, "bench-sensor", timestamp++,
                                    vk.params, farm, rng);
      },
      [&](int) { proof = prove_location(pk, coords, benchland, seller.sec, seller.pub, rng); });
  report.verify = measure(
      "verify", trials, [&](int) {},
      [&](int) {
        if (!verify_location(vk, registry, proof).ok()) {
          throw ProtocolError(ErrorCode::kMalformed, "bench proof failed to verify");
        }
      });

  // Trade costs, measured through the ledger. Both variants construct the
  // full transaction (commitment, sealed payment blob, both signatures) and
  // submit it; the proof variant additionally carries a location proof the
  // contract must verify. Proof generation is excluded: it is the prover's
  // cost, reported above.
  Ledger ledger(LedgerConfig{}, ViscConfig{vk, registry}, roster, flow_key);
  Counters ids;
  const auto create_one = [&](const std::string& id) {
    TxCreate tx;
    tx.commodity_id = id;
    tx.data_hash = sha256(str_bytes(id));
    tx.seller_pub = seller.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.signing_payload());
    ledger.submit_create(tx);
    return id;
  };
  const auto run_trade = [&](const std::string& id, const std::optional<LocationProof>& lp) {
    NegotiationRecord record{500, Scalar::random(rng), "seller"};
    TxTrade tx;
    tx.commodity_id = id;
    tx.data_hash = sha256(str_bytes(id));
    tx.incentive_commitment = make_incentive_commitment(vk.params, record.amount, record.blinding);
    tx.encrypted_payment_blob = build_payment_blob(bank.pub, record, rng);
    tx.seller_pub = seller.pub;
    tx.buyer_pub = buyer.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.seller_signing_payload());
    tx.buyer_signature = sig_sign(buyer.sec, tx.buyer_signing_payload());
    (void)ledger.submit_trade(tx, lp);
  };

  constexpr int kTradeInner = 8;  // baseline ops are fast; batch them per trial
  std::vector<std::string> pending;
  report.trade_base = measure(
      "trade_base", trials,
      [&](int) {
        pending.clear();
        for (int i = 0; i < kTradeInner; ++i) pending.push_back(create_one(ids.next_commodity()));
      },
      [&](int) {
        for (const std::string& id : pending) run_trade(id, std::nullopt);
      });
  report.trade_base.mean_ms /= kTradeInner;
  report.trade_base.stddev_ms /= kTradeInner;

  std::string proof_commodity;
  report.trade_proof = measure(
      "trade_proof", trials,
      [&](int) { proof_commodity = create_one(ids.next_commodity()); },
      [&](int) { run_trade(proof_commodity, proof); });

  // Produce costs: encrypting + validated submission vs. submitting a
  // prepared opaque blob to a ledger without the trade-flow key.
  Ledger opaque(LedgerConfig{}, ViscConfig{vk, registry}, roster, std::nullopt);
  const auto trade_plain = [&](Ledger& target, const std::string& id) {
    TxTrade tx;
    tx.commodity_id = id;
    tx.data_hash = sha256(str_bytes(id));
    tx.seller_pub = seller.pub;
    tx.buyer_pub = buyer.pub;
    tx.seller_signature = sig_sign(seller.sec, tx.seller_signing_payload());
    tx.buyer_signature = sig_sign(buyer.sec, tx.buyer_signing_payload());
    (void)target.submit_trade(tx, std::nullopt);
  };
  const auto traded_triple = [&](Ledger& target) {
    std::vector<std::string> triple;
    for (int i = 0; i < 3; ++i) {
      const std::string id = ids.next_commodity();
      TxCreate tx;
      tx.commodity_id = id;
      tx.data_hash = sha256(str_bytes(id));
      tx.seller_pub = seller.pub;
      tx.seller_signature = sig_sign(seller.sec, tx.signing_payload());
      target.submit_create(tx);
      trade_plain(target, id);
      triple.push_back(id);
    }
    return triple;
  };
  const auto produce_tx = [&](const std::vector<std::string>& triple, const std::string& product,
                              bool encrypt) {
    TxProduce tx;
    tx.final_product_id = product;
    if (encrypt) {
      tx.encrypted_constituents = encrypt_constituents(flow_key, triple, product, rng).to_bytes();
    }
    tx.regions.assign(3, std::string(kRegionProofAbsent));
    tx.buyer_pub = buyer.pub;
    tx.buyer_signature = sig_sign(buyer.sec, tx.signing_payload());
    return tx;
  };

  constexpr int kProduceInner = 8;
  std::vector<std::vector<std::string>> triples;
  std::vector<std::string> products;
  report.produce_enc = measure(
      "produce_enc", trials,
      [&](int) {
        triples.clear();
        products.clear();
        for (int i = 0; i < kProduceInner; ++i) {
          triples.push_back(traded_triple(ledger));
          products.push_back(ids.next_product());
        }
      },
      [&](int) {
        for (int i = 0; i < kProduceInner; ++i) {
          ledger.submit_produce(produce_tx(triples[i], products[i], true));
        }
      });
  report.produce_enc.mean_ms /= kProduceInner;
  report.produce_enc.stddev_ms /= kProduceInner;

  std::vector<TxProduce> prepared;
  report.produce_base = measure(
      "produce_base", trials,
      [&](int) {
        prepared.clear();
        for (int i = 0; i < kProduceInner; ++i) {
          const auto triple = traded_triple(opaque);
          TxProduce tx = produce_tx(triple, ids.next_product(), true);
          prepared.push_back(std::move(tx));
        }
      },
      [&](int) {
        for (const TxProduce& tx : prepared) opaque.submit_produce(tx);
      });
  report.produce_base.mean_ms /= kProduceInner;
  report.produce_base.stddev_ms /= kProduceInner;

  report.trade_ratio = report.trade_proof.mean_ms / report.trade_base.mean_ms;
  report.produce_ratio = report.produce_enc.mean_ms / report.produce_base.mean_ms;
  report.assertions = {
      {"trade_proof mean > trade_base mean", report.trade_proof.mean_ms > report.trade_base.mean_ms},
      {"trade ratio in [1.5, 50]", report.trade_ratio >= 1.5 && report.trade_ratio <= 50.0},
      {"produce ratio < 3", report.produce_ratio < 3.0},
      {"prove mean < 5000 ms", report.prove.mean_ms < 5000.0},
      {"setup < 10000 ms", report.setup_ms < 10000.0},
  };
  return report;
}

}  // namespace privchain::tools
