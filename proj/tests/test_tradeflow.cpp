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
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "privchain/errors.hpp"
#include "privchain/rng.hpp"
#include "privchain/tradeflow.hpp"

using namespace privchain;

namespace {

template <typename F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const ProtocolError& e) {
    return e.code();
  }
  return std::nullopt;
}

std::vector<std::string> sample_ids() {
  return {"grapes-lot-17", "grapes-lot-03", "cork-batch-9", "bottle-run-2026"};
}

std::filesystem::path temp_path(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("constituent encryption round-trips ids in order") {
  DeterministicRng rng(101);
  const TradeFlowKey key = make_tradeflow_key("harvest-2026", rng);

  // Deliberately unsorted: the decrypted sequence must preserve input order,
  // because produce matches its regions attribute positionally.
  const std::vector<std::string> ids = sample_ids();
  const ConstituentBlob blob = encrypt_constituents(key, ids, "wine-1", rng);
  CHECK(blob.key_id == "harvest-2026");
  CHECK(decrypt_constituents(key, blob, "wine-1") == ids);

  const std::vector<std::string> one = {"grapes-lot-17"};
  const ConstituentBlob single = encrypt_constituents(key, one, "wine-2", rng);
  CHECK(decrypt_constituents(key, single, "wine-2") == one);

  std::vector<std::string> many;
  for (int i = 0; i < 100; ++i) many.push_back("lot-" + std::to_string(i * 7 % 100));
  const ConstituentBlob wide = encrypt_constituents(key, many, "wine-3", rng);
  CHECK(decrypt_constituents(key, wide, "wine-3") == many);
}

TEST_CASE("an empty constituent list is refused") {
  DeterministicRng rng(102);
  const TradeFlowKey key = make_tradeflow_key("k", rng);
  const std::vector<std::string> none;
  CHECK(thrown_code([&] { encrypt_constituents(key, none, "wine-1", rng); }) ==
        ErrorCode::kInvalidParameter);
}

TEST_CASE("decryption requires the exact key") {
  DeterministicRng rng(103);
  const TradeFlowKey key = make_tradeflow_key("k-2026", rng);
  const ConstituentBlob blob = encrypt_constituents(key, sample_ids(), "wine-1", rng);

  SUBCASE("same id, different key bytes: authentication fails") {
    TradeFlowKey other = make_tradeflow_key("k-2026", rng);
    REQUIRE(other.key != key.key);
    CHECK(thrown_code([&] { decrypt_constituents(other, blob, "wine-1"); }) ==
          ErrorCode::kAuthFailure);
  }

  SUBCASE("same bytes, different key id: refused before any decryption") {
    TradeFlowKey renamed = key;
    renamed.key_id = "k-2027";
    CHECK(thrown_code([&] { decrypt_constituents(renamed, blob, "wine-1"); }) ==
          ErrorCode::kAuthFailure);
  }
}

TEST_CASE("a blob is bound to its final product id") {
  DeterministicRng rng(104);
  const TradeFlowKey key = make_tradeflow_key("k", rng);
  const ConstituentBlob blob = encrypt_constituents(key, sample_ids(), "wine-1", rng);
  // Transplanting the blob onto another product must fail authentication even
  // under the right key: the product id is associated data.
  CHECK(thrown_code([&] { decrypt_constituents(key, blob, "wine-2"); }) ==
        ErrorCode::kAuthFailure);
  CHECK(thrown_code([&] { decrypt_constituents(key, blob, ""); }) == ErrorCode::kAuthFailure);
}

TEST_CASE("tampering is rejected outright, never as partial output") {
  DeterministicRng rng(105);
  const TradeFlowKey key = make_tradeflow_key("k", rng);
  const ConstituentBlob blob = encrypt_constituents(key, sample_ids(), "wine-1", rng);

  SUBCASE("every single-bit ciphertext flip fails") {
    for (size_t i = 0; i < blob.ciphertext.size(); ++i) {
      ConstituentBlob bad = blob;
      bad.ciphertext[i] ^= 0x01;
      CHECK(thrown_code([&] { decrypt_constituents(key, bad, "wine-1"); }) ==
            ErrorCode::kAuthFailure);
    }
  }

  SUBCASE("nonce flips fail") {
    for (size_t i = 0; i < blob.nonce.size(); ++i) {
      ConstituentBlob bad = blob;
      bad.nonce[i] ^= 0x80;
      CHECK(thrown_code([&] { decrypt_constituents(key, bad, "wine-1"); }) ==
            ErrorCode::kAuthFailure);
    }
  }

  SUBCASE("truncation fails, including below the tag length") {
    for (size_t keep : {blob.ciphertext.size() - 1, blob.ciphertext.size() / 2, size_t{16},
                        size_t{1}, size_t{0}}) {
      ConstituentBlob bad = blob;
      bad.ciphertext.resize(keep);
      CHECK(thrown_code([&] { decrypt_constituents(key, bad, "wine-1"); }) ==
            ErrorCode::kAuthFailure);
    }
  }
}

TEST_CASE("re-encrypting the same list yields byte-distinct blobs") {
  DeterministicRng rng(106);
  const TradeFlowKey key = make_tradeflow_key("k", rng);
  const ConstituentBlob a = encrypt_constituents(key, sample_ids(), "wine-1", rng);
  const ConstituentBlob b = encrypt_constituents(key, sample_ids(), "wine-1", rng);
  CHECK(a.nonce != b.nonce);
  CHECK(a.ciphertext != b.ciphertext);
  // Same plaintext, same lengths: size alone reveals only total id bytes.
  CHECK(a.ciphertext.size() == b.ciphertext.size());
  CHECK(decrypt_constituents(key, a, "wine-1") == decrypt_constituents(key, b, "wine-1"));
}

TEST_CASE("blob ciphertexts show no positional bias across a thousand samples") {
  DeterministicRng rng(107);
  const TradeFlowKey key = make_tradeflow_key("k", rng);

  // Two products sharing a constituent. If ciphertext bytes correlated with
  // the shared id, some bit position would drift from 1/2 across samples.
  const std::vector<std::string> left = {"grapes-lot-17", "cork-batch-9"};
  const std::vector<std::string> right = {"grapes-lot-17", "cork-batch-4"};

  constexpr int kSamples = 1000;
  const size_t probe_bytes = 16;
  std::vector<int> ones(probe_bytes * 8, 0);
  std::set<std::array<uint8_t, 24>> nonces;
  std::set<Bytes> blobs;
  for (int i = 0; i < kSamples; ++i) {
    const auto& ids = (i % 2 == 0) ? left : right;
    const std::string product = "wine-" + std::to_string(i);
    const ConstituentBlob blob = encrypt_constituents(key, ids, product, rng);
    REQUIRE(blob.ciphertext.size() >= probe_bytes);
    nonces.insert(blob.nonce);
    blobs.insert(blob.ciphertext);
    for (size_t byte = 0; byte < probe_bytes; ++byte) {
      for (int bit = 0; bit < 8; ++bit) {
        ones[byte * 8 + bit] += (blob.ciphertext[byte] >> bit) & 1;
      }
    }
  }
  CHECK(nonces.size() == kSamples);
  CHECK(blobs.size() == kSamples);

  // Binomial(1000, 1/2): standard deviation ~15.8, so +-95 is six sigma.
  for (size_t pos = 0; pos < ones.size(); ++pos) {
    CAPTURE(pos);
    CHECK(ones[pos] > 405);
    CHECK(ones[pos] < 595);
  }
}

TEST_CASE("blob codec round-trips and rejects malformed bytes") {
  DeterministicRng rng(108);
  const TradeFlowKey key = make_tradeflow_key("harvest", rng);
  const ConstituentBlob blob = encrypt_constituents(key, sample_ids(), "wine-1", rng);

  const Bytes wire = blob.to_bytes();
  const auto back = ConstituentBlob::from_bytes(wire);
  REQUIRE(back.has_value());
  CHECK(back->key_id == blob.key_id);
  CHECK(back->nonce == blob.nonce);
  CHECK(back->ciphertext == blob.ciphertext);
  CHECK(decrypt_constituents(key, *back, "wine-1") == sample_ids());

  for (size_t keep = 0; keep < wire.size(); keep += 7) {
    CHECK_FALSE(ConstituentBlob::from_bytes(std::span(wire).first(keep)).has_value());
  }
  Bytes padded = wire;
  padded.push_back(0);
  CHECK_FALSE(ConstituentBlob::from_bytes(padded).has_value());
}

TEST_CASE("key generation draws from the caller's rng") {
  DeterministicRng a(42), b(42), c(43);
  const TradeFlowKey ka = make_tradeflow_key("k", a);
  const TradeFlowKey kb = make_tradeflow_key("k", b);
  const TradeFlowKey kc = make_tradeflow_key("k", c);
  CHECK(ka.key == kb.key);
  CHECK(ka.key != kc.key);

  DeterministicRng rng(44);
  CHECK(thrown_code([&] { make_tradeflow_key("", rng); }) == ErrorCode::kInvalidParameter);
  CHECK(thrown_code([&] { make_tradeflow_key("two words", rng); }) ==
        ErrorCode::kInvalidParameter);
}

TEST_CASE("keyring text format parses, saves, and loads") {
  DeterministicRng rng(109);
  Keyring ring;
  ring.keys.push_back(make_tradeflow_key("harvest-2025", rng));
  ring.keys.push_back(make_tradeflow_key("harvest-2026", rng));

  const std::string text = ring.to_text();
  const Keyring parsed = Keyring::parse(text, "test");
  REQUIRE(parsed.keys.size() == 2);
  CHECK(parsed.keys[0].key_id == "harvest-2025");
  CHECK(parsed.keys[0].key == ring.keys[0].key);
  CHECK(parsed.keys[1].key == ring.keys[1].key);

  CHECK(parsed.find("harvest-2026") != nullptr);
  CHECK(parsed.find("harvest-2026")->key == ring.keys[1].key);
  CHECK(parsed.find("harvest-2027") == nullptr);

  SUBCASE("comments, blank lines, and CRLF endings are tolerated") {
    const std::string messy = "# production keyring\n\r\n" + text + "\n  # trailing note\n";
    CHECK(Keyring::parse(messy, "messy").keys.size() == 2);
  }

  SUBCASE("file round-trip") {
    const auto path = temp_path("privchain_test_keyring.txt");
    ring.save_file(path.string());
    const Keyring loaded = Keyring::load_file(path.string());
    REQUIRE(loaded.keys.size() == 2);
    CHECK(loaded.keys[1].key == ring.keys[1].key);
    std::filesystem::remove(path);
  }
}

TEST_CASE("keyring parsing rejects malformed lines with their position") {
  const std::string good_key(64, 'a');
  const auto expect_malformed = [&](const std::string& text) {
    CHECK(thrown_code([&] { Keyring::parse(text, "cfg"); }) == ErrorCode::kMalformed);
  };

  expect_malformed("lonely-id\n");
  expect_malformed("id " + std::string(63, 'a') + "\n");
  expect_malformed("id " + std::string(65, 'a') + "\n");
  expect_malformed("id " + std::string(62, 'a') + "zq\n");  // non-hex characters
  expect_malformed("id " + good_key + " extra\n");
  expect_malformed("id " + good_key + "\nid " + good_key + "\n");  // duplicate id

  try {
    Keyring::parse("ok " + good_key + "\nbroken\n", "cfg");
    FAIL("expected a parse failure");
  } catch (const ProtocolError& e) {
    const std::string what = e.what();
    CHECK(what.find("cfg:2") != std::string::npos);
  }
}
