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

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace privchain {

using Bytes = std::vector<uint8_t>;
using Digest32 = std::array<uint8_t, 32>;

/// Idempotent libsodium initialization; every sodium-backed entry point
/// calls this first.
void ensure_sodium();

std::string to_hex(std::span<const uint8_t> data);
std::optional<Bytes> from_hex(std::string_view hex);

Digest32 sha256(std::span<const uint8_t> data);
std::array<uint8_t, 64> sha512(std::span<const uint8_t> data);

/// Canonical encoder: fixed-width big-endian integers, u32 length prefixes.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
  void raw(std::span<const uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void bytes(std::span<const uint8_t> data) {
    u32(static_cast<uint32_t>(data.size()));
    raw(data);
  }
  void str(std::string_view s) {
    bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
  }

  const Bytes& data() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

/// Matching decoder. All reads throw CodecError on truncation; callers that
/// must not throw wrap the decode in a try block and map to a reject.
class CodecError : public std::runtime_error {
 public:
  explicit CodecError(const std::string& what) : std::runtime_error(what) {}
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u8() { return take(1)[0]; }
  uint32_t u32() {
    auto b = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | b[i];
    return v;
  }
  uint64_t u64() {
    auto b = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
    return v;
  }
  int64_t i64() { return static_cast<int64_t>(u64()); }
  Bytes bytes() {
    uint32_t n = u32();
    auto b = take(n);
    return Bytes(b.begin(), b.end());
  }
  std::string str() {
    Bytes b = bytes();
    return std::string(b.begin(), b.end());
  }
  std::span<const uint8_t> take(size_t n) {
    if (n > data_.size() - pos_) throw CodecError("truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  template <size_t N>
  std::array<uint8_t, N> fixed() {
    auto s = take(N);
    std::array<uint8_t, N> out{};
    std::memcpy(out.data(), s.data(), N);
    return out;
  }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw CodecError("trailing bytes");
  }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

inline Bytes str_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

/// Whole-file helpers; both throw ProtocolError(kIo) on failure.
Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> data);

}  // namespace privchain
