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

#include <stdexcept>
#include <string>

namespace privchain {

/// Error classification for protocol-level rejections. Verification
/// predicates never throw — they return false (optionally with a reason);
/// exceptions mark misuse or inputs a party must refuse to process.
enum class ErrorCode {
  kInvalidParameter,
  kOutOfRange,
  kDegenerateIndex,
  kOutOfRegion,
  kBadDeviceSignature,
  kUnknownRegion,
  kOutOfUtmBounds,
  kDuplicateCommodity,
  kDuplicateProduct,
  kUnknownParticipant,
  kUnknownCommodity,
  kUnknownConstituent,
  kUnknownProduct,
  kUnknownReqPay,
  kNotOwner,
  kAlreadyTraded,
  kAlreadyFinalized,
  kConstituentNotTraded,
  kSellerMismatch,
  kRegionMismatch,
  kBadSignature,
  kDecryptFailure,
  kAuthFailure,
  kMalformed,
  kIo,
};

const char* error_code_name(ErrorCode code);

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace privchain
