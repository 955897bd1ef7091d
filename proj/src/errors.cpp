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
#include "privchain/errors.hpp"

namespace privchain {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDegenerateIndex: return "DegenerateIndex";
    case ErrorCode::kOutOfRegion: return "OutOfRegion";
    case ErrorCode::kBadDeviceSignature: return "BadDeviceSignature";
    case ErrorCode::kUnknownRegion: return "UnknownRegion";
    case ErrorCode::kOutOfUtmBounds: return "OutOfUtmBounds";
    case ErrorCode::kDuplicateCommodity: return "DuplicateCommodity";
    case ErrorCode::kDuplicateProduct: return "DuplicateProduct";
    case ErrorCode::kUnknownParticipant: return "UnknownParticipant";
    case ErrorCode::kUnknownCommodity: return "UnknownCommodity";
    case ErrorCode::kUnknownConstituent: return "UnknownConstituent";
    case ErrorCode::kUnknownProduct: return "UnknownProduct";
    case ErrorCode::kUnknownReqPay: return "UnknownReqPay";
    case ErrorCode::kNotOwner: return "NotOwner";
    case ErrorCode::kAlreadyTraded: return "AlreadyTraded";
    case ErrorCode::kAlreadyFinalized: return "AlreadyFinalized";
    case ErrorCode::kConstituentNotTraded: return "ConstituentNotTraded";
    case ErrorCode::kSellerMismatch: return "SellerMismatch";
    case ErrorCode::kRegionMismatch: return "RegionMismatch";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kDecryptFailure: return "DecryptFailure";
    case ErrorCode::kAuthFailure: return "AuthFailure";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace privchain
