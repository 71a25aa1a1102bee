// Copyright 2026 The soundedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SOUNDEDIT_ERROR_H_
#define SOUNDEDIT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace soundedit {

enum class ErrorCode {
  // core / taskspace
  kDuplicateSignature,
  kTrivialIdentity,
  kTrivialSilence,
  kTrivialEdit,
  kUndefinedTask,
  kInvalidArgument,
  // dsp / mixer / metrics
  kEmptyClip,
  kBadWindowConfig,
  kSilentSource,
  kLengthMismatch,
  kZeroReference,
  kZeroEstimate,
  kCountMismatch,
  kDimMismatch,
  // prompt
  kCannotDistinguish,
  kUnknownVerb,
  kUnknownDescriptor,
  kConflictingEdits,
  kEmptyInstruction,
  kUnresolvedDescriptor,
  // editor
  kShapeMismatch,
  kDiverged,
  kBadCheckpoint,
  // dataset / io
  kMissingFile,
  kBadMetadataRow,
  kEmptyCatalog,
  kTooFewEntities,
  kExhaustedRetries,
  kBadWav,
  kIoError,
  kMissingPair,
  // rephrase client
  kNetworkError,
  kMalformedResponse,
  kDisabled,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// identifies the failure class named in the public contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Prompt diagnostics carry the byte span of the offending text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, std::size_t offset,
             std::size_t length);
  std::size_t offset() const noexcept { return offset_; }
  std::size_t length() const noexcept { return length_; }

 private:
  std::size_t offset_;
  std::size_t length_;
};

}  // namespace soundedit

#endif  // SOUNDEDIT_ERROR_H_
