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

#include "soundedit/error.h"

namespace soundedit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateSignature: return "DuplicateSignature";
    case ErrorCode::kTrivialIdentity: return "TrivialIdentity";
    case ErrorCode::kTrivialSilence: return "TrivialSilence";
    case ErrorCode::kTrivialEdit: return "TrivialEdit";
    case ErrorCode::kUndefinedTask: return "UndefinedTask";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyClip: return "EmptyClip";
    case ErrorCode::kBadWindowConfig: return "BadWindowConfig";
    case ErrorCode::kSilentSource: return "SilentSource";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kZeroEstimate: return "ZeroEstimate";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kCannotDistinguish: return "CannotDistinguish";
    case ErrorCode::kUnknownVerb: return "UnknownVerb";
    case ErrorCode::kUnknownDescriptor: return "UnknownDescriptor";
    case ErrorCode::kConflictingEdits: return "ConflictingEdits";
    case ErrorCode::kEmptyInstruction: return "EmptyInstruction";
    case ErrorCode::kUnresolvedDescriptor: return "UnresolvedDescriptor";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kBadCheckpoint: return "BadCheckpoint";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kBadMetadataRow: return "BadMetadataRow";
    case ErrorCode::kEmptyCatalog: return "EmptyCatalog";
    case ErrorCode::kTooFewEntities: return "TooFewEntities";
    case ErrorCode::kExhaustedRetries: return "ExhaustedRetries";
    case ErrorCode::kBadWav: return "BadWav";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMissingPair: return "MissingPair";
    case ErrorCode::kNetworkError: return "NetworkError";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kDisabled: return "Disabled";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
      code_(code) {}

ParseError::ParseError(ErrorCode code, const std::string& what,
                       std::size_t offset, std::size_t length)
    : Error(code, what), offset_(offset), length_(length) {}

}  // namespace soundedit
