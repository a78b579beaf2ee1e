// Copyright 2026 The seedalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seedalign/error.hpp"

namespace seedalign {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedLine: return "MalformedLine";
    case ErrorKind::kDanglingId: return "DanglingId";
    case ErrorKind::kEmptyGraph: return "EmptyGraph";
    case ErrorKind::kDuplicateEntity: return "DuplicateEntity";
    case ErrorKind::kOutOfRangeId: return "OutOfRangeId";
    case ErrorKind::kDimMismatch: return "DimMismatch";
    case ErrorKind::kNonFiniteValue: return "NonFiniteValue";
    case ErrorKind::kQOutOfRange: return "QOutOfRange";
    case ErrorKind::kKOutOfRange: return "KOutOfRange";
    case ErrorKind::kEmptySeeds: return "EmptySeeds";
    case ErrorKind::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorKind::kEmptyTestSet: return "EmptyTestSet";
    case ErrorKind::kVersionMismatch: return "VersionMismatch";
    case ErrorKind::kCorruptChecksum: return "CorruptChecksum";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kQOutOfRange:
    case ErrorKind::kKOutOfRange:
      return 2;
    case ErrorKind::kNonFiniteGradient:
      return 4;
    default:
      return 3;
  }
}

}  // namespace seedalign
