// Copyright 2026 The wcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wcv/error.h"

namespace wcv {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDegenerateInput: return "DegenerateInput";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kNumericalError: return "NumericalError";
    case ErrorKind::kMissingTensor: return "MissingTensor";
    case ErrorKind::kBadShape: return "BadShape";
    case ErrorKind::kCorruptBlob: return "CorruptBlob";
    case ErrorKind::kEncodingError: return "EncodingError";
    case ErrorKind::kDecodingError: return "DecodingError";
    case ErrorKind::kPreconditionViolation: return "PreconditionViolation";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kModelMismatch: return "ModelMismatch";
    case ErrorKind::kBadMagic: return "BadMagic";
    case ErrorKind::kVersionUnsupported: return "VersionUnsupported";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace wcv
