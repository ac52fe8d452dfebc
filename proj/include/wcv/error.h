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

#ifndef WCV_ERROR_H_
#define WCV_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace wcv {

enum class ErrorKind {
  kDegenerateInput,
  kShapeMismatch,
  kNumericalError,
  kMissingTensor,
  kBadShape,
  kCorruptBlob,
  kEncodingError,
  kDecodingError,
  kPreconditionViolation,
  kIoError,
  kModelMismatch,
  kBadMagic,
  kVersionUnsupported,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure surfaced by the library is an Error carrying its kind, so
// callers (and tests) can branch on the category rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& message);

}  // namespace wcv

#endif  // WCV_ERROR_H_
