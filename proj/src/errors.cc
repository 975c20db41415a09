// Copyright 2026 The capguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capguard/errors.h"

namespace capguard {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingManifest:
      return "MissingManifest";
    case ErrorCode::kMissingLockfile:
      return "MissingLockfile";
    case ErrorCode::kUnreadableTree:
      return "UnreadableTree";
    case ErrorCode::kUnownedPath:
      return "UnownedPath";
    case ErrorCode::kMalformedPolicy:
      return "MalformedPolicy";
    case ErrorCode::kTracingMismatch:
      return "TracingMismatch";
    case ErrorCode::kEmptyUniverse:
      return "EmptyUniverse";
    case ErrorCode::kSpanMismatch:
      return "SpanMismatch";
    case ErrorCode::kIoFailure:
      return "IoFailure";
    case ErrorCode::kBadCatalog:
      return "BadCatalog";
    case ErrorCode::kBadVersion:
      return "BadVersion";
  }
  return "Unknown";
}

}  // namespace capguard
