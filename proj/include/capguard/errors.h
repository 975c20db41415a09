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

#ifndef CAPGUARD_ERRORS_H_
#define CAPGUARD_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace capguard {

enum class ErrorCode {
  kMissingManifest,
  kMissingLockfile,
  kUnreadableTree,
  kUnownedPath,
  kMalformedPolicy,
  kTracingMismatch,
  kEmptyUniverse,
  kSpanMismatch,
  kIoFailure,
  kBadCatalog,
  kBadVersion,
};

std::string_view error_code_name(ErrorCode code);

// Base for every error the library reports. `subject` names the offending
// path, file or location when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + subject +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code),
        subject_(std::move(subject)) {}

  ErrorCode code() const { return code_; }
  const std::string& subject() const { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace capguard

#endif  // CAPGUARD_ERRORS_H_
