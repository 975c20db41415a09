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

#ifndef CAPGUARD_JS_PARSER_H_
#define CAPGUARD_JS_PARSER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "capguard/js/ast.h"

namespace capguard::js {

enum class SourceType : uint8_t {
  kScript,  // CommonJS: top-level `return` allowed
  kModule,
  // Try kScript first and fall back to kModule; the tree records which one
  // succeeded.
  kDetect,
};

struct ParseFailure {
  uint32_t offset = 0;
  uint32_t line = 0;  // 1-based
  uint32_t column = 0;  // 0-based, in bytes
  std::string message;
};

// Either a tree or the reason there is none.
class ParseResult {
 public:
  static ParseResult success(std::unique_ptr<Ast> ast) {
    ParseResult r;
    r.ast_ = std::move(ast);
    return r;
  }
  static ParseResult failure(ParseFailure f) {
    ParseResult r;
    r.failure_ = std::move(f);
    return r;
  }

  bool ok() const { return ast_ != nullptr; }
  explicit operator bool() const { return ok(); }
  const Ast& ast() const { return *ast_; }
  Ast& ast() { return *ast_; }
  std::unique_ptr<Ast> take() { return std::move(ast_); }
  const ParseFailure& error() const { return *failure_; }

 private:
  std::unique_ptr<Ast> ast_;
  std::optional<ParseFailure> failure_;
};

// Parses ECMAScript 2024 source. `source` must outlive the returned tree:
// Node::raw points into it.
ParseResult parse_source(std::string_view source, SourceType type = SourceType::kDetect);

}  // namespace capguard::js

#endif  // CAPGUARD_JS_PARSER_H_
