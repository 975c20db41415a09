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

#ifndef CAPGUARD_JS_LEXER_H_
#define CAPGUARD_JS_LEXER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace capguard::js {

// Thrown by the lexer and parser; caught at the parse_source boundary.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(uint32_t offset, const std::string& message)
      : std::runtime_error(message), offset_(offset) {}
  uint32_t offset() const { return offset_; }

 private:
  uint32_t offset_;
};

enum class TokenKind : uint8_t {
  kEof,
  kName,         // identifier or keyword; value holds the cooked name
  kPrivateName,  // #name; value holds the name without '#'
  kString,
  kNumber,
  kBigInt,
  kTemplate,  // one template chunk; tail set when it ends with a backtick
  kRegExp,
  kPunct,
};

struct Token {
  TokenKind kind = TokenKind::kEof;
  uint32_t start = 0;
  uint32_t end = 0;
  bool newline_before = false;
  bool escaped = false;  // identifier spelled with a \u escape
  bool tail = false;
  std::string value;
  std::string_view text;  // raw source slice

  bool is_punct(std::string_view p) const { return kind == TokenKind::kPunct && text == p; }
  bool is_name(std::string_view n) const {
    return kind == TokenKind::kName && !escaped && value == n;
  }
};

// On-demand tokenizer over UTF-8 bytes. Offsets are byte offsets into the
// input. The parser decides between division and regular expressions and
// asks for template continuations explicitly.
class Lexer {
 public:
  Lexer(std::string_view source, bool module_code);

  Token next();
  // Re-reads the token starting at `slash` as a regular expression literal.
  Token rescan_regexp(const Token& slash);
  // Re-reads from a `}` token as the middle or tail chunk of a template.
  Token rescan_template(const Token& rbrace);

  uint32_t position() const { return pos_; }
  void reset(uint32_t pos) { pos_ = pos; }
  std::string_view source() const { return src_; }

 private:
  // Decodes the code point at pos; invalid sequences yield U+FFFD, length 1.
  char32_t peek_cp(uint32_t pos, uint32_t* len) const;
  bool skip_space(bool* saw_newline);
  Token read_name(uint32_t start, bool private_name);
  Token read_number(uint32_t start);
  Token read_string(uint32_t start, char quote);
  Token read_template_chunk(uint32_t start, uint32_t body_start);
  Token read_punct(uint32_t start);
  char32_t read_escape_in_name();
  char32_t read_hex(int digits);
  char32_t read_code_point_escape();
  // Reads one escape after a backslash inside a string or template. Returns
  // false for escapes that are invalid in templates.
  bool read_string_escape(std::string* out, bool in_template);
  [[noreturn]] void fail(uint32_t at, const std::string& message) const;

  std::string_view src_;
  uint32_t pos_ = 0;
  bool module_ = false;
};

bool is_id_start(char32_t cp);
bool is_id_part(char32_t cp);
void append_utf8(std::string* out, char32_t cp);

}  // namespace capguard::js

#endif  // CAPGUARD_JS_LEXER_H_
