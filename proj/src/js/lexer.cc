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

#include "capguard/js/lexer.h"

#include <array>

namespace capguard::js {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_line_terminator(char32_t cp) {
  return cp == '\n' || cp == '\r' || cp == 0x2028 || cp == 0x2029;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case 0x0B:
    case 0x0C:
    case 0xA0:
    case 0x1680:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

int hex_value(char32_t c) {
  if (c >= '0' && c <= '9') return static_cast<int>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<int>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<int>(c - 'A' + 10);
  return -1;
}

// Longest first within each length class.
constexpr std::array<std::string_view, 1> kPunct4 = {">>>="};
constexpr std::array<std::string_view, 10> kPunct3 = {
    "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?="};
constexpr std::array<std::string_view, 22> kPunct2 = {
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**"};

}  // namespace

bool is_id_start(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || cp == '$' || cp == '_';
  }
  return cp != kReplacement && !is_space(cp) && !is_line_terminator(cp) && cp != 0x200C &&
         cp != 0x200D;
}

bool is_id_part(char32_t cp) {
  if (cp < 0x80) return is_id_start(cp) || is_digit(cp);
  return cp == 0x200C || cp == 0x200D || is_id_start(cp);
}

void append_utf8(std::string* out, char32_t cp) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Lexer::Lexer(std::string_view source, bool module_code) : src_(source), module_(module_code) {
  // Hashbang comment.
  if (src_.size() >= 2 && src_[0] == '#' && src_[1] == '!') {
    while (pos_ < src_.size()) {
      uint32_t len = 0;
      if (is_line_terminator(peek_cp(pos_, &len))) break;
      pos_ += len;
    }
  }
}

void Lexer::fail(uint32_t at, const std::string& message) const { throw SyntaxError(at, message); }

char32_t Lexer::peek_cp(uint32_t pos, uint32_t* len) const {
  if (pos >= src_.size()) {
    *len = 0;
    return 0;
  }
  auto byte = [&](uint32_t i) { return static_cast<unsigned char>(src_[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    *len = 1;
    return kReplacement;
  }
  if (pos + extra >= src_.size()) {
    *len = 1;
    return kReplacement;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      *len = 1;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    *len = 1;
    return kReplacement;
  }
  *len = static_cast<uint32_t>(extra + 1);
  return cp;
}

bool Lexer::skip_space(bool* saw_newline) {
  // Tracks whether only whitespace/comments precede on the current line, for
  // the `-->` HTML close comment.
  bool line_start = pos_ == 0 || *saw_newline;
  while (pos_ < src_.size()) {
    uint32_t len = 0;
    const char32_t cp = peek_cp(pos_, &len);
    if (is_line_terminator(cp)) {
      *saw_newline = true;
      line_start = true;
      pos_ += len;
    } else if (is_space(cp)) {
      pos_ += len;
    } else if (cp == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      pos_ += 2;
      while (pos_ < src_.size()) {
        const char32_t c = peek_cp(pos_, &len);
        if (is_line_terminator(c)) break;
        pos_ += len;
      }
    } else if (cp == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
      const uint32_t open = pos_;
      pos_ += 2;
      bool closed = false;
      while (pos_ < src_.size()) {
        if (src_[pos_] == '*' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
          pos_ += 2;
          closed = true;
          break;
        }
        const char32_t c = peek_cp(pos_, &len);
        if (is_line_terminator(c)) {
          *saw_newline = true;
          line_start = true;
        }
        pos_ += len;
      }
      if (!closed) fail(open, "Unterminated comment");
    } else if (!module_ && cp == '<' && src_.substr(pos_, 4) == "<!--") {
      while (pos_ < src_.size() && !is_line_terminator(peek_cp(pos_, &len))) pos_ += len;
    } else if (!module_ && line_start && cp == '-' && src_.substr(pos_, 3) == "-->") {
      while (pos_ < src_.size() && !is_line_terminator(peek_cp(pos_, &len))) pos_ += len;
    } else {
      return true;
    }
  }
  return false;
}

Token Lexer::next() {
  bool newline = false;
  Token tok;
  if (!skip_space(&newline)) {
    tok.kind = TokenKind::kEof;
    tok.start = tok.end = static_cast<uint32_t>(src_.size());
    tok.newline_before = newline;
    return tok;
  }
  const uint32_t start = pos_;
  uint32_t len = 0;
  const char32_t cp = peek_cp(pos_, &len);
  if (is_id_start(cp) || cp == '\\') {
    tok = read_name(start, false);
  } else if (cp == '#') {
    pos_ += 1;
    uint32_t l2 = 0;
    const char32_t after = peek_cp(pos_, &l2);
    if (!is_id_start(after) && after != '\\') fail(start, "Unexpected character '#'");
    tok = read_name(start, true);
  } else if (is_digit(cp) ||
             (cp == '.' && pos_ + 1 < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
    tok = read_number(start);
  } else if (cp == '"' || cp == '\'') {
    tok = read_string(start, static_cast<char>(cp));
  } else if (cp == '`') {
    pos_ += 1;
    tok = read_template_chunk(start, pos_);
  } else {
    tok = read_punct(start);
  }
  tok.newline_before = newline;
  return tok;
}

char32_t Lexer::read_hex(int digits) {
  char32_t v = 0;
  for (int i = 0; i < digits; ++i) {
    if (pos_ >= src_.size()) fail(pos_, "Bad character escape sequence");
    const int h = hex_value(static_cast<unsigned char>(src_[pos_]));
    if (h < 0) fail(pos_, "Bad character escape sequence");
    v = v * 16 + static_cast<char32_t>(h);
    ++pos_;
  }
  return v;
}

char32_t Lexer::read_code_point_escape() {
  // After "\u".
  if (pos_ < src_.size() && src_[pos_] == '{') {
    ++pos_;
    char32_t v = 0;
    int n = 0;
    while (pos_ < src_.size() && src_[pos_] != '}') {
      const int h = hex_value(static_cast<unsigned char>(src_[pos_]));
      if (h < 0) fail(pos_, "Bad character escape sequence");
      v = v * 16 + static_cast<char32_t>(h);
      if (v > 0x10FFFF) fail(pos_, "Code point out of bounds");
      ++pos_;
      ++n;
    }
    if (pos_ >= src_.size() || n == 0) fail(pos_, "Bad character escape sequence");
    ++pos_;
    return v;
  }
  return read_hex(4);
}

char32_t Lexer::read_escape_in_name() {
  const uint32_t at = pos_;
  if (pos_ + 1 >= src_.size() || src_[pos_ + 1] != 'u') {
    fail(at, "Expecting Unicode escape sequence \\uXXXX");
  }
  pos_ += 2;
  return read_code_point_escape();
}

Token Lexer::read_name(uint32_t start, bool private_name) {
  Token tok;
  tok.kind = private_name ? TokenKind::kPrivateName : TokenKind::kName;
  bool first = true;
  while (pos_ < src_.size()) {
    uint32_t len = 0;
    const char32_t cp = peek_cp(pos_, &len);
    if (cp == '\\') {
      const char32_t esc = read_escape_in_name();
      if (first ? !is_id_start(esc) : !is_id_part(esc)) fail(start, "Invalid Unicode escape");
      append_utf8(&tok.value, esc);
      tok.escaped = true;
    } else if (first ? is_id_start(cp) : is_id_part(cp)) {
      tok.value.append(src_.substr(pos_, len));
      pos_ += len;
    } else {
      break;
    }
    first = false;
  }
  tok.start = start;
  tok.end = pos_;
  tok.text = src_.substr(start, pos_ - start);
  return tok;
}

Token Lexer::read_number(uint32_t start) {
  Token tok;
  tok.kind = TokenKind::kNumber;
  auto digits = [&](auto accept) {
    bool any = false;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '_') {
        if (!any || pos_ + 1 >= src_.size() || !accept(src_[pos_ + 1])) {
          fail(pos_, "Numeric separator is not allowed here");
        }
        ++pos_;
        continue;
      }
      if (!accept(c)) break;
      any = true;
      ++pos_;
    }
    return any;
  };
  auto dec = [](char c) { return c >= '0' && c <= '9'; };
  bool can_bigint = true;
  if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
      (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X' || src_[pos_ + 1] == 'o' ||
       src_[pos_ + 1] == 'O' || src_[pos_ + 1] == 'b' || src_[pos_ + 1] == 'B')) {
    const char base = static_cast<char>(src_[pos_ + 1] | 0x20);
    pos_ += 2;
    bool ok = false;
    if (base == 'x') {
      ok = digits([](char c) { return hex_value(static_cast<unsigned char>(c)) >= 0; });
    } else if (base == 'o') {
      ok = digits([](char c) { return c >= '0' && c <= '7'; });
    } else {
      ok = digits([](char c) { return c == '0' || c == '1'; });
    }
    if (!ok) fail(start, "Expected number in radix");
  } else if (src_[pos_] == '0' && pos_ + 1 < src_.size() && dec(src_[pos_ + 1])) {
    // Legacy octal, or a decimal with a leading zero.
    ++pos_;
    while (pos_ < src_.size() && dec(src_[pos_])) ++pos_;
    can_bigint = false;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && dec(src_[pos_])) ++pos_;
    }
  } else {
    if (src_[pos_] != '.') digits(dec);
    if (pos_ < src_.size() && src_[pos_] == '.') {
      can_bigint = false;
      ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '_') fail(pos_, "Numeric separator is not allowed here");
      digits(dec);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      can_bigint = false;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (!digits(dec)) fail(start, "Invalid number");
    }
  }
  if (pos_ < src_.size() && src_[pos_] == 'n') {
    if (!can_bigint) fail(start, "Invalid BigInt syntax");
    ++pos_;
    tok.kind = TokenKind::kBigInt;
  }
  uint32_t len = 0;
  const char32_t after = peek_cp(pos_, &len);
  if (pos_ < src_.size() && (is_id_start(after) || is_digit(after) || after == '\\')) {
    fail(pos_, "Identifier directly after number");
  }
  tok.start = start;
  tok.end = pos_;
  tok.text = src_.substr(start, pos_ - start);
  return tok;
}

bool Lexer::read_string_escape(std::string* out, bool in_template) {
  // pos_ is just after the backslash.
  if (pos_ >= src_.size()) fail(pos_, "Unterminated string constant");
  uint32_t len = 0;
  const char32_t c = peek_cp(pos_, &len);
  switch (c) {
    case 'n': out->push_back('\n'); ++pos_; return true;
    case 'r': out->push_back('\r'); ++pos_; return true;
    case 't': out->push_back('\t'); ++pos_; return true;
    case 'b': out->push_back('\b'); ++pos_; return true;
    case 'v': out->push_back('\v'); ++pos_; return true;
    case 'f': out->push_back('\f'); ++pos_; return true;
    case '\r':
      ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
      return true;
    case '\n':
      ++pos_;
      return true;
    case 0x2028:
    case 0x2029:
      pos_ += len;
      return true;
    case 'x': {
      ++pos_;
      if (in_template) {
        const uint32_t save = pos_;
        if (pos_ + 2 > src_.size() || hex_value(static_cast<unsigned char>(src_[pos_])) < 0 ||
            hex_value(static_cast<unsigned char>(src_[pos_ + 1])) < 0) {
          pos_ = save;
          return false;
        }
      }
      append_utf8(out, read_hex(2));
      return true;
    }
    case 'u': {
      ++pos_;
      char32_t cp = 0;
      if (in_template) {
        try {
          cp = read_code_point_escape();
        } catch (const SyntaxError&) {
          return false;
        }
      } else {
        cp = read_code_point_escape();
      }
      // Combine a surrogate pair written as two escapes.
      if (cp >= 0xD800 && cp <= 0xDBFF && src_.substr(pos_, 2) == "\\u") {
        const uint32_t save = pos_;
        pos_ += 2;
        char32_t lo = 0;
        try {
          lo = read_code_point_escape();
        } catch (const SyntaxError&) {
          lo = 0;
        }
        if (lo >= 0xDC00 && lo <= 0xDFFF) {
          cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
        } else {
          pos_ = save;
        }
      }
      append_utf8(out, cp);
      return true;
    }
    default:
      break;
  }
  if (c >= '0' && c <= '7') {
    if (in_template) {
      if (c == '0' && !(pos_ + 1 < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        out->push_back('\0');
        ++pos_;
        return true;
      }
      return false;
    }
    // Legacy octal escape, up to three digits and at most 0377.
    int v = 0;
    int n = 0;
    while (n < 3 && pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7') {
      const int next = v * 8 + (src_[pos_] - '0');
      if (next > 0377) break;
      v = next;
      ++pos_;
      ++n;
    }
    append_utf8(out, static_cast<char32_t>(v));
    return true;
  }
  if (c == '8' || c == '9') {
    if (in_template) return false;
    out->push_back(static_cast<char>(c));
    ++pos_;
    return true;
  }
  out->append(src_.substr(pos_, len));
  pos_ += len;
  return true;
}

Token Lexer::read_string(uint32_t start, char quote) {
  Token tok;
  tok.kind = TokenKind::kString;
  ++pos_;
  for (;;) {
    if (pos_ >= src_.size()) fail(start, "Unterminated string constant");
    uint32_t len = 0;
    const char32_t c = peek_cp(pos_, &len);
    if (c == static_cast<char32_t>(quote)) {
      ++pos_;
      break;
    }
    if (c == '\\') {
      ++pos_;
      read_string_escape(&tok.value, false);
      continue;
    }
    if (c == '\n' || c == '\r') fail(start, "Unterminated string constant");
    if (c == kReplacement) {
      append_utf8(&tok.value, kReplacement);
    } else {
      tok.value.append(src_.substr(pos_, len));
    }
    pos_ += len;
  }
  tok.start = start;
  tok.end = pos_;
  tok.text = src_.substr(start, pos_ - start);
  return tok;
}

Token Lexer::read_template_chunk(uint32_t start, uint32_t body_start) {
  Token tok;
  tok.kind = TokenKind::kTemplate;
  bool cooked_valid = true;
  for (;;) {
    if (pos_ >= src_.size()) fail(start, "Unterminated template");
    const char c = src_[pos_];
    if (c == '`') {
      tok.text = src_.substr(body_start, pos_ - body_start);
      ++pos_;
      tok.tail = true;
      break;
    }
    if (c == '$' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '{') {
      tok.text = src_.substr(body_start, pos_ - body_start);
      pos_ += 2;
      break;
    }
    if (c == '\\') {
      ++pos_;
      if (!read_string_escape(&tok.value, true)) {
        cooked_valid = false;
        if (pos_ < src_.size()) ++pos_;
      }
      continue;
    }
    if (c == '\r') {
      // Template values normalize CRLF and CR to LF.
      tok.value.push_back('\n');
      ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
      continue;
    }
    uint32_t len = 0;
    const char32_t cp = peek_cp(pos_, &len);
    if (cp == kReplacement) {
      append_utf8(&tok.value, kReplacement);
    } else {
      tok.value.append(src_.substr(pos_, len));
    }
    pos_ += len;
  }
  // Cooked value is absent for invalid escapes; the parser decides whether
  // that is allowed (tagged templates only).
  tok.escaped = !cooked_valid;
  tok.start = start;
  tok.end = pos_;
  return tok;
}

Token Lexer::read_punct(uint32_t start) {
  Token tok;
  tok.kind = TokenKind::kPunct;
  tok.start = start;
  const std::string_view rest = src_.substr(pos_);
  auto take = [&](std::string_view p) {
    pos_ += static_cast<uint32_t>(p.size());
    tok.end = pos_;
    tok.text = src_.substr(start, p.size());
    return tok;
  };
  for (std::string_view p : kPunct4) {
    if (rest.starts_with(p)) return take(p);
  }
  for (std::string_view p : kPunct3) {
    if (rest.starts_with(p)) return take(p);
  }
  for (std::string_view p : kPunct2) {
    if (!rest.starts_with(p)) continue;
    // `a?.5:b` is a conditional, not optional chaining.
    if (p == "?." && rest.size() > 2 && is_digit(static_cast<unsigned char>(rest[2]))) continue;
    return take(p);
  }
  constexpr std::string_view kSingle = "{}()[];,<>+-*/%&|^!~?:=.@";
  if (!rest.empty() && kSingle.find(rest[0]) != std::string_view::npos) return take(rest.substr(0, 1));
  uint32_t len = 0;
  peek_cp(pos_, &len);
  fail(start, "Unexpected character");
}

Token Lexer::rescan_regexp(const Token& slash) {
  pos_ = slash.start + 1;
  bool in_class = false;
  for (;;) {
    if (pos_ >= src_.size()) fail(slash.start, "Unterminated regular expression");
    uint32_t len = 0;
    const char32_t c = peek_cp(pos_, &len);
    if (is_line_terminator(c)) fail(slash.start, "Unterminated regular expression");
    if (c == '\\') {
      pos_ += 1;
      if (pos_ >= src_.size()) fail(slash.start, "Unterminated regular expression");
      const char32_t e = peek_cp(pos_, &len);
      if (is_line_terminator(e)) fail(slash.start, "Unterminated regular expression");
      pos_ += len;
      continue;
    }
    if (c == '[') in_class = true;
    if (c == ']' && in_class) in_class = false;
    pos_ += len;
    if (c == '/' && !in_class) break;
  }
  // Flags.
  while (pos_ < src_.size()) {
    uint32_t len = 0;
    const char32_t c = peek_cp(pos_, &len);
    if (!is_id_part(c)) break;
    pos_ += len;
  }
  Token tok;
  tok.kind = TokenKind::kRegExp;
  tok.start = slash.start;
  tok.end = pos_;
  tok.newline_before = slash.newline_before;
  tok.text = src_.substr(slash.start, pos_ - slash.start);
  return tok;
}

Token Lexer::rescan_template(const Token& rbrace) {
  pos_ = rbrace.start + 1;
  Token tok = read_template_chunk(rbrace.start, pos_);
  tok.newline_before = rbrace.newline_before;
  return tok;
}

}  // namespace capguard::js
