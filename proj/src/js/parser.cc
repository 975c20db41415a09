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

#include "capguard/js/parser.h"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "capguard/js/lexer.h"

namespace capguard::js {
namespace {

constexpr std::array<std::string_view, 36> kReserved = {
    "break",  "case",    "catch",   "class",    "const",      "continue", "debugger",
    "default", "delete", "do",      "else",     "export",     "extends",  "finally",
    "for",    "function", "if",     "import",   "in",         "instanceof", "new",
    "return", "super",   "switch",  "this",     "throw",      "try",      "typeof",
    "var",    "void",    "while",   "with",     "null",       "true",     "false",
    "enum"};

bool is_reserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

bool is_assign_op(const Token& t) {
  if (t.kind != TokenKind::kPunct) return false;
  static constexpr std::array<std::string_view, 16> kOps = {
      "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "?\?="};
  return std::find(kOps.begin(), kOps.end(), t.text) != kOps.end();
}

// Records cover-grammar constructs that are only valid once the enclosing
// expression turns out to be a pattern: `({a = 1})` is an error, while
// `({a = 1} = x)` is fine.
struct DestructuringErrors {
  int64_t shorthand_assign = -1;
};

// A statement label, or an anonymous entry for an enclosing loop or switch.
struct Label {
  std::string name;
  char kind = 'n';  // 'l' loop, 's' switch, 'n' other
  uint32_t statement_start = 0;
};

struct FunctionContext {
  bool in_function = false;
  bool is_async = false;
  bool is_generator = false;
  bool strict = false;
  std::vector<Label> labels;
};

bool is_strict_reserved(std::string_view w) {
  static constexpr std::array<std::string_view, 9> kWords = {
      "implements", "interface", "let", "package", "private", "protected", "public", "static", "yield"};
  return std::find(kWords.begin(), kWords.end(), w) != kWords.end();
}

bool has_legacy_octal_escape(std::string_view raw) {
  for (size_t i = 0; i + 1 < raw.size(); ++i) {
    if (raw[i] != '\\') continue;
    const char c = raw[i + 1];
    if (c >= '1' && c <= '9') return true;
    if (c == '0' && i + 2 < raw.size() && raw[i + 2] >= '0' && raw[i + 2] <= '9') return true;
    ++i;
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view source, bool module_code, Ast* ast)
      : src_(source), lex_(source, module_code), ast_(ast), module_(module_code) {
    fn_.strict = module_code;
  }

  Node* parse_program() {
    next();
    Node* program = make(NodeType::kProgram, 0);
    if (module_) program->flags |= flag::kModule;
    parse_body_statements(program->list, /*top_level=*/true, /*until_brace=*/false);
    program->end = static_cast<uint32_t>(src_.size());
    return program;
  }

 private:
  // ---- token plumbing ------------------------------------------------------

  void next() {
    last_end_ = tok_.end;
    last_start_ = tok_.start;
    tok_ = lex_.next();
  }

  Token peek() {
    const uint32_t save = lex_.position();
    Token t = lex_.next();
    lex_.reset(save);
    return t;
  }

  std::pair<Token, Token> peek2() {
    const uint32_t save = lex_.position();
    Token a = lex_.next();
    Token b = lex_.next();
    lex_.reset(save);
    return {std::move(a), std::move(b)};
  }

  bool punct(std::string_view p) const { return tok_.is_punct(p); }
  bool name(std::string_view n) const { return tok_.is_name(n); }

  bool eat(std::string_view p) {
    if (!punct(p)) return false;
    next();
    return true;
  }

  bool eat_name(std::string_view n) {
    if (!name(n)) return false;
    next();
    return true;
  }

  void expect(std::string_view p) {
    if (!eat(p)) unexpected();
  }

  [[noreturn]] void unexpected() { unexpected_at(tok_.start); }

  [[noreturn]] void unexpected_at(uint32_t pos) {
    if (tok_.kind == TokenKind::kEof && pos == tok_.start) throw SyntaxError(pos, "Unexpected end of input");
    throw SyntaxError(pos, "Unexpected token");
  }

  [[noreturn]] void raise(uint32_t pos, const std::string& msg) { throw SyntaxError(pos, msg); }

  bool can_insert_semicolon() const {
    return tok_.kind == TokenKind::kEof || punct("}") || tok_.newline_before;
  }

  void semicolon() {
    if (!eat(";") && !can_insert_semicolon()) unexpected();
  }

  Node* make(NodeType type, uint32_t start) { return ast_->make(type, start); }

  Node* finish(Node* n) {
    n->end = last_end_;
    return n;
  }

  Node* copy(const Node* n) {
    Node* c = make(n->type, n->start);
    *c = *n;
    return c;
  }

  FunctionContext inner_context(bool is_async, bool is_generator) const {
    FunctionContext c;
    c.in_function = true;
    c.is_async = is_async;
    c.is_generator = is_generator;
    c.strict = fn_.strict;
    return c;
  }

  bool await_is_keyword() const { return fn_.is_async || (module_ && !fn_.in_function); }

  bool starts_expr() const {
    switch (tok_.kind) {
      case TokenKind::kName:
        return tok_.escaped || (tok_.value != "in" && tok_.value != "instanceof" &&
                                tok_.value != "of" ? true : tok_.value == "of");
      case TokenKind::kPrivateName:
      case TokenKind::kString:
      case TokenKind::kNumber:
      case TokenKind::kBigInt:
      case TokenKind::kTemplate:
      case TokenKind::kRegExp:
        return true;
      case TokenKind::kPunct: {
        static constexpr std::array<std::string_view, 14> kStarts = {
            "(", "[", "{", "+", "-", "!", "~", "++", "--", "/", "/=", "<", "@", "..."};
        return std::find(kStarts.begin(), kStarts.end(), tok_.text) != kStarts.end();
      }
      default:
        return false;
    }
  }

  // ---- identifiers ---------------------------------------------------------

  void check_identifier_name(const Token& t) {
    if (is_reserved(t.value)) raise(t.start, "Unexpected keyword '" + t.value + "'");
    if (t.value == "await" && await_is_keyword()) raise(t.start, "Cannot use 'await' as identifier here");
    if (t.value == "yield" && fn_.is_generator) raise(t.start, "Cannot use 'yield' as identifier here");
    if (fn_.strict && is_strict_reserved(t.value)) raise(t.start, "The keyword '" + t.value + "' is reserved");
  }

  void check_binding_name(const Node* id) {
    if (fn_.strict && (id->name == "eval" || id->name == "arguments")) {
      raise(id->start, "Binding " + id->name + " in strict mode");
    }
  }

  void check_lexical_names(const Node* n) {
    if (n == nullptr) return;
    switch (n->type) {
      case NodeType::kIdentifier:
        if (n->name == "let") raise(n->start, "let is disallowed as a lexically bound name");
        return;
      case NodeType::kProperty:
        check_lexical_names(n->b);
        return;
      case NodeType::kAssignmentPattern:
      case NodeType::kRestElement:
        check_lexical_names(n->a);
        return;
      case NodeType::kObjectPattern:
      case NodeType::kArrayPattern:
        for (const Node* e : n->list) check_lexical_names(e);
        return;
      default:
        return;
    }
  }

  Node* parse_ident(bool allow_reserved = false) {
    if (tok_.kind != TokenKind::kName) unexpected();
    if (!allow_reserved) check_identifier_name(tok_);
    Node* id = make(NodeType::kIdentifier, tok_.start);
    id->name = tok_.value;
    next();
    return finish(id);
  }

  Node* parse_private_ident() {
    Node* id = make(NodeType::kPrivateIdentifier, tok_.start);
    id->name = tok_.value;
    next();
    return finish(id);
  }

  Node* parse_literal_token() {
    Node* lit = make(NodeType::kLiteral, tok_.start);
    lit->raw = tok_.text;
    switch (tok_.kind) {
      case TokenKind::kString:
        if (fn_.strict && has_legacy_octal_escape(tok_.text)) raise(tok_.start, "Octal literal in strict mode");
        lit->literal_kind = LiteralKind::kString;
        lit->name = tok_.value;
        break;
      case TokenKind::kNumber:
        if (fn_.strict && tok_.text.size() > 1 && tok_.text[0] == '0' && tok_.text[1] >= '0' && tok_.text[1] <= '9') {
          raise(tok_.start, "Invalid number");
        }
        lit->literal_kind = LiteralKind::kNumber;
        break;
      case TokenKind::kBigInt:
        lit->literal_kind = LiteralKind::kBigInt;
        break;
      case TokenKind::kRegExp:
        lit->literal_kind = LiteralKind::kRegExp;
        break;
      default:
        unexpected();
    }
    next();
    return finish(lit);
  }

  Node* parse_string_literal() {
    if (tok_.kind != TokenKind::kString) unexpected();
    return parse_literal_token();
  }

  // ---- statements ----------------------------------------------------------

  void parse_body_statements(std::vector<Node*>& body, bool allow_directives, bool until_brace) {
    bool in_prologue = allow_directives;
    for (;;) {
      if (until_brace ? punct("}") : tok_.kind == TokenKind::kEof) break;
      if (tok_.kind == TokenKind::kEof) unexpected();
      Node* stmt = parse_statement(/*top_level=*/!until_brace && !fn_.in_function);
      if (in_prologue) {
        if (stmt->is(NodeType::kExpressionStatement) && stmt->a->is(NodeType::kLiteral) &&
            stmt->a->literal_kind == LiteralKind::kString && !stmt->a->has(flag::kParenthesized)) {
          stmt->flags |= flag::kDirective;
          stmt->name = std::string(src_.substr(stmt->a->start + 1, stmt->a->end - stmt->a->start - 2));
          if (stmt->name == "use strict") fn_.strict = true;
        } else {
          in_prologue = false;
        }
      }
      body.push_back(stmt);
    }
  }

  bool is_let_declaration() {
    if (!name("let")) return false;
    const Token t = peek();
    if (t.is_punct("[") || t.is_punct("{")) return true;
    if (t.kind == TokenKind::kName) {
      return t.escaped || (t.value != "in" && t.value != "instanceof");
    }
    return false;
  }

  bool is_async_function() {
    if (!name("async")) return false;
    const Token t = peek();
    return t.is_name("function") && !t.newline_before;
  }

  Node* parse_statement(bool top_level) {
    if (tok_.kind == TokenKind::kPunct) {
      if (punct("{")) return parse_block();
      if (punct(";")) {
        Node* n = make(NodeType::kEmptyStatement, tok_.start);
        next();
        return finish(n);
      }
    }
    if (tok_.kind == TokenKind::kName && !tok_.escaped) {
      const std::string& kw = tok_.value;
      if (kw == "var" || kw == "const") return parse_var_statement(kw == "var" ? "var" : "const");
      if (kw == "let" && is_let_declaration()) return parse_var_statement("let");
      if (kw == "function") return parse_function(make(NodeType::kFunctionDeclaration, tok_.start), true, false, false);
      if (kw == "async" && is_async_function()) {
        Node* n = make(NodeType::kFunctionDeclaration, tok_.start);
        next();
        return parse_function(n, true, true, false);
      }
      if (kw == "class") return parse_class(true, false);
      if (kw == "if") return parse_if();
      if (kw == "for") return parse_for();
      if (kw == "while") return parse_while();
      if (kw == "do") return parse_do_while();
      if (kw == "return") return parse_return();
      if (kw == "break" || kw == "continue") return parse_break_continue(kw == "break");
      if (kw == "throw") return parse_throw();
      if (kw == "try") return parse_try();
      if (kw == "switch") return parse_switch();
      if (kw == "with") return parse_with();
      if (kw == "debugger") {
        Node* n = make(NodeType::kDebuggerStatement, tok_.start);
        next();
        semicolon();
        return finish(n);
      }
      if (kw == "import") {
        const Token t = peek();
        if (!t.is_punct("(") && !t.is_punct(".")) {
          if (!module_ || !top_level) raise(tok_.start, "'import' and 'export' may only appear at the top level of a module");
          return parse_import();
        }
      }
      if (kw == "export") {
        if (!module_ || !top_level) raise(tok_.start, "'import' and 'export' may only appear at the top level of a module");
        return parse_export();
      }
    }
    const uint32_t start = tok_.start;
    const bool maybe_label = tok_.kind == TokenKind::kName;
    Node* expr = parse_expression(false, nullptr);
    if (maybe_label && expr->is(NodeType::kIdentifier) && !expr->has(flag::kParenthesized) && punct(":")) {
      next();
      for (const Label& l : fn_.labels) {
        if (l.name == expr->name) raise(expr->start, "Label '" + expr->name + "' is already declared");
      }
      const char kind = name("for") || name("while") || name("do") ? 'l' : name("switch") ? 's' : 'n';
      for (auto it = fn_.labels.rbegin(); it != fn_.labels.rend() && it->statement_start == start; ++it) {
        it->statement_start = tok_.start;
        it->kind = kind;
      }
      fn_.labels.push_back(Label{expr->name, kind, tok_.start});
      Node* n = make(NodeType::kLabeledStatement, start);
      n->a = expr;
      n->b = parse_statement(false);
      fn_.labels.pop_back();
      return finish(n);
    }
    Node* n = make(NodeType::kExpressionStatement, start);
    n->a = expr;
    semicolon();
    return finish(n);
  }

  Node* parse_loop_body() {
    fn_.labels.push_back(Label{"", 'l', 0});
    Node* body = parse_statement(false);
    fn_.labels.pop_back();
    return body;
  }

  Node* parse_block() {
    Node* n = make(NodeType::kBlockStatement, tok_.start);
    expect("{");
    while (!punct("}")) {
      if (tok_.kind == TokenKind::kEof) unexpected();
      n->list.push_back(parse_statement(false));
    }
    next();
    return finish(n);
  }

  Node* parse_var_statement(std::string_view kind) {
    Node* n = make(NodeType::kVariableDeclaration, tok_.start);
    next();
    parse_var_declarators(n, kind, false);
    semicolon();
    return finish(n);
  }

  void parse_var_declarators(Node* decl, std::string_view kind, bool no_in) {
    decl->op = kind;
    for (;;) {
      Node* d = make(NodeType::kVariableDeclarator, tok_.start);
      d->a = parse_binding_target();
      if (kind != "var") check_lexical_names(d->a);
      if (eat("=")) d->b = parse_maybe_assign(no_in, nullptr);
      decl->list.push_back(finish(d));
      if (!eat(",")) break;
    }
  }

  Node* parse_if() {
    Node* n = make(NodeType::kIfStatement, tok_.start);
    next();
    n->a = parse_paren_expression();
    n->b = parse_statement(false);
    if (eat_name("else")) n->c = parse_statement(false);
    return finish(n);
  }

  Node* parse_paren_expression() {
    expect("(");
    Node* e = parse_expression(false, nullptr);
    expect(")");
    return e;
  }

  Node* parse_while() {
    Node* n = make(NodeType::kWhileStatement, tok_.start);
    next();
    n->a = parse_paren_expression();
    n->b = parse_loop_body();
    return finish(n);
  }

  Node* parse_do_while() {
    Node* n = make(NodeType::kDoWhileStatement, tok_.start);
    next();
    n->a = parse_loop_body();
    if (!eat_name("while")) unexpected();
    n->b = parse_paren_expression();
    eat(";");
    return finish(n);
  }

  Node* parse_return() {
    if (!fn_.in_function && module_) raise(tok_.start, "'return' outside of function");
    Node* n = make(NodeType::kReturnStatement, tok_.start);
    next();
    if (!eat(";") && !can_insert_semicolon()) {
      n->a = parse_expression(false, nullptr);
      semicolon();
    }
    return finish(n);
  }

  Node* parse_break_continue(bool is_break) {
    Node* n = make(is_break ? NodeType::kBreakStatement : NodeType::kContinueStatement, tok_.start);
    next();
    if (!eat(";") && !can_insert_semicolon()) {
      if (tok_.kind != TokenKind::kName) unexpected();
      n->a = parse_ident();
      semicolon();
    }
    bool found = false;
    for (const Label& l : fn_.labels) {
      if (n->a == nullptr ? (l.kind == 'l' || (is_break && l.kind == 's'))
                          : (l.name == n->a->name && (is_break || l.kind == 'l'))) {
        found = true;
        break;
      }
    }
    if (!found) raise(n->start, std::string("Unsyntactic ") + (is_break ? "break" : "continue"));
    return finish(n);
  }

  Node* parse_throw() {
    Node* n = make(NodeType::kThrowStatement, tok_.start);
    next();
    if (tok_.newline_before) raise(last_end_, "Illegal newline after throw");
    n->a = parse_expression(false, nullptr);
    semicolon();
    return finish(n);
  }

  Node* parse_try() {
    Node* n = make(NodeType::kTryStatement, tok_.start);
    next();
    n->a = parse_block();
    if (name("catch")) {
      Node* c = make(NodeType::kCatchClause, tok_.start);
      next();
      if (eat("(")) {
        c->a = parse_binding_target();
        expect(")");
      }
      c->b = parse_block();
      n->b = finish(c);
    }
    if (eat_name("finally")) n->c = parse_block();
    if (n->b == nullptr && n->c == nullptr) raise(n->start, "Missing catch or finally clause");
    return finish(n);
  }

  Node* parse_switch() {
    Node* n = make(NodeType::kSwitchStatement, tok_.start);
    next();
    n->a = parse_paren_expression();
    expect("{");
    fn_.labels.push_back(Label{"", 's', 0});
    Node* current = nullptr;
    bool saw_default = false;
    while (!punct("}")) {
      if (name("case") || name("default")) {
        const bool is_case = name("case");
        if (current != nullptr) finish(current);
        current = make(NodeType::kSwitchCase, tok_.start);
        n->list.push_back(current);
        next();
        if (is_case) {
          current->a = parse_expression(false, nullptr);
        } else {
          if (saw_default) raise(last_start_, "Multiple default clauses");
          saw_default = true;
        }
        expect(":");
      } else {
        if (current == nullptr) unexpected();
        current->list.push_back(parse_statement(false));
      }
    }
    next();
    fn_.labels.pop_back();
    if (current != nullptr) {
      current->end = last_start_;
      // The case ends with its last consequent or its colon.
      current->end = current->list.empty() ? current->end : current->list.back()->end;
    }
    return finish(n);
  }

  Node* parse_with() {
    if (fn_.strict) raise(tok_.start, "'with' in strict mode");
    Node* n = make(NodeType::kWithStatement, tok_.start);
    next();
    n->a = parse_paren_expression();
    n->b = parse_statement(false);
    return finish(n);
  }

  Node* parse_for() {
    const uint32_t start = tok_.start;
    next();
    bool is_await = false;
    if (name("await") && await_is_keyword()) {
      is_await = true;
      next();
    }
    expect("(");
    if (punct(";")) {
      if (is_await) unexpected();
      return parse_for_rest(start, nullptr);
    }
    const bool is_let = is_let_declaration();
    if (name("var") || name("const") || is_let) {
      Node* decl = make(NodeType::kVariableDeclaration, tok_.start);
      const std::string kind = tok_.value;
      next();
      parse_var_declarators(decl, kind == "var" ? "var" : kind == "let" ? "let" : "const", true);
      finish(decl);
      if ((name("in") || name("of")) && decl->list.size() == 1) {
        return parse_for_in_of(start, decl, is_await);
      }
      if (is_await) unexpected();
      return parse_for_rest(start, decl);
    }
    DestructuringErrors refs;
    const bool starts_with_let = name("let");
    Node* init = parse_expression(true, &refs);
    if (name("in") || name("of")) {
      if (starts_with_let && name("of")) raise(init->start, "for-of loop variable may not start with 'let'");
      init = to_assignable(init, false);
      return parse_for_in_of(start, init, is_await);
    }
    check_expression_errors(refs);
    if (is_await) unexpected();
    return parse_for_rest(start, init);
  }

  Node* parse_for_rest(uint32_t start, Node* init) {
    Node* n = make(NodeType::kForStatement, start);
    n->a = init;
    expect(";");
    if (!punct(";")) n->b = parse_expression(false, nullptr);
    expect(";");
    if (!punct(")")) n->c = parse_expression(false, nullptr);
    expect(")");
    n->d = parse_loop_body();
    return finish(n);
  }

  Node* parse_for_in_of(uint32_t start, Node* left, bool is_await) {
    const bool is_in = name("in");
    if (is_in && is_await) unexpected();
    Node* n = make(is_in ? NodeType::kForInStatement : NodeType::kForOfStatement, start);
    if (is_await) n->flags |= flag::kAwait;
    next();
    n->a = left;
    n->b = is_in ? parse_expression(false, nullptr) : parse_maybe_assign(false, nullptr);
    expect(")");
    n->c = parse_loop_body();
    return finish(n);
  }

  // ---- modules -------------------------------------------------------------

  Node* parse_module_export_name() {
    if (tok_.kind == TokenKind::kString) return parse_literal_token();
    return parse_ident(true);
  }

  void parse_with_clause(Node* n) {
    if (!(name("with") || (name("assert") && !tok_.newline_before))) return;
    next();
    expect("{");
    bool first = true;
    while (!eat("}")) {
      if (!first) {
        expect(",");
        if (eat("}")) break;
      }
      first = false;
      Node* attr = make(NodeType::kImportAttribute, tok_.start);
      attr->a = tok_.kind == TokenKind::kString ? parse_literal_token() : parse_ident(true);
      expect(":");
      attr->b = parse_string_literal();
      n->list2.push_back(finish(attr));
    }
  }

  Node* parse_import() {
    Node* n = make(NodeType::kImportDeclaration, tok_.start);
    next();
    if (tok_.kind == TokenKind::kString) {
      n->a = parse_literal_token();
    } else {
      if (tok_.kind == TokenKind::kName) {
        Node* s = make(NodeType::kImportDefaultSpecifier, tok_.start);
        s->b = parse_ident();
        n->list.push_back(finish(s));
        if (!eat(",")) goto from;
      }
      if (punct("*")) {
        Node* s = make(NodeType::kImportNamespaceSpecifier, tok_.start);
        next();
        if (!eat_name("as")) unexpected();
        s->b = parse_ident();
        n->list.push_back(finish(s));
      } else {
        expect("{");
        bool first = true;
        while (!eat("}")) {
          if (!first) {
            expect(",");
            if (eat("}")) break;
          }
          first = false;
          Node* s = make(NodeType::kImportSpecifier, tok_.start);
          const Token imported_tok = tok_;
          s->a = parse_module_export_name();
          if (eat_name("as")) {
            s->b = parse_ident();
          } else {
            if (!s->a->is(NodeType::kIdentifier)) unexpected();
            check_identifier_name(imported_tok);
            s->b = s->a;
          }
          n->list.push_back(finish(s));
        }
      }
    from:
      if (!eat_name("from")) unexpected();
      n->a = parse_string_literal();
    }
    parse_with_clause(n);
    semicolon();
    return finish(n);
  }

  Node* parse_export() {
    const uint32_t start = tok_.start;
    next();
    if (eat("*")) {
      Node* n = make(NodeType::kExportAllDeclaration, start);
      if (eat_name("as")) n->a = parse_module_export_name();
      if (!eat_name("from")) unexpected();
      n->b = parse_string_literal();
      parse_with_clause(n);
      semicolon();
      return finish(n);
    }
    if (eat_name("default")) {
      Node* n = make(NodeType::kExportDefaultDeclaration, start);
      if (name("function")) {
        n->a = parse_function(make(NodeType::kFunctionDeclaration, tok_.start), true, false, true);
      } else if (is_async_function()) {
        Node* f = make(NodeType::kFunctionDeclaration, tok_.start);
        next();
        n->a = parse_function(f, true, true, true);
      } else if (name("class")) {
        n->a = parse_class(true, true);
      } else {
        n->a = parse_maybe_assign(false, nullptr);
        semicolon();
      }
      return finish(n);
    }
    Node* n = make(NodeType::kExportNamedDeclaration, start);
    if (name("var") || name("const") || (name("let") && is_let_declaration())) {
      const std::string kind = tok_.value;
      n->a = parse_var_statement(kind == "var" ? "var" : kind == "let" ? "let" : "const");
    } else if (name("function")) {
      n->a = parse_function(make(NodeType::kFunctionDeclaration, tok_.start), true, false, false);
    } else if (is_async_function()) {
      Node* f = make(NodeType::kFunctionDeclaration, tok_.start);
      next();
      n->a = parse_function(f, true, true, false);
    } else if (name("class")) {
      n->a = parse_class(true, false);
    } else {
      expect("{");
      bool first = true;
      while (!eat("}")) {
        if (!first) {
          expect(",");
          if (eat("}")) break;
        }
        first = false;
        Node* s = make(NodeType::kExportSpecifier, tok_.start);
        s->a = parse_module_export_name();
        s->b = eat_name("as") ? parse_module_export_name() : s->a;
        n->list.push_back(finish(s));
      }
      if (eat_name("from")) {
        n->b = parse_string_literal();
        parse_with_clause(n);
      }
      semicolon();
    }
    return finish(n);
  }

  // ---- functions and classes ----------------------------------------------

  // `n` starts at `function` (or `async`, already consumed).
  Node* parse_function(Node* n, bool is_statement, bool is_async, bool id_optional) {
    if (!eat_name("function")) unexpected();
    if (is_async) n->flags |= flag::kAsync;
    bool is_generator = false;
    if (eat("*")) {
      is_generator = true;
      n->flags |= flag::kGenerator;
    }
    if (is_statement) {
      if (tok_.kind == TokenKind::kName) {
        n->a = parse_ident();
      } else if (!id_optional) {
        unexpected();
      }
    }
    const FunctionContext saved = fn_;
    fn_ = inner_context(is_async, is_generator);
    if (!is_statement && tok_.kind == TokenKind::kName) n->a = parse_ident();
    parse_params(n);
    n->b = parse_function_body();
    fn_ = saved;
    return finish(n);
  }

  void parse_params(Node* fn) {
    expect("(");
    bool first = true;
    while (!eat(")")) {
      if (!first) {
        expect(",");
        if (eat(")")) break;
      }
      first = false;
      if (punct("...")) {
        Node* rest = make(NodeType::kRestElement, tok_.start);
        next();
        rest->a = parse_binding_target();
        fn->list.push_back(finish(rest));
        if (!punct(")")) raise(tok_.start, "Comma is not permitted after the rest element");
        continue;
      }
      fn->list.push_back(parse_binding_element());
    }
  }

  Node* parse_function_body() {
    Node* body = make(NodeType::kBlockStatement, tok_.start);
    expect("{");
    parse_body_statements(body->list, true, true);
    next();
    return finish(body);
  }

  // Method value: a FunctionExpression starting at the parameter list.
  Node* parse_method(bool is_generator, bool is_async) {
    Node* n = make(NodeType::kFunctionExpression, tok_.start);
    if (is_async) n->flags |= flag::kAsync;
    if (is_generator) n->flags |= flag::kGenerator;
    const FunctionContext saved = fn_;
    fn_ = inner_context(is_async, is_generator);
    parse_params(n);
    n->b = parse_function_body();
    fn_ = saved;
    return finish(n);
  }

  Node* parse_arrow(uint32_t start, std::vector<Node*> params, bool is_async, bool no_in) {
    Node* n = make(NodeType::kArrowFunctionExpression, start);
    if (is_async) n->flags |= flag::kAsync;
    n->list = std::move(params);
    const FunctionContext saved = fn_;
    fn_ = inner_context(is_async, false);
    if (punct("{")) {
      n->b = parse_function_body();
    } else {
      n->flags |= flag::kExpressionBody;
      n->b = parse_maybe_assign(no_in, nullptr);
    }
    fn_ = saved;
    return finish(n);
  }

  Node* parse_class(bool is_statement, bool id_optional) {
    Node* n = make(is_statement ? NodeType::kClassDeclaration : NodeType::kClassExpression, tok_.start);
    next();
    const bool saved_strict = fn_.strict;
    fn_.strict = true;
    if (tok_.kind == TokenKind::kName && !name("extends") && !punct("{")) {
      n->a = parse_ident();
    } else if (is_statement && !id_optional) {
      unexpected();
    }
    if (eat_name("extends")) n->b = parse_expr_subscripts(nullptr, false);
    Node* body = make(NodeType::kClassBody, tok_.start);
    expect("{");
    bool saw_constructor = false;
    while (!eat("}")) {
      if (eat(";")) continue;
      if (tok_.kind == TokenKind::kEof) unexpected();
      Node* element = parse_class_element();
      if (element->is(NodeType::kMethodDefinition) && element->op == "constructor") {
        if (saw_constructor) raise(element->a->start, "Duplicate constructor in the same class");
        saw_constructor = true;
      }
      body->list.push_back(element);
    }
    fn_.strict = saved_strict;
    n->c = finish(body);
    return finish(n);
  }

  static bool ends_modifier(const Token& t) {
    return t.is_punct("(") || t.is_punct("=") || t.is_punct(";") || t.is_punct("}") ||
           t.kind == TokenKind::kEof;
  }

  Node* parse_class_key(Node* member) {
    if (tok_.kind == TokenKind::kPrivateName) return parse_private_ident();
    return parse_property_name(member);
  }

  Node* parse_class_element() {
    const uint32_t start = tok_.start;
    bool is_static = false;
    if (name("static")) {
      const Token t = peek();
      if (t.is_punct("{")) {
        next();
        Node* block = make(NodeType::kStaticBlock, start);
        next();
        const FunctionContext saved = fn_;
        fn_ = inner_context(false, false);
        while (!punct("}")) {
          if (tok_.kind == TokenKind::kEof) unexpected();
          block->list.push_back(parse_statement(false));
        }
        fn_ = saved;
        next();
        return finish(block);
      }
      if (!ends_modifier(t)) {
        is_static = true;
        next();
      }
    }
    bool is_async = false;
    bool is_generator = false;
    std::string_view kind = "method";
    if (name("async")) {
      const Token t = peek();
      if (!ends_modifier(t) && !t.newline_before && !t.is_punct(",")) {
        is_async = true;
        next();
      }
    }
    if (eat("*")) is_generator = true;
    if (!is_async && !is_generator && (name("get") || name("set"))) {
      const Token t = peek();
      if (!ends_modifier(t)) {
        kind = tok_.value == "get" ? "get" : "set";
        next();
      }
    }
    Node* member = make(NodeType::kMethodDefinition, start);
    member->a = parse_class_key(member);
    if (is_static) member->flags |= flag::kStatic;
    if (punct("(") || is_async || is_generator || kind != "method") {
      const Node* key = member->a;
      const bool named_constructor =
          !member->has(flag::kComputed) &&
          ((key->is(NodeType::kIdentifier) && key->name == "constructor") ||
           (key->is(NodeType::kLiteral) && key->literal_kind == LiteralKind::kString &&
            key->name == "constructor"));
      if (named_constructor && !is_static && kind == "method") kind = "constructor";
      member->op = kind;
      member->b = parse_method(is_generator, is_async);
      check_accessor_params(kind, member->b);
      return finish(member);
    }
    member->type = NodeType::kPropertyDefinition;
    if (eat("=")) {
      const FunctionContext saved = fn_;
      fn_ = inner_context(false, false);
      member->b = parse_maybe_assign(false, nullptr);
      fn_ = saved;
    }
    semicolon();
    return finish(member);
  }

  void check_accessor_params(std::string_view kind, const Node* fn) {
    if (kind == "get" && !fn->list.empty()) raise(fn->start, "getter should have no params");
    if (kind == "set") {
      if (fn->list.size() != 1) raise(fn->start, "setter should have exactly one param");
      if (fn->list[0]->is(NodeType::kRestElement)) raise(fn->list[0]->start, "Setter cannot use rest params");
    }
  }

  // ---- patterns ------------------------------------------------------------

  Node* parse_binding_target() {
    if (punct("[")) {
      Node* n = make(NodeType::kArrayPattern, tok_.start);
      next();
      bool first = true;
      while (!eat("]")) {
        if (!first) {
          expect(",");
          if (eat("]")) break;
        }
        first = false;
        if (punct(",")) {
          n->list.push_back(nullptr);
          continue;
        }
        if (punct("...")) {
          Node* rest = make(NodeType::kRestElement, tok_.start);
          next();
          rest->a = parse_binding_target();
          n->list.push_back(finish(rest));
          if (!punct("]")) raise(tok_.start, "Comma is not permitted after the rest element");
          continue;
        }
        n->list.push_back(parse_binding_element());
      }
      return finish(n);
    }
    if (punct("{")) return parse_object(/*is_pattern=*/true, nullptr);
    Node* id = parse_ident();
    check_binding_name(id);
    return id;
  }

  Node* parse_binding_element() {
    const uint32_t start = tok_.start;
    Node* target = parse_binding_target();
    if (!eat("=")) return target;
    Node* n = make(NodeType::kAssignmentPattern, start);
    n->a = target;
    n->b = parse_maybe_assign(false, nullptr);
    return finish(n);
  }

  Node* to_assignable(Node* n, bool is_binding) {
    switch (n->type) {
      case NodeType::kIdentifier:
        if (fn_.strict && (n->name == "eval" || n->name == "arguments")) {
          raise(n->start, "Assigning to " + n->name + " in strict mode");
        }
        return n;
      case NodeType::kMemberExpression:
        if (is_binding) raise(n->start, "Binding member expression");
        return n;
      case NodeType::kObjectPattern:
      case NodeType::kArrayPattern:
      case NodeType::kAssignmentPattern:
      case NodeType::kRestElement:
        return n;
      case NodeType::kObjectExpression:
        if (n->has(flag::kParenthesized)) raise(n->start, "Parenthesized pattern");
        n->type = NodeType::kObjectPattern;
        for (size_t i = 0; i < n->list.size(); ++i) {
          Node* p = n->list[i];
          if (p->is(NodeType::kSpreadElement)) {
            p->type = NodeType::kRestElement;
            p->a = to_assignable(p->a, is_binding);
            if (i + 1 != n->list.size()) raise(p->start, "Comma is not permitted after the rest element");
          } else {
            if (p->op != "init" || p->has(flag::kMethod)) raise(p->a->start, "Object pattern can't contain getter or setter");
            p->b = to_assignable(p->b, is_binding);
          }
        }
        return n;
      case NodeType::kArrayExpression:
        if (n->has(flag::kParenthesized)) raise(n->start, "Parenthesized pattern");
        n->type = NodeType::kArrayPattern;
        for (size_t i = 0; i < n->list.size(); ++i) {
          Node* e = n->list[i];
          if (e == nullptr) continue;
          if (e->is(NodeType::kSpreadElement)) {
            e->type = NodeType::kRestElement;
            e->a = to_assignable(e->a, is_binding);
            if (i + 1 != n->list.size()) raise(e->start, "Comma is not permitted after the rest element");
          } else {
            n->list[i] = to_assignable(e, is_binding);
          }
        }
        return n;
      case NodeType::kSpreadElement:
        n->type = NodeType::kRestElement;
        n->a = to_assignable(n->a, is_binding);
        return n;
      case NodeType::kAssignmentExpression:
        if (n->op != "=") raise(n->a->end, "Only '=' operator can be used for specifying default value.");
        n->type = NodeType::kAssignmentPattern;
        n->op = {};
        return n;
      default:
        raise(n->start, "Assigning to rvalue");
    }
  }

  std::vector<Node*> to_assignable_list(std::vector<Node*> items, bool is_binding) {
    for (size_t i = 0; i < items.size(); ++i) {
      if (items[i] == nullptr) raise(last_end_, "Unexpected hole");
      items[i] = to_assignable(items[i], is_binding);
      if (items[i]->is(NodeType::kRestElement) && i + 1 != items.size()) {
        raise(items[i]->start, "Comma is not permitted after the rest element");
      }
    }
    return items;
  }

  void check_expression_errors(const DestructuringErrors& refs) {
    if (refs.shorthand_assign >= 0) {
      raise(static_cast<uint32_t>(refs.shorthand_assign), "Shorthand property assignments are valid only in destructuring patterns");
    }
  }

  static bool is_simple_target(const Node* n) {
    return n->is(NodeType::kIdentifier) || n->is(NodeType::kMemberExpression);
  }

  // ---- expressions ---------------------------------------------------------

  Node* parse_expression(bool no_in, DestructuringErrors* refs) {
    const uint32_t start = tok_.start;
    Node* first = parse_maybe_assign(no_in, refs);
    if (!punct(",")) return first;
    Node* seq = make(NodeType::kSequenceExpression, start);
    seq->list.push_back(first);
    while (eat(",")) seq->list.push_back(parse_maybe_assign(no_in, refs));
    return finish(seq);
  }

  Node* parse_maybe_assign(bool no_in, DestructuringErrors* refs) {
    if (fn_.is_generator && name("yield")) return parse_yield(no_in);
    DestructuringErrors own;
    const bool owns = refs == nullptr;
    if (owns) refs = &own;
    const int64_t saved_shorthand = refs->shorthand_assign;
    if (!owns) refs->shorthand_assign = -1;

    const uint32_t start = tok_.start;
    potential_arrow_at_ = start;
    Node* left = parse_maybe_conditional(no_in, refs);
    if (is_assign_op(tok_)) {
      const std::string_view op = tok_.text;
      if (op == "=") {
        left = to_assignable(left, false);
      } else if (!is_simple_target(left) || left->has(flag::kParenthesized & 0)) {
        if (!is_simple_target(left)) raise(left->start, "Assigning to rvalue");
      }
      if (refs->shorthand_assign >= static_cast<int64_t>(left->start)) refs->shorthand_assign = -1;
      if (op != "=" && refs->shorthand_assign >= 0) check_expression_errors(*refs);
      Node* n = make(NodeType::kAssignmentExpression, start);
      n->op = op;
      n->a = left;
      next();
      n->b = parse_maybe_assign(no_in, nullptr);
      if (!owns && saved_shorthand >= 0) refs->shorthand_assign = saved_shorthand;
      return finish(n);
    }
    if (owns) check_expression_errors(*refs);
    if (!owns && saved_shorthand >= 0 && refs->shorthand_assign < 0) refs->shorthand_assign = saved_shorthand;
    return left;
  }

  Node* parse_yield(bool no_in) {
    Node* n = make(NodeType::kYieldExpression, tok_.start);
    next();
    if (punct(";") || can_insert_semicolon() || (!punct("*") && !starts_expr())) return finish(n);
    if (eat("*")) n->flags |= flag::kDelegate;
    n->a = parse_maybe_assign(no_in, nullptr);
    return finish(n);
  }

  Node* parse_maybe_conditional(bool no_in, DestructuringErrors* refs) {
    const uint32_t start = tok_.start;
    Node* expr = parse_expr_ops(no_in, refs);
    if (refs != nullptr && refs->shorthand_assign >= 0) return expr;
    if (!punct("?")) return expr;
    next();
    Node* n = make(NodeType::kConditionalExpression, start);
    n->a = expr;
    n->b = parse_maybe_assign(false, nullptr);
    expect(":");
    n->c = parse_maybe_assign(no_in, nullptr);
    return finish(n);
  }

  int binary_precedence(bool no_in) const {
    if (tok_.kind == TokenKind::kName) {
      if (tok_.escaped) return -1;
      if (tok_.value == "instanceof") return 7;
      if (tok_.value == "in") return no_in ? -1 : 7;
      return -1;
    }
    if (tok_.kind != TokenKind::kPunct) return -1;
    const std::string_view t = tok_.text;
    if (t == "??" || t == "||") return 1;
    if (t == "&&") return 2;
    if (t == "|") return 3;
    if (t == "^") return 4;
    if (t == "&") return 5;
    if (t == "==" || t == "!=" || t == "===" || t == "!==") return 6;
    if (t == "<" || t == ">" || t == "<=" || t == ">=") return 7;
    if (t == "<<" || t == ">>" || t == ">>>") return 8;
    if (t == "+" || t == "-") return 9;
    if (t == "*" || t == "/" || t == "%") return 10;
    if (t == "**") return 11;
    return -1;
  }

  Node* parse_expr_ops(bool no_in, DestructuringErrors* refs) {
    const uint32_t start = tok_.start;
    Node* expr = nullptr;
    if (tok_.kind == TokenKind::kPrivateName) {
      expr = parse_private_ident();
      if (!name("in")) unexpected();
    } else {
      expr = parse_maybe_unary(refs, false);
      if (refs != nullptr && refs->shorthand_assign >= 0) return expr;
      if (expr->start == start && expr->is(NodeType::kArrowFunctionExpression) &&
          !expr->has(flag::kParenthesized)) {
        return expr;
      }
    }
    return parse_expr_op(expr, start, -1, no_in);
  }

  Node* parse_expr_op(Node* left, uint32_t left_start, int min_prec, bool no_in) {
    for (;;) {
      const int prec = binary_precedence(no_in);
      if (prec <= min_prec) return left;
      const std::string_view op = tok_.kind == TokenKind::kName ? std::string_view(tok_.value == "in" ? "in" : "instanceof") : tok_.text;
      const bool logical = op == "&&" || op == "||" || op == "??";
      if (op == "**" && (left->is(NodeType::kUnaryExpression) || left->is(NodeType::kAwaitExpression)) &&
          !left->has(flag::kParenthesized)) {
        raise(tok_.start, "Unary operator used immediately before exponentiation expression");
      }
      next();
      const uint32_t right_start = tok_.start;
      Node* right_operand = nullptr;
      if (tok_.kind == TokenKind::kPrivateName) {
        right_operand = parse_private_ident();
        if (!name("in")) unexpected();
      } else {
        right_operand = parse_maybe_unary(nullptr, false);
      }
      Node* right = parse_expr_op(right_operand, right_start, op == "**" ? prec - 1 : prec, no_in);
      Node* n = make(logical ? NodeType::kLogicalExpression : NodeType::kBinaryExpression, left_start);
      n->op = op;
      n->a = left;
      n->b = right;
      if (logical && (mixes_coalesce(op, left) || mixes_coalesce(op, right))) {
        raise(right_start, "Logical expressions and coalesce expressions cannot be mixed. Wrap either by parentheses");
      }
      left = finish(n);
    }
  }

  static bool mixes_coalesce(std::string_view op, const Node* operand) {
    if (!operand->is(NodeType::kLogicalExpression) || operand->has(flag::kParenthesized)) return false;
    return (op == "??") != (operand->op == "??");
  }

  Node* parse_maybe_unary(DestructuringErrors* refs, bool saw_unary) {
    const uint32_t start = tok_.start;
    if (name("await") && await_is_keyword()) {
      Node* n = make(NodeType::kAwaitExpression, start);
      next();
      n->a = parse_maybe_unary(nullptr, true);
      return finish(n);
    }
    if (punct("++") || punct("--")) {
      Node* n = make(NodeType::kUpdateExpression, start);
      n->op = tok_.text;
      n->flags |= flag::kPrefix;
      next();
      n->a = parse_maybe_unary(nullptr, true);
      if (!is_simple_target(n->a)) raise(n->a->start, "Assigning to rvalue");
      return finish(n);
    }
    const bool unary_punct = punct("!") || punct("~") || punct("+") || punct("-");
    const bool unary_word = name("typeof") || name("void") || name("delete");
    if (unary_punct || unary_word) {
      Node* n = make(NodeType::kUnaryExpression, start);
      n->op = unary_punct ? tok_.text : std::string_view(tok_.value == "typeof" ? "typeof" : tok_.value == "void" ? "void" : "delete");
      n->flags |= flag::kPrefix;
      next();
      n->a = parse_maybe_unary(nullptr, true);
      if (fn_.strict && n->op == "delete" && n->a->is(NodeType::kIdentifier)) {
        raise(start, "Deleting local variable in strict mode");
      }
      return finish(n);
    }
    (void)saw_unary;
    Node* expr = parse_expr_subscripts(refs, false);
    if (refs != nullptr && refs->shorthand_assign >= 0) return expr;
    while ((punct("++") || punct("--")) && !tok_.newline_before) {
      if (!is_simple_target(expr)) raise(expr->start, "Assigning to rvalue");
      Node* n = make(NodeType::kUpdateExpression, start);
      n->op = tok_.text;
      n->a = expr;
      next();
      expr = finish(n);
    }
    return expr;
  }

  Node* parse_expr_subscripts(DestructuringErrors* refs, bool no_calls) {
    const uint32_t start = tok_.start;
    Node* atom = parse_expr_atom(refs);
    if (atom->is(NodeType::kArrowFunctionExpression) && !atom->has(flag::kParenthesized)) return atom;
    const bool maybe_async_arrow = atom->is(NodeType::kIdentifier) && atom->name == "async" &&
                                   atom->end - atom->start == 5 && last_end_ == atom->end &&
                                   !can_insert_semicolon() && potential_arrow_at_ == atom->start;
    Node* result = parse_subscripts(atom, start, no_calls, maybe_async_arrow);
    if (refs != nullptr && result != atom && refs->shorthand_assign >= 0 &&
        !result->is(NodeType::kArrowFunctionExpression)) {
      check_expression_errors(*refs);
    }
    return result;
  }

  Node* parse_subscripts(Node* base, uint32_t start, bool no_calls, bool maybe_async_arrow) {
    bool chained = false;
    for (;;) {
      bool optional = false;
      if (punct("?.")) {
        if (no_calls) raise(tok_.start, "Optional chaining cannot appear in the callee of new expressions");
        optional = true;
        chained = true;
        next();
      }
      if (!optional && eat(".")) {
        Node* m = make(NodeType::kMemberExpression, start);
        m->a = base;
        m->b = tok_.kind == TokenKind::kPrivateName ? parse_private_ident() : parse_ident(true);
        base = finish(m);
        continue;
      }
      if (punct("[")) {
        next();
        Node* m = make(NodeType::kMemberExpression, start);
        m->flags |= flag::kComputed;
        if (optional) m->flags |= flag::kOptional;
        m->a = base;
        m->b = parse_expression(false, nullptr);
        expect("]");
        base = finish(m);
        continue;
      }
      if (punct("(") && (!no_calls || optional)) {
        DestructuringErrors refs;
        const uint32_t call_open = tok_.start;
        (void)call_open;
        next();
        std::vector<Node*> args = parse_expr_list(")", maybe_async_arrow && !optional ? &refs : nullptr);
        if (maybe_async_arrow && !optional && !chained && punct("=>") && !tok_.newline_before) {
          next();
          return parse_arrow(start, to_assignable_list(std::move(args), true), true, false);
        }
        check_expression_errors(refs);
        Node* c = make(NodeType::kCallExpression, start);
        if (optional) c->flags |= flag::kOptional;
        c->a = base;
        c->list = std::move(args);
        base = finish(c);
        maybe_async_arrow = false;
        continue;
      }
      if (optional) {
        // `a?.b`
        Node* m = make(NodeType::kMemberExpression, start);
        m->flags |= flag::kOptional;
        m->a = base;
        m->b = tok_.kind == TokenKind::kPrivateName ? parse_private_ident() : parse_ident(true);
        base = finish(m);
        continue;
      }
      if (tok_.kind == TokenKind::kTemplate) {
        if (chained) raise(tok_.start, "Optional chaining cannot appear in the tag of tagged template expressions");
        Node* t = make(NodeType::kTaggedTemplateExpression, start);
        t->a = base;
        t->b = parse_template(true);
        base = finish(t);
        continue;
      }
      break;
    }
    if (chained) {
      Node* chain = make(NodeType::kChainExpression, start);
      chain->a = base;
      return finish(chain);
    }
    return base;
  }

  std::vector<Node*> parse_expr_list(std::string_view close, DestructuringErrors* refs, bool allow_holes = false) {
    std::vector<Node*> items;
    bool first = true;
    while (!eat(close)) {
      if (!first) {
        expect(",");
        if (eat(close)) break;
      }
      first = false;
      if (allow_holes && punct(",")) {
        items.push_back(nullptr);
        continue;
      }
      if (punct("...")) {
        Node* s = make(NodeType::kSpreadElement, tok_.start);
        next();
        s->a = parse_maybe_assign(false, refs);
        items.push_back(finish(s));
        continue;
      }
      items.push_back(parse_maybe_assign(false, refs));
    }
    return items;
  }

  Node* parse_template(bool tagged) {
    Node* n = make(NodeType::kTemplateLiteral, tok_.start);
    for (;;) {
      if (tok_.kind != TokenKind::kTemplate) unexpected();
      if (tok_.escaped && !tagged) raise(tok_.start, "Bad escape sequence in untagged template literal");
      Node* el = make(NodeType::kTemplateElement, tok_.start + 1);
      el->name = tok_.value;
      el->raw = tok_.text;
      el->end = el->start + static_cast<uint32_t>(tok_.text.size());
      const bool tail = tok_.tail;
      if (tail) el->flags |= flag::kTail;
      n->list.push_back(el);
      next();
      if (tail) break;
      n->list2.push_back(parse_expression(false, nullptr));
      if (!punct("}")) unexpected();
      tok_ = lex_.rescan_template(tok_);
    }
    return finish(n);
  }

  Node* parse_expr_atom(DestructuringErrors* refs) {
    const uint32_t start = tok_.start;
    const bool can_be_arrow = potential_arrow_at_ == start;
    switch (tok_.kind) {
      case TokenKind::kString:
      case TokenKind::kNumber:
      case TokenKind::kBigInt:
        return parse_literal_token();
      case TokenKind::kTemplate:
        return parse_template(false);
      case TokenKind::kPunct: {
        if (punct("/") || punct("/=")) {
          tok_ = lex_.rescan_regexp(tok_);
          return parse_literal_token();
        }
        if (punct("(")) return parse_paren_and_distinguish(can_be_arrow);
        if (punct("[")) {
          Node* n = make(NodeType::kArrayExpression, start);
          next();
          n->list = parse_expr_list("]", refs, /*allow_holes=*/true);
          return finish(n);
        }
        if (punct("{")) return parse_object(false, refs);
        unexpected();
      }
      case TokenKind::kName:
        break;
      default:
        unexpected();
    }
    if (!tok_.escaped) {
      const std::string& kw = tok_.value;
      if (kw == "this") {
        Node* n = make(NodeType::kThisExpression, start);
        next();
        return finish(n);
      }
      if (kw == "super") {
        Node* n = make(NodeType::kSuper, start);
        next();
        if (!punct("(") && !punct(".") && !punct("[")) unexpected();
        return finish(n);
      }
      if (kw == "null" || kw == "true" || kw == "false") {
        Node* n = make(NodeType::kLiteral, start);
        n->raw = tok_.text;
        n->literal_kind = kw == "null" ? LiteralKind::kNull : LiteralKind::kBoolean;
        next();
        return finish(n);
      }
      if (kw == "function") {
        Node* n = make(NodeType::kFunctionExpression, start);
        return parse_function(n, false, false, true);
      }
      if (kw == "class") return parse_class(false, true);
      if (kw == "new") return parse_new();
      if (kw == "import") return parse_import_meta_or_call();
      if (kw == "async") {
        const auto [t1, t2] = peek2();
        if (t1.is_name("function") && !t1.newline_before) {
          Node* n = make(NodeType::kFunctionExpression, start);
          next();
          return parse_function(n, false, true, true);
        }
        if (can_be_arrow && t1.kind == TokenKind::kName && !t1.newline_before && t2.is_punct("=>") &&
            !t2.newline_before) {
          next();
          Node* param = parse_ident();
          next();  // =>
          return parse_arrow(start, {param}, true, false);
        }
      }
    }
    Node* id = parse_ident();
    if (can_be_arrow && punct("=>") && !tok_.newline_before) {
      next();
      return parse_arrow(start, {id}, false, false);
    }
    return id;
  }

  Node* parse_import_meta_or_call() {
    const uint32_t start = tok_.start;
    Node* meta = parse_ident(true);
    if (eat(".")) {
      Node* n = make(NodeType::kMetaProperty, start);
      n->a = meta;
      if (!name("meta")) unexpected();
      if (!module_) raise(start, "Cannot use 'import.meta' outside a module");
      n->b = parse_ident(true);
      return finish(n);
    }
    if (!punct("(")) unexpected();
    next();
    Node* n = make(NodeType::kImportExpression, start);
    n->a = parse_maybe_assign(false, nullptr);
    if (eat(",")) {
      if (!punct(")")) {
        n->b = parse_maybe_assign(false, nullptr);
        eat(",");
      }
    }
    expect(")");
    return finish(n);
  }

  Node* parse_new() {
    const uint32_t start = tok_.start;
    Node* meta = parse_ident(true);
    if (eat(".")) {
      Node* n = make(NodeType::kMetaProperty, start);
      n->a = meta;
      if (!name("target")) unexpected();
      if (!fn_.in_function) raise(start, "'new.target' can only be used in functions and class static block");
      n->b = parse_ident(true);
      return finish(n);
    }
    Node* n = make(NodeType::kNewExpression, start);
    const uint32_t callee_start = tok_.start;
    if (name("import")) raise(callee_start, "Cannot use new with import()");
    potential_arrow_at_ = UINT32_MAX;
    Node* atom = parse_expr_atom(nullptr);
    n->a = parse_subscripts(atom, callee_start, /*no_calls=*/true, false);
    if (eat("(")) n->list = parse_expr_list(")", nullptr);
    return finish(n);
  }

  Node* parse_paren_and_distinguish(bool can_be_arrow) {
    const uint32_t start = tok_.start;
    next();
    std::vector<Node*> items;
    DestructuringErrors refs;
    bool trailing_comma = false;
    int64_t spread_start = -1;
    const uint32_t inner_start = tok_.start;
    bool first = true;
    while (!punct(")")) {
      if (!first) {
        expect(",");
        if (punct(")")) {
          trailing_comma = true;
          break;
        }
      }
      first = false;
      if (punct("...")) {
        spread_start = tok_.start;
        Node* rest = make(NodeType::kRestElement, tok_.start);
        next();
        rest->a = parse_binding_target();
        items.push_back(finish(rest));
        if (punct(",")) raise(tok_.start, "Comma is not permitted after the rest element");
        break;
      }
      items.push_back(parse_maybe_assign(false, &refs));
    }
    const uint32_t inner_end = last_end_;
    expect(")");
    if (can_be_arrow && punct("=>") && !tok_.newline_before) {
      next();
      return parse_arrow(start, to_assignable_list(std::move(items), true), false, false);
    }
    if (items.empty() || trailing_comma) unexpected_at(last_start_);
    if (spread_start >= 0) unexpected_at(static_cast<uint32_t>(spread_start));
    check_expression_errors(refs);
    Node* expr = nullptr;
    if (items.size() > 1) {
      expr = make(NodeType::kSequenceExpression, inner_start);
      expr->list = std::move(items);
      expr->end = inner_end;
    } else {
      expr = items.front();
    }
    expr->flags |= flag::kParenthesized;
    return expr;
  }

  Node* parse_property_name(Node* prop) {
    if (punct("[")) {
      prop->flags |= flag::kComputed;
      next();
      Node* key = parse_maybe_assign(false, nullptr);
      expect("]");
      return key;
    }
    switch (tok_.kind) {
      case TokenKind::kString:
      case TokenKind::kNumber:
      case TokenKind::kBigInt:
        return parse_literal_token();
      case TokenKind::kName:
        return parse_ident(true);
      default:
        unexpected();
    }
  }

  static bool ends_property_modifier(const Token& t) {
    return t.is_punct(",") || t.is_punct("}") || t.is_punct(":") || t.is_punct("(") || t.is_punct("=") ||
           t.kind == TokenKind::kEof;
  }

  Node* parse_object(bool is_pattern, DestructuringErrors* refs) {
    Node* obj = make(is_pattern ? NodeType::kObjectPattern : NodeType::kObjectExpression, tok_.start);
    next();
    bool first = true;
    while (!eat("}")) {
      if (!first) {
        expect(",");
        if (eat("}")) break;
      }
      first = false;
      obj->list.push_back(parse_property(is_pattern, refs));
    }
    return finish(obj);
  }

  Node* parse_property(bool is_pattern, DestructuringErrors* refs) {
    const uint32_t start = tok_.start;
    if (punct("...")) {
      Node* s = make(is_pattern ? NodeType::kRestElement : NodeType::kSpreadElement, start);
      next();
      s->a = is_pattern ? parse_binding_target() : parse_maybe_assign(false, refs);
      return finish(s);
    }
    Node* prop = make(NodeType::kProperty, start);
    prop->op = "init";
    bool is_async = false;
    bool is_generator = false;
    if (!is_pattern) {
      if (name("async")) {
        const Token t = peek();
        if (!ends_property_modifier(t) && !t.newline_before) {
          is_async = true;
          next();
        }
      }
      if (eat("*")) is_generator = true;
      if (!is_async && !is_generator && (name("get") || name("set"))) {
        const Token t = peek();
        if (!ends_property_modifier(t)) {
          prop->op = tok_.value == "get" ? "get" : "set";
          next();
        }
      }
    }
    const Token key_tok = tok_;
    prop->a = parse_property_name(prop);
    if (prop->op != "init") {
      prop->b = parse_method(false, false);
      check_accessor_params(prop->op, prop->b);
      return finish(prop);
    }
    if (is_async || is_generator || (!is_pattern && punct("("))) {
      prop->flags |= flag::kMethod;
      prop->b = parse_method(is_generator, is_async);
      return finish(prop);
    }
    if (eat(":")) {
      prop->b = is_pattern ? parse_binding_element() : parse_maybe_assign(false, refs);
      return finish(prop);
    }
    if (prop->has(flag::kComputed) || !prop->a->is(NodeType::kIdentifier)) unexpected();
    check_identifier_name(key_tok);
    prop->flags |= flag::kShorthand;
    Node* value = copy(prop->a);
    if (punct("=")) {
      if (!is_pattern) {
        if (refs == nullptr) unexpected();
        if (refs->shorthand_assign < 0) refs->shorthand_assign = tok_.start;
      }
      next();
      Node* ap = make(NodeType::kAssignmentPattern, value->start);
      ap->a = value;
      ap->b = parse_maybe_assign(false, nullptr);
      value = finish(ap);
    }
    prop->b = value;
    return finish(prop);
  }

  std::string_view src_;
  Lexer lex_;
  Ast* ast_;
  bool module_;
  Token tok_;
  uint32_t last_end_ = 0;
  uint32_t last_start_ = 0;
  uint32_t potential_arrow_at_ = UINT32_MAX;
  FunctionContext fn_;
};

ParseFailure make_failure(std::string_view source, const SyntaxError& e) {
  ParseFailure f;
  f.offset = std::min<uint32_t>(e.offset(), static_cast<uint32_t>(source.size()));
  f.line = 1;
  uint32_t line_start = 0;
  for (uint32_t i = 0; i < f.offset; ++i) {
    if (source[i] == '\n') {
      ++f.line;
      line_start = i + 1;
    }
  }
  f.column = f.offset - line_start;
  f.message = e.what();
  return f;
}

ParseResult parse_as(std::string_view source, bool module_code) {
  auto ast = std::make_unique<Ast>();
  try {
    Parser parser(source, module_code, ast.get());
    ast->set_root(parser.parse_program());
  } catch (const SyntaxError& e) {
    return ParseResult::failure(make_failure(source, e));
  }
  return ParseResult::success(std::move(ast));
}

}  // namespace

ParseResult parse_source(std::string_view source, SourceType type) {
  if (source.size() >= UINT32_MAX) {
    return ParseResult::failure(ParseFailure{0, 1, 0, "Source too large"});
  }
  switch (type) {
    case SourceType::kScript:
      return parse_as(source, false);
    case SourceType::kModule:
      return parse_as(source, true);
    case SourceType::kDetect:
      break;
  }
  ParseResult script = parse_as(source, false);
  if (script.ok()) return script;
  ParseResult module = parse_as(source, true);
  if (module.ok()) return module;
  return script;
}

}  // namespace capguard::js
