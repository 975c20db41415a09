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

#ifndef CAPGUARD_JS_SCOPE_H_
#define CAPGUARD_JS_SCOPE_H_

#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "capguard/js/ast.h"

namespace capguard::js {

enum class BindingKind : uint8_t {
  kVar,
  kLet,
  kConst,
  kFunction,
  kParam,
  kCatchParam,
  kClass,
  kImport,
  kFunctionName,  // a named function expression's own name
  kClassName,     // the inner binding of a class's own name
};

enum class ScopeKind : uint8_t { kProgram, kFunction, kBlock, kCatch, kFor, kSwitch, kClass, kStaticBlock };

struct Scope;

struct Binding {
  std::string name;
  BindingKind kind;
  const Node* id = nullptr;  // first declaring identifier
  const Scope* scope = nullptr;
};

struct Scope {
  ScopeKind kind;
  const Node* node = nullptr;
  const Scope* parent = nullptr;
  bool strict = false;
  std::unordered_map<std::string, Binding*> names;

  bool is_var_scope() const {
    return kind == ScopeKind::kProgram || kind == ScopeKind::kFunction || kind == ScopeKind::kStaticBlock;
  }
};

// One identifier in reference position.
struct Reference {
  const Node* id = nullptr;
  const Binding* binding = nullptr;  // nullptr: unbound, i.e. a global
  bool write = false;
  bool shorthand = false;  // the value of a `{ name }` property
};

struct ScopeOptions {
  // Top-level statements for which this returns true are ignored entirely:
  // they declare nothing and reference nothing.
  std::function<bool(const Node&)> skip_statement;
};

// Lexical scope analysis over one tree. Declarations are hoisted to their
// scopes before any reference is resolved, so resolution does not depend on
// textual order.
class ScopeAnalysis {
 public:
  explicit ScopeAnalysis(const Ast& ast, const ScopeOptions& options = {});
  ScopeAnalysis(const ScopeAnalysis&) = delete;
  ScopeAnalysis& operator=(const ScopeAnalysis&) = delete;

  // All references, in source order.
  const std::vector<Reference>& references() const { return references_; }
  // Binding declared by a binding-position identifier, or nullptr.
  const Binding* declared(const Node* id) const;
  // Binding a reference-position identifier resolves to, or nullptr.
  const Binding* resolved(const Node* id) const;
  bool is_reference(const Node* id) const { return reference_index_.count(id) != 0; }

  const Scope& program_scope() const { return scopes_.front(); }
  // The first skipped top-level statement, if any.
  const Node* skipped_statement() const { return skipped_; }
  // Every Identifier name appearing anywhere in the tree.
  const std::unordered_set<std::string>& identifier_names() const { return identifier_names_; }

 private:
  friend class ScopeBuilder;

  std::deque<Scope> scopes_;
  std::deque<Binding> bindings_;
  std::vector<Reference> references_;
  std::unordered_map<const Node*, size_t> reference_index_;
  std::unordered_map<const Node*, const Binding*> declared_;
  std::unordered_set<std::string> identifier_names_;
  const Node* skipped_ = nullptr;
};

}  // namespace capguard::js

#endif  // CAPGUARD_JS_SCOPE_H_
