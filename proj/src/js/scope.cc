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

#include "capguard/js/scope.h"

#include <algorithm>

namespace capguard::js {

namespace {

template <typename Fn>
void for_each_pattern_id(const Node* p, Fn&& fn) {
  if (p == nullptr) return;
  switch (p->type) {
    case NodeType::kIdentifier:
      fn(p);
      return;
    case NodeType::kObjectPattern:
      for (const Node* prop : p->list) {
        for_each_pattern_id(prop->is(NodeType::kProperty) ? prop->b : prop->a, fn);
      }
      return;
    case NodeType::kArrayPattern:
      for (const Node* e : p->list) for_each_pattern_id(e, fn);
      return;
    case NodeType::kAssignmentPattern:
      for_each_pattern_id(p->a, fn);
      return;
    case NodeType::kRestElement:
      for_each_pattern_id(p->a, fn);
      return;
    default:
      return;
  }
}

bool has_use_strict(const std::vector<Node*>& body) {
  for (const Node* s : body) {
    if (!s->has(flag::kDirective)) return false;
    if (s->name == "use strict") return true;
  }
  return false;
}

// Unwraps `export <declaration>`.
const Node* exported_declaration(const Node* s) {
  if (s->is(NodeType::kExportNamedDeclaration) && s->a != nullptr) return s->a;
  if (s->is(NodeType::kExportDefaultDeclaration) &&
      (s->a->is(NodeType::kFunctionDeclaration) || s->a->is(NodeType::kClassDeclaration))) {
    return s->a;
  }
  return s;
}

}  // namespace

class ScopeBuilder {
 public:
  ScopeBuilder(ScopeAnalysis* out, const ScopeOptions& options) : out_(out), options_(options) {}

  void run(const Node& program) {
    Scope* scope = push(ScopeKind::kProgram, &program);
    scope->strict = program.has(flag::kModule) || has_use_strict(program.list);
    std::vector<const Node*> body;
    for (const Node* s : program.list) {
      if (options_.skip_statement && options_.skip_statement(*s)) {
        if (out_->skipped_ == nullptr) out_->skipped_ = s;
        continue;
      }
      body.push_back(s);
    }
    hoist_vars(body, scope);
    hoist_lexical(body, scope);
    for (const Node* s : body) visit_statement(s);
    pop();
    collect_identifier_names(program);
    std::stable_sort(out_->references_.begin(), out_->references_.end(),
                     [](const Reference& a, const Reference& b) { return a.id->start < b.id->start; });
    for (size_t i = 0; i < out_->references_.size(); ++i) out_->reference_index_[out_->references_[i].id] = i;
  }

 private:
  void collect_identifier_names(const Node& root) {
    std::vector<const Node*> stack{&root};
    while (!stack.empty()) {
      const Node* n = stack.back();
      stack.pop_back();
      if (n->is(NodeType::kIdentifier)) out_->identifier_names_.insert(n->name);
      for_each_child(*n, [&](const Node& c) { stack.push_back(&c); });
    }
  }

  Scope* push(ScopeKind kind, const Node* node) {
    Scope& s = out_->scopes_.emplace_back();
    s.kind = kind;
    s.node = node;
    s.parent = current_;
    s.strict = current_ != nullptr && current_->strict;
    current_ = &s;
    return &s;
  }

  void pop() { current_ = const_cast<Scope*>(current_->parent); }

  void declare(Scope* scope, const Node* id, BindingKind kind) {
    out_->identifier_names_.insert(id->name);
    auto it = scope->names.find(id->name);
    Binding* b = nullptr;
    if (it != scope->names.end()) {
      b = it->second;
      // Parameters and vars override a function expression's own name.
      if (b->kind == BindingKind::kFunctionName && kind != BindingKind::kFunctionName) {
        b->kind = kind;
        b->id = id;
      }
    } else {
      b = &out_->bindings_.emplace_back();
      b->name = id->name;
      b->kind = kind;
      b->id = id;
      b->scope = scope;
      scope->names.emplace(id->name, b);
    }
    out_->declared_.emplace(id, b);
  }

  void declare_pattern(Scope* scope, const Node* pattern, BindingKind kind) {
    for_each_pattern_id(pattern, [&](const Node* id) { declare(scope, id, kind); });
  }

  const Binding* lookup(const std::string& name) const {
    for (const Scope* s = current_; s != nullptr; s = s->parent) {
      auto it = s->names.find(name);
      if (it != s->names.end()) return it->second;
    }
    return nullptr;
  }

  // ---- hoisting ------------------------------------------------------------

  void hoist_vars(const std::vector<const Node*>& body, Scope* scope) {
    for (const Node* s : body) hoist_vars_in(exported_declaration(s), scope, /*nested=*/false);
  }

  void hoist_vars_in(const Node* s, Scope* scope, bool nested) {
    if (s == nullptr) return;
    switch (s->type) {
      case NodeType::kVariableDeclaration:
        if (s->op == "var") {
          for (const Node* d : s->list) declare_pattern(scope, d->a, BindingKind::kVar);
        }
        return;
      case NodeType::kFunctionDeclaration:
        // Sloppy-mode block functions are also visible function-wide.
        if (nested && !scope->strict && s->a != nullptr) declare(scope, s->a, BindingKind::kVar);
        return;
      case NodeType::kBlockStatement:
        for (const Node* c : s->list) hoist_vars_in(c, scope, true);
        return;
      case NodeType::kIfStatement:
        hoist_vars_in(s->b, scope, true);
        hoist_vars_in(s->c, scope, true);
        return;
      case NodeType::kForStatement:
        hoist_vars_in(s->a, scope, true);
        hoist_vars_in(s->d, scope, true);
        return;
      case NodeType::kForInStatement:
      case NodeType::kForOfStatement:
        hoist_vars_in(s->a, scope, true);
        hoist_vars_in(s->c, scope, true);
        return;
      case NodeType::kWhileStatement:
      case NodeType::kLabeledStatement:
      case NodeType::kWithStatement:
        hoist_vars_in(s->b, scope, true);
        return;
      case NodeType::kDoWhileStatement:
        hoist_vars_in(s->a, scope, true);
        return;
      case NodeType::kTryStatement:
        hoist_vars_in(s->a, scope, true);
        if (s->b != nullptr) hoist_vars_in(s->b->b, scope, true);
        hoist_vars_in(s->c, scope, true);
        return;
      case NodeType::kSwitchStatement:
        for (const Node* c : s->list) {
          for (const Node* st : c->list) hoist_vars_in(st, scope, true);
        }
        return;
      default:
        return;
    }
  }

  void hoist_lexical(const std::vector<const Node*>& body, Scope* scope) {
    for (const Node* raw : body) {
      const Node* s = exported_declaration(raw);
      switch (s->type) {
        case NodeType::kVariableDeclaration:
          if (s->op != "var") {
            const BindingKind kind = s->op == "let" ? BindingKind::kLet : BindingKind::kConst;
            for (const Node* d : s->list) declare_pattern(scope, d->a, kind);
          }
          break;
        case NodeType::kFunctionDeclaration:
          if (s->a != nullptr) declare(scope, s->a, BindingKind::kFunction);
          break;
        case NodeType::kClassDeclaration:
          if (s->a != nullptr) declare(scope, s->a, BindingKind::kClass);
          break;
        case NodeType::kImportDeclaration:
          for (const Node* spec : s->list) declare(scope, spec->b, BindingKind::kImport);
          break;
        default:
          break;
      }
    }
  }

  static std::vector<const Node*> as_const(const std::vector<Node*>& v) { return {v.begin(), v.end()}; }

  // ---- references ----------------------------------------------------------

  void reference(const Node* id, bool write, bool shorthand) {
    out_->identifier_names_.insert(id->name);
    out_->references_.push_back(Reference{id, lookup(id->name), write, shorthand});
  }

  void binding_target(const Node* id) {
    // Declarations were hoisted; map this occurrence to the visible binding.
    out_->identifier_names_.insert(id->name);
    if (out_->declared_.count(id) == 0) {
      const Binding* b = lookup(id->name);
      if (b != nullptr) out_->declared_.emplace(id, b);
    }
  }

  // Walks a pattern whose identifiers are declarations.
  void visit_binding_pattern(const Node* p) {
    if (p == nullptr) return;
    switch (p->type) {
      case NodeType::kIdentifier:
        binding_target(p);
        return;
      case NodeType::kObjectPattern:
        for (const Node* prop : p->list) {
          if (prop->is(NodeType::kRestElement)) {
            visit_binding_pattern(prop->a);
            continue;
          }
          if (prop->has(flag::kComputed)) visit_expression(prop->a);
          visit_binding_pattern(prop->b);
        }
        return;
      case NodeType::kArrayPattern:
        for (const Node* e : p->list) visit_binding_pattern(e);
        return;
      case NodeType::kAssignmentPattern:
        visit_binding_pattern(p->a);
        visit_expression(p->b);
        return;
      case NodeType::kRestElement:
        visit_binding_pattern(p->a);
        return;
      default:
        visit_expression(p);
        return;
    }
  }

  // Walks an assignment target; identifiers are written references.
  void visit_assign_target(const Node* p, bool shorthand = false) {
    if (p == nullptr) return;
    switch (p->type) {
      case NodeType::kIdentifier:
        reference(p, true, shorthand);
        return;
      case NodeType::kObjectPattern:
        for (const Node* prop : p->list) {
          if (prop->is(NodeType::kRestElement)) {
            visit_assign_target(prop->a);
            continue;
          }
          if (prop->has(flag::kComputed)) visit_expression(prop->a);
          visit_assign_target(prop->b, prop->has(flag::kShorthand));
        }
        return;
      case NodeType::kArrayPattern:
        for (const Node* e : p->list) visit_assign_target(e);
        return;
      case NodeType::kAssignmentPattern:
        visit_assign_target(p->a, shorthand);
        visit_expression(p->b);
        return;
      case NodeType::kRestElement:
        visit_assign_target(p->a);
        return;
      default:
        visit_expression(p);
        return;
    }
  }

  void visit_function(const Node* fn) {
    Scope* scope = push(ScopeKind::kFunction, fn);
    if (fn->is(NodeType::kFunctionExpression) && fn->a != nullptr) declare(scope, fn->a, BindingKind::kFunctionName);
    const Node* body = fn->b;
    const bool block_body = body->is(NodeType::kBlockStatement);
    if (block_body && has_use_strict(body->list)) scope->strict = true;
    for (const Node* p : fn->list) declare_pattern(scope, p, BindingKind::kParam);
    // With non-simple parameters the body gets its own var scope, which
    // default values cannot see.
    const bool simple_params = std::all_of(fn->list.begin(), fn->list.end(),
                                           [](const Node* p) { return p->is(NodeType::kIdentifier); });
    if (block_body && simple_params) {
      const auto stmts = as_const(body->list);
      hoist_vars(stmts, scope);
      hoist_lexical(stmts, scope);
    }
    if (fn->a != nullptr) binding_target(fn->a);
    for (const Node* p : fn->list) visit_binding_pattern(p);
    if (block_body) {
      if (!simple_params) {
        Scope* body_scope = push(ScopeKind::kFunction, body);
        body_scope->strict = scope->strict;
        const auto stmts = as_const(body->list);
        hoist_vars(stmts, body_scope);
        hoist_lexical(stmts, body_scope);
      }
      for (const Node* s : body->list) visit_statement(s);
      if (!simple_params) pop();
    } else {
      visit_expression(body);
    }
    pop();
  }

  void visit_class(const Node* cls) {
    if (cls->a != nullptr && cls->is(NodeType::kClassDeclaration)) binding_target(cls->a);
    Scope* scope = push(ScopeKind::kClass, cls);
    scope->strict = true;
    if (cls->a != nullptr) declare(scope, cls->a, BindingKind::kClassName);
    visit_expression(cls->b);
    for (const Node* m : cls->c->list) {
      if (m->is(NodeType::kStaticBlock)) {
        Scope* block = push(ScopeKind::kStaticBlock, m);
        const auto stmts = as_const(m->list);
        hoist_vars(stmts, block);
        hoist_lexical(stmts, block);
        for (const Node* s : m->list) visit_statement(s);
        pop();
        continue;
      }
      if (m->has(flag::kComputed)) visit_expression(m->a);
      visit_expression(m->b);
    }
    pop();
  }

  void visit_block(const Node* block, ScopeKind kind) {
    Scope* scope = push(kind, block);
    hoist_lexical(as_const(block->list), scope);
    for (const Node* s : block->list) visit_statement(s);
    pop();
  }

  void visit_var_declaration(const Node* decl) {
    for (const Node* d : decl->list) {
      visit_binding_pattern(d->a);
      visit_expression(d->b);
    }
  }

  void visit_statement(const Node* s) {
    if (s == nullptr) return;
    switch (s->type) {
      case NodeType::kBlockStatement:
        visit_block(s, ScopeKind::kBlock);
        return;
      case NodeType::kVariableDeclaration:
        visit_var_declaration(s);
        return;
      case NodeType::kFunctionDeclaration:
        visit_function(s);
        return;
      case NodeType::kClassDeclaration:
        visit_class(s);
        return;
      case NodeType::kExpressionStatement:
        visit_expression(s->a);
        return;
      case NodeType::kIfStatement:
        visit_expression(s->a);
        visit_substatement(s->b);
        visit_substatement(s->c);
        return;
      case NodeType::kLabeledStatement:
        visit_substatement(s->b);
        return;
      case NodeType::kBreakStatement:
      case NodeType::kContinueStatement:
      case NodeType::kEmptyStatement:
      case NodeType::kDebuggerStatement:
        return;
      case NodeType::kWithStatement:
        visit_expression(s->a);
        visit_substatement(s->b);
        return;
      case NodeType::kReturnStatement:
      case NodeType::kThrowStatement:
        visit_expression(s->a);
        return;
      case NodeType::kWhileStatement:
        visit_expression(s->a);
        visit_substatement(s->b);
        return;
      case NodeType::kDoWhileStatement:
        visit_substatement(s->a);
        visit_expression(s->b);
        return;
      case NodeType::kForStatement: {
        const bool lexical = s->a != nullptr && s->a->is(NodeType::kVariableDeclaration) && s->a->op != "var";
        if (lexical) {
          Scope* scope = push(ScopeKind::kFor, s);
          hoist_lexical({s->a}, scope);
        }
        if (s->a != nullptr && s->a->is(NodeType::kVariableDeclaration)) {
          visit_var_declaration(s->a);
        } else {
          visit_expression(s->a);
        }
        visit_expression(s->b);
        visit_expression(s->c);
        visit_substatement(s->d);
        if (lexical) pop();
        return;
      }
      case NodeType::kForInStatement:
      case NodeType::kForOfStatement: {
        const bool is_decl = s->a->is(NodeType::kVariableDeclaration);
        const bool lexical = is_decl && s->a->op != "var";
        if (lexical) {
          Scope* scope = push(ScopeKind::kFor, s);
          hoist_lexical({s->a}, scope);
        }
        if (is_decl) {
          visit_var_declaration(s->a);
        } else {
          visit_assign_target(s->a);
        }
        visit_expression(s->b);
        visit_substatement(s->c);
        if (lexical) pop();
        return;
      }
      case NodeType::kTryStatement:
        visit_statement(s->a);
        if (s->b != nullptr) {
          const Node* handler = s->b;
          Scope* scope = push(ScopeKind::kCatch, handler);
          declare_pattern(scope, handler->a, BindingKind::kCatchParam);
          visit_binding_pattern(handler->a);
          visit_block(handler->b, ScopeKind::kBlock);
          pop();
        }
        visit_statement(s->c);
        return;
      case NodeType::kSwitchStatement: {
        visit_expression(s->a);
        Scope* scope = push(ScopeKind::kSwitch, s);
        std::vector<const Node*> all;
        for (const Node* c : s->list) all.insert(all.end(), c->list.begin(), c->list.end());
        hoist_lexical(all, scope);
        for (const Node* c : s->list) {
          visit_expression(c->a);
          for (const Node* st : c->list) visit_statement(st);
        }
        pop();
        return;
      }
      case NodeType::kImportDeclaration:
        for (const Node* spec : s->list) binding_target(spec->b);
        return;
      case NodeType::kExportNamedDeclaration:
        // Specifier locals name bindings; they are not value uses.
        visit_statement(s->a);
        return;
      case NodeType::kExportDefaultDeclaration:
        if (s->a->is(NodeType::kFunctionDeclaration) || s->a->is(NodeType::kClassDeclaration)) {
          visit_statement(s->a);
        } else {
          visit_expression(s->a);
        }
        return;
      case NodeType::kExportAllDeclaration:
        return;
      default:
        visit_expression(s);
        return;
    }
  }

  // A statement in a single-statement position (`if (x) function f(){}`).
  void visit_substatement(const Node* s) {
    if (s == nullptr) return;
    if (s->is(NodeType::kFunctionDeclaration) || s->is(NodeType::kClassDeclaration) ||
        (s->is(NodeType::kVariableDeclaration) && s->op != "var")) {
      Scope* scope = push(ScopeKind::kBlock, s);
      hoist_lexical({s}, scope);
      visit_statement(s);
      pop();
      return;
    }
    visit_statement(s);
  }

  void visit_expression(const Node* e) {
    if (e == nullptr) return;
    switch (e->type) {
      case NodeType::kIdentifier:
        reference(e, false, false);
        return;
      case NodeType::kLiteral:
      case NodeType::kThisExpression:
      case NodeType::kSuper:
      case NodeType::kMetaProperty:
      case NodeType::kPrivateIdentifier:
      case NodeType::kTemplateElement:
        return;
      case NodeType::kMemberExpression:
        visit_expression(e->a);
        if (e->has(flag::kComputed)) visit_expression(e->b);
        return;
      case NodeType::kObjectExpression:
        for (const Node* p : e->list) {
          if (p->is(NodeType::kSpreadElement)) {
            visit_expression(p->a);
            continue;
          }
          if (p->has(flag::kComputed)) visit_expression(p->a);
          if (p->has(flag::kShorthand) && p->b->is(NodeType::kIdentifier)) {
            reference(p->b, false, true);
          } else {
            visit_expression(p->b);
          }
        }
        return;
      case NodeType::kFunctionExpression:
      case NodeType::kArrowFunctionExpression:
        visit_function(e);
        return;
      case NodeType::kClassExpression:
        visit_class(e);
        return;
      case NodeType::kAssignmentExpression:
        visit_assign_target(e->a);
        visit_expression(e->b);
        return;
      case NodeType::kUpdateExpression:
        visit_assign_target(e->a);
        return;
      case NodeType::kObjectPattern:
      case NodeType::kArrayPattern:
      case NodeType::kAssignmentPattern:
      case NodeType::kRestElement:
        visit_assign_target(e);
        return;
      default:
        for_each_child(*e, [&](const Node& c) { visit_expression(&c); });
        return;
    }
  }

  ScopeAnalysis* out_;
  const ScopeOptions& options_;
  Scope* current_ = nullptr;
};

ScopeAnalysis::ScopeAnalysis(const Ast& ast, const ScopeOptions& options) {
  if (ast.root() == nullptr) {
    Scope& s = scopes_.emplace_back();
    s.kind = ScopeKind::kProgram;
    return;
  }
  ScopeBuilder(this, options).run(*ast.root());
}

const Binding* ScopeAnalysis::declared(const Node* id) const {
  auto it = declared_.find(id);
  return it == declared_.end() ? nullptr : it->second;
}

const Binding* ScopeAnalysis::resolved(const Node* id) const {
  auto it = reference_index_.find(id);
  return it == reference_index_.end() ? nullptr : references_[it->second].binding;
}

}  // namespace capguard::js
