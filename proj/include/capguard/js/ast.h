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

#ifndef CAPGUARD_JS_AST_H_
#define CAPGUARD_JS_AST_H_

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

namespace capguard::js {

// ESTree node types. The tree shape follows ESTree so that node counts can be
// compared against other ESTree producers.
enum class NodeType : uint8_t {
  kProgram,
  kIdentifier,
  kPrivateIdentifier,
  kLiteral,
  kExpressionStatement,
  kBlockStatement,
  kStaticBlock,
  kEmptyStatement,
  kDebuggerStatement,
  kWithStatement,
  kReturnStatement,
  kLabeledStatement,
  kBreakStatement,
  kContinueStatement,
  kIfStatement,
  kSwitchStatement,
  kSwitchCase,
  kThrowStatement,
  kTryStatement,
  kCatchClause,
  kWhileStatement,
  kDoWhileStatement,
  kForStatement,
  kForInStatement,
  kForOfStatement,
  kFunctionDeclaration,
  kFunctionExpression,
  kArrowFunctionExpression,
  kVariableDeclaration,
  kVariableDeclarator,
  kClassDeclaration,
  kClassExpression,
  kClassBody,
  kMethodDefinition,
  kPropertyDefinition,
  kThisExpression,
  kSuper,
  kArrayExpression,
  kObjectExpression,
  kProperty,
  kSpreadElement,
  kRestElement,
  kUnaryExpression,
  kUpdateExpression,
  kBinaryExpression,
  kLogicalExpression,
  kAssignmentExpression,
  kAssignmentPattern,
  kArrayPattern,
  kObjectPattern,
  kConditionalExpression,
  kCallExpression,
  kNewExpression,
  kMemberExpression,
  kChainExpression,
  kSequenceExpression,
  kYieldExpression,
  kAwaitExpression,
  kTemplateLiteral,
  kTaggedTemplateExpression,
  kTemplateElement,
  kMetaProperty,
  kImportExpression,
  kImportDeclaration,
  kImportSpecifier,
  kImportDefaultSpecifier,
  kImportNamespaceSpecifier,
  kImportAttribute,
  kExportNamedDeclaration,
  kExportSpecifier,
  kExportDefaultDeclaration,
  kExportAllDeclaration,
};

std::string_view node_type_name(NodeType type);

enum class LiteralKind : uint8_t { kString, kNumber, kBigInt, kBoolean, kNull, kRegExp };

namespace flag {
inline constexpr uint32_t kComputed = 1u << 0;
inline constexpr uint32_t kOptional = 1u << 1;
inline constexpr uint32_t kShorthand = 1u << 2;
inline constexpr uint32_t kMethod = 1u << 3;
inline constexpr uint32_t kStatic = 1u << 4;
inline constexpr uint32_t kAsync = 1u << 5;
inline constexpr uint32_t kGenerator = 1u << 6;
inline constexpr uint32_t kExpressionBody = 1u << 7;
inline constexpr uint32_t kPrefix = 1u << 8;
inline constexpr uint32_t kDelegate = 1u << 9;
inline constexpr uint32_t kAwait = 1u << 10;
inline constexpr uint32_t kTail = 1u << 11;
inline constexpr uint32_t kParenthesized = 1u << 12;
inline constexpr uint32_t kDirective = 1u << 13;
inline constexpr uint32_t kModule = 1u << 14;
}  // namespace flag

// One node of the tree. Child slots are positional; their meaning per type:
//
//   Program                 list=body
//   Identifier              name
//   Literal                 name=cooked string value, raw, literal_kind
//   ExpressionStatement     a=expression, name=directive (kDirective)
//   Block/StaticBlock       list=body
//   WithStatement           a=object b=body
//   Return/Throw            a=argument
//   LabeledStatement        a=label b=body
//   Break/Continue          a=label
//   IfStatement             a=test b=consequent c=alternate
//   SwitchStatement         a=discriminant list=cases
//   SwitchCase              a=test list=consequent
//   TryStatement            a=block b=handler c=finalizer
//   CatchClause             a=param b=body
//   While                   a=test b=body
//   DoWhile                 a=body b=test
//   ForStatement            a=init b=test c=update d=body
//   ForIn/ForOf             a=left b=right c=body
//   Function*/Arrow         a=id list=params b=body
//   VariableDeclaration     list=declarations op=kind
//   VariableDeclarator      a=id b=init
//   Class*                  a=id b=superClass c=body
//   ClassBody               list=body
//   MethodDefinition        a=key b=value op=kind
//   PropertyDefinition      a=key b=value
//   Array{Expression,Pattern} list=elements (nullptr for holes)
//   Object{Expression,Pattern} list=properties
//   Property                a=key b=value op=kind
//   Spread/Rest             a=argument
//   Unary/Update            a=argument op
//   Binary/Logical/Assign   a=left b=right op
//   AssignmentPattern       a=left b=right
//   ConditionalExpression   a=test b=consequent c=alternate
//   Call/New                a=callee list=arguments
//   MemberExpression        a=object b=property
//   ChainExpression         a=expression
//   SequenceExpression      list=expressions
//   Yield/Await             a=argument
//   TemplateLiteral         list=quasis list2=expressions
//   TaggedTemplate          a=tag b=quasi
//   TemplateElement         name=cooked raw
//   MetaProperty            a=meta b=property
//   ImportExpression        a=source b=options
//   ImportDeclaration       list=specifiers a=source list2=attributes
//   ImportSpecifier         a=imported b=local (may alias a)
//   ImportDefault/Namespace b=local
//   ImportAttribute         a=key b=value
//   ExportNamedDeclaration  a=declaration list=specifiers b=source list2=attributes
//   ExportSpecifier         a=local b=exported (may alias a)
//   ExportDefault           a=declaration
//   ExportAll               a=exported b=source list2=attributes
struct Node {
  NodeType type = NodeType::kProgram;
  uint32_t start = 0;
  uint32_t end = 0;
  uint32_t flags = 0;
  LiteralKind literal_kind = LiteralKind::kNull;
  Node* a = nullptr;
  Node* b = nullptr;
  Node* c = nullptr;
  Node* d = nullptr;
  std::vector<Node*> list;
  std::vector<Node*> list2;
  std::string name;
  std::string_view raw;
  std::string_view op;

  bool has(uint32_t f) const { return (flags & f) != 0; }
  bool is(NodeType t) const { return type == t; }
};

// Owns every node of one parsed source. Nodes are stable in memory.
class Ast {
 public:
  Ast() = default;
  Ast(const Ast&) = delete;
  Ast& operator=(const Ast&) = delete;
  Ast(Ast&&) = default;
  Ast& operator=(Ast&&) = default;

  Node* make(NodeType type, uint32_t start) {
    Node& n = nodes_.emplace_back();
    n.type = type;
    n.start = start;
    n.end = start;
    return &n;
  }

  const Node* root() const { return root_; }
  Node* root() { return root_; }
  void set_root(Node* root) { root_ = root; }
  bool is_module() const { return root_ != nullptr && root_->has(flag::kModule); }

 private:
  std::deque<Node> nodes_;
  Node* root_ = nullptr;
};

// Calls fn(child) for every non-null child in source order. A node that is
// referenced from two slots (import/export specifiers without `as`) is
// reported twice.
template <typename Fn>
void for_each_child(const Node& n, Fn&& fn) {
  auto one = [&](const Node* c) {
    if (c != nullptr) fn(*c);
  };
  auto all = [&](const std::vector<Node*>& v) {
    for (const Node* c : v) one(c);
  };
  switch (n.type) {
    case NodeType::kFunctionDeclaration:
    case NodeType::kFunctionExpression:
    case NodeType::kArrowFunctionExpression:
      one(n.a);
      all(n.list);
      one(n.b);
      return;
    case NodeType::kTemplateLiteral: {
      for (size_t i = 0; i < n.list.size(); ++i) {
        one(n.list[i]);
        if (i < n.list2.size()) one(n.list2[i]);
      }
      return;
    }
    case NodeType::kImportDeclaration:
      all(n.list);
      one(n.a);
      all(n.list2);
      return;
    case NodeType::kExportNamedDeclaration:
      one(n.a);
      all(n.list);
      one(n.b);
      all(n.list2);
      return;
    case NodeType::kExportAllDeclaration:
      one(n.a);
      one(n.b);
      all(n.list2);
      return;
    case NodeType::kSwitchCase:
    case NodeType::kSwitchStatement:
    case NodeType::kCallExpression:
    case NodeType::kNewExpression:
      one(n.a);
      all(n.list);
      return;
    default:
      one(n.a);
      one(n.b);
      one(n.c);
      one(n.d);
      all(n.list);
      all(n.list2);
      return;
  }
}

// Number of distinct nodes reachable from root, root included.
size_t count_nodes(const Node& root);

}  // namespace capguard::js

#endif  // CAPGUARD_JS_AST_H_
