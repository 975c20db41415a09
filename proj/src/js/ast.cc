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

#include "capguard/js/ast.h"

#include <unordered_set>

namespace capguard::js {

std::string_view node_type_name(NodeType type) {
  switch (type) {
    case NodeType::kProgram:
      return "Program";
    case NodeType::kIdentifier:
      return "Identifier";
    case NodeType::kPrivateIdentifier:
      return "PrivateIdentifier";
    case NodeType::kLiteral:
      return "Literal";
    case NodeType::kExpressionStatement:
      return "ExpressionStatement";
    case NodeType::kBlockStatement:
      return "BlockStatement";
    case NodeType::kStaticBlock:
      return "StaticBlock";
    case NodeType::kEmptyStatement:
      return "EmptyStatement";
    case NodeType::kDebuggerStatement:
      return "DebuggerStatement";
    case NodeType::kWithStatement:
      return "WithStatement";
    case NodeType::kReturnStatement:
      return "ReturnStatement";
    case NodeType::kLabeledStatement:
      return "LabeledStatement";
    case NodeType::kBreakStatement:
      return "BreakStatement";
    case NodeType::kContinueStatement:
      return "ContinueStatement";
    case NodeType::kIfStatement:
      return "IfStatement";
    case NodeType::kSwitchStatement:
      return "SwitchStatement";
    case NodeType::kSwitchCase:
      return "SwitchCase";
    case NodeType::kThrowStatement:
      return "ThrowStatement";
    case NodeType::kTryStatement:
      return "TryStatement";
    case NodeType::kCatchClause:
      return "CatchClause";
    case NodeType::kWhileStatement:
      return "WhileStatement";
    case NodeType::kDoWhileStatement:
      return "DoWhileStatement";
    case NodeType::kForStatement:
      return "ForStatement";
    case NodeType::kForInStatement:
      return "ForInStatement";
    case NodeType::kForOfStatement:
      return "ForOfStatement";
    case NodeType::kFunctionDeclaration:
      return "FunctionDeclaration";
    case NodeType::kFunctionExpression:
      return "FunctionExpression";
    case NodeType::kArrowFunctionExpression:
      return "ArrowFunctionExpression";
    case NodeType::kVariableDeclaration:
      return "VariableDeclaration";
    case NodeType::kVariableDeclarator:
      return "VariableDeclarator";
    case NodeType::kClassDeclaration:
      return "ClassDeclaration";
    case NodeType::kClassExpression:
      return "ClassExpression";
    case NodeType::kClassBody:
      return "ClassBody";
    case NodeType::kMethodDefinition:
      return "MethodDefinition";
    case NodeType::kPropertyDefinition:
      return "PropertyDefinition";
    case NodeType::kThisExpression:
      return "ThisExpression";
    case NodeType::kSuper:
      return "Super";
    case NodeType::kArrayExpression:
      return "ArrayExpression";
    case NodeType::kObjectExpression:
      return "ObjectExpression";
    case NodeType::kProperty:
      return "Property";
    case NodeType::kSpreadElement:
      return "SpreadElement";
    case NodeType::kRestElement:
      return "RestElement";
    case NodeType::kUnaryExpression:
      return "UnaryExpression";
    case NodeType::kUpdateExpression:
      return "UpdateExpression";
    case NodeType::kBinaryExpression:
      return "BinaryExpression";
    case NodeType::kLogicalExpression:
      return "LogicalExpression";
    case NodeType::kAssignmentExpression:
      return "AssignmentExpression";
    case NodeType::kAssignmentPattern:
      return "AssignmentPattern";
    case NodeType::kArrayPattern:
      return "ArrayPattern";
    case NodeType::kObjectPattern:
      return "ObjectPattern";
    case NodeType::kConditionalExpression:
      return "ConditionalExpression";
    case NodeType::kCallExpression:
      return "CallExpression";
    case NodeType::kNewExpression:
      return "NewExpression";
    case NodeType::kMemberExpression:
      return "MemberExpression";
    case NodeType::kChainExpression:
      return "ChainExpression";
    case NodeType::kSequenceExpression:
      return "SequenceExpression";
    case NodeType::kYieldExpression:
      return "YieldExpression";
    case NodeType::kAwaitExpression:
      return "AwaitExpression";
    case NodeType::kTemplateLiteral:
      return "TemplateLiteral";
    case NodeType::kTaggedTemplateExpression:
      return "TaggedTemplateExpression";
    case NodeType::kTemplateElement:
      return "TemplateElement";
    case NodeType::kMetaProperty:
      return "MetaProperty";
    case NodeType::kImportExpression:
      return "ImportExpression";
    case NodeType::kImportDeclaration:
      return "ImportDeclaration";
    case NodeType::kImportSpecifier:
      return "ImportSpecifier";
    case NodeType::kImportDefaultSpecifier:
      return "ImportDefaultSpecifier";
    case NodeType::kImportNamespaceSpecifier:
      return "ImportNamespaceSpecifier";
    case NodeType::kImportAttribute:
      return "ImportAttribute";
    case NodeType::kExportNamedDeclaration:
      return "ExportNamedDeclaration";
    case NodeType::kExportSpecifier:
      return "ExportSpecifier";
    case NodeType::kExportDefaultDeclaration:
      return "ExportDefaultDeclaration";
    case NodeType::kExportAllDeclaration:
      return "ExportAllDeclaration";
  }
  return "Unknown";
}

size_t count_nodes(const Node& root) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{&root};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for_each_child(*n, [&](const Node& c) { stack.push_back(&c); });
  }
  return seen.size();
}

}  // namespace capguard::js
