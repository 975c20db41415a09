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

#include "capguard/prelude.h"

#include <algorithm>

namespace capguard {

using js::Node;
using js::NodeType;

bool is_prelude_statement(const Node& stmt) {
  if (!stmt.is(NodeType::kVariableDeclaration) || stmt.op != "const" || stmt.list.size() != 1) return false;
  const Node* decl = stmt.list.front();
  const Node* id = decl->a;
  if (!id->is(NodeType::kIdentifier) || !id->name.starts_with(kDefaultInjectedName)) return false;
  const std::string_view suffix = std::string_view(id->name).substr(kDefaultInjectedName.size());
  if (!std::all_of(suffix.begin(), suffix.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  const Node* call = decl->b;
  if (call == nullptr || !call->is(NodeType::kCallExpression)) return false;
  const Node* callee = call->a;
  if (!callee->is(NodeType::kMemberExpression) || callee->has(js::flag::kComputed)) return false;
  if (!callee->a->is(NodeType::kIdentifier) || (callee->a->name != "globalThis" && callee->a->name != "global")) {
    return false;
  }
  return callee->b->is(NodeType::kIdentifier) && callee->b->name == kGlobalsHook;
}

js::ScopeOptions analysis_options() {
  js::ScopeOptions options;
  options.skip_statement = [](const Node& stmt) { return is_prelude_statement(stmt); };
  return options;
}

}  // namespace capguard
