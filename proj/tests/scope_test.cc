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

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "capguard/js/parser.h"
#include "capguard/js/scope.h"
#include "capguard/prelude.h"

namespace capguard::js {
namespace {

// Names of unbound references, in source order.
std::vector<std::string> unbound(std::string_view src, SourceType type = SourceType::kDetect,
                                 const ScopeOptions& options = {}) {
  ParseResult r = parse_source(src, type);
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.error().message);
  if (!r.ok()) return {};
  ScopeAnalysis scopes(r.ast(), options);
  std::vector<std::string> out;
  for (const auto& ref : scopes.references()) {
    if (ref.binding == nullptr) out.push_back(ref.id->name);
  }
  return out;
}

using Names = std::vector<std::string>;

TEST(Scope, HoistedVarAndFunctionShadowEarlierUses) {
  EXPECT_EQ(unbound("a; var a; f(); function f() {}"), Names{});
  EXPECT_EQ(unbound("g(); { function g() {} }"), Names{});  // Annex B in sloppy code
  EXPECT_EQ(unbound("'use strict'; g(); { function g() {} }"), Names{"g"});
}

TEST(Scope, LexicalBindingsAreBlockScoped) {
  EXPECT_EQ(unbound("{ let a = 1; a; } a;"), Names{"a"});
  EXPECT_EQ(unbound("for (let i = 0; i < n; i++) i; i;"), (Names{"n", "i"}));
  EXPECT_EQ(unbound("switch (x) { case 1: let y; y; } y;"), (Names{"x", "y"}));
}

TEST(Scope, ParametersCatchAndClassNames) {
  EXPECT_EQ(unbound("function f(a, {b}, [c], ...d) { a; b; c; d; e; }"), Names{"e"});
  EXPECT_EQ(unbound("try {} catch ({ message }) { message; } message;"), Names{"message"});
  EXPECT_EQ(unbound("const K = class C { m() { return C; } }; C;"), Names{"C"});
  EXPECT_EQ(unbound("(function f() { return f; }); f;"), Names{"f"});
}

TEST(Scope, DefaultsSeeParametersButNotBody) {
  EXPECT_EQ(unbound("function f(a, b = a) { var c; }"), Names{});
  EXPECT_EQ(unbound("function f(b = c) { var c; }"), Names{"c"});
}

TEST(Scope, PropertyKeysLabelsAndMetaAreNotReferences) {
  EXPECT_EQ(unbound("o.p; o[q]; ({ r: 1, [s]: 2 }); l: for (;;) break l;"), (Names{"o", "o", "q", "s"}));
  EXPECT_EQ(unbound("function f() { return new.target; }"), Names{});
}

TEST(Scope, ShorthandAndWrites) {
  ParseResult r = parse_source("({ a } = b); c = 1; ({ d });");
  ASSERT_TRUE(r.ok());
  ScopeAnalysis scopes(r.ast());
  std::set<std::string> writes;
  std::set<std::string> shorthand;
  for (const auto& ref : scopes.references()) {
    if (ref.write) writes.insert(ref.id->name);
    if (ref.shorthand) shorthand.insert(ref.id->name);
  }
  EXPECT_EQ(writes, (std::set<std::string>{"a", "c"}));
  EXPECT_EQ(shorthand, (std::set<std::string>{"a", "d"}));
}

TEST(Scope, ImportsBindInModules) {
  EXPECT_EQ(unbound("import x, { y as z } from 'm'; x; z; y;", SourceType::kModule), Names{"y"});
  EXPECT_EQ(unbound("export { a as b }; const a = 1;", SourceType::kModule), Names{});
}

TEST(Scope, PreludeStatementIsInvisible) {
  const std::string src =
      "const __cgd__ = globalThis.__capguard_globals__(\"p\", typeof exports === \"undefined\" ? null : { exports, "
      "require });\n__cgd__.require('fs');\n";
  EXPECT_EQ(unbound(src, SourceType::kDetect, capguard::analysis_options()), Names{"__cgd__"});
  EXPECT_EQ(unbound(src), (Names{"globalThis", "exports", "exports", "require"}));
}

}  // namespace
}  // namespace capguard::js
