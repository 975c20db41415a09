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

#include <functional>
#include <string>

#include "capguard/js/ast.h"
#include "capguard/js/parser.h"
#include "test_util.h"

namespace capguard::js {
namespace {

using capguard::testing::corpus_dir;
using capguard::testing::data_dir;
using capguard::testing::read_file;

// Node counts from acorn 8 (tests/oracle/count_nodes.js), frozen.
struct FrozenCount {
  const char* path;
  size_t nodes;
  bool module;
};

constexpr FrozenCount kFrozen[] = {
    {"data/parser/syntax-tour.js", 596, false},
    {"data/parser/module-tour.mjs", 115, true},
    {"corpus/express-app/node_modules/express/lib/response.js", 2431, false},
    {"corpus/express-app/node_modules/qs/lib/stringify.js", 1537, false},
    {"corpus/express-app/node_modules/debug/src/common.js", 817, false},
};

TEST(Parser, NodeCountsMatchAcorn) {
  for (const auto& f : kFrozen) {
    SCOPED_TRACE(f.path);
    const std::string source = read_file(capguard::testing::source_dir() / "tests" / f.path);
    ASSERT_FALSE(source.empty());
    const bool mjs = std::string(f.path).ends_with(".mjs");
    ParseResult r = parse_source(source, mjs ? SourceType::kModule : SourceType::kDetect);
    ASSERT_TRUE(r.ok()) << r.error().message << " at " << r.error().line << ":" << r.error().column;
    EXPECT_EQ(count_nodes(*r.ast().root()), f.nodes);
    EXPECT_EQ(r.ast().is_module(), f.module);
  }
}

TEST(Parser, DetectFallsBackToModule) {
  ParseResult script = parse_source("return 1;", SourceType::kDetect);
  ASSERT_TRUE(script.ok());
  EXPECT_FALSE(script.ast().is_module());

  ParseResult module = parse_source("import x from 'y';\nexport default x;", SourceType::kDetect);
  ASSERT_TRUE(module.ok());
  EXPECT_TRUE(module.ast().is_module());

  EXPECT_FALSE(parse_source("return 1;", SourceType::kModule).ok());
  EXPECT_FALSE(parse_source("import x from 'y';", SourceType::kScript).ok());
}

TEST(Parser, RegexAndDivisionAreDistinguished) {
  ParseResult r = parse_source("var a = 4 / 2 / 1; var b = /=/.test('=') ? a /= 2 : 0; x = y\n/re/g.exec(z);");
  ASSERT_TRUE(r.ok()) << r.error().message;
}

TEST(Parser, ArrowAndParenthesizedCoverGrammar) {
  for (const char* src : {"(a, b) => a + b;", "(a = 1, {b}, [c], ...d) => 0;", "async (x) => await x;",
                          "(a, b);", "async(x);", "({a} = {});", "[a, b] = [b, a];", "x => y => z;"}) {
    SCOPED_TRACE(src);
    EXPECT_TRUE(parse_source(src).ok());
  }
}

TEST(Parser, RejectsInvalidPrograms) {
  for (const char* src : {
           "const = ;",
           "let let = 1;",
           "function (a) {}",
           "a => { ;",
           "({a: 1} = {});",
           "(a, b) => { 'use strict'; with (a) {} }",
           "class A { constructor() {} constructor() {} }",
           "x = { get a(b) {} };",
           "for (let of x);",
           "'\\u{110000}';",
           "a ?? b || c;",
           "new.target;",
           "yield = function* () { yield = 1; };",
           "async function f() { await => 1; }",
           "`unterminated",
           "/unterminated",
           "1 = 2;",
           "break;",
           "label: label: x;",
       }) {
    SCOPED_TRACE(src);
    ParseResult r = parse_source(src, SourceType::kDetect);
    EXPECT_FALSE(r.ok());
  }
}

TEST(Parser, FailureCarriesLocation) {
  ParseResult r = parse_source("var ok = 1;\nvar = 2;\n", SourceType::kScript);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().line, 2u);
  EXPECT_EQ(r.error().column, 4u);
  EXPECT_FALSE(r.error().message.empty());
}

TEST(Parser, HashbangAndDirectives) {
  ParseResult r = parse_source("#!/usr/bin/env node\n'use strict';\n'other';\nfoo();\n");
  ASSERT_TRUE(r.ok());
  const Node* program = r.ast().root();
  ASSERT_EQ(program->list.size(), 3u);
  EXPECT_TRUE(program->list[0]->has(flag::kDirective));
  EXPECT_TRUE(program->list[1]->has(flag::kDirective));
  EXPECT_FALSE(program->list[2]->has(flag::kDirective));
}

TEST(Parser, SpansPointIntoSource) {
  const std::string src = "const value = Buffer.from(\"x\");";
  ParseResult r = parse_source(src);
  ASSERT_TRUE(r.ok());
  bool found = false;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.is(NodeType::kIdentifier) && n.name == "Buffer") {
      EXPECT_EQ(src.substr(n.start, n.end - n.start), "Buffer");
      found = true;
    }
    for_each_child(n, [&](const Node& c) { walk(c); });
  };
  walk(*r.ast().root());
  EXPECT_TRUE(found);
}

TEST(Parser, StrictModeRules) {
  EXPECT_FALSE(parse_source("'use strict'; var eval = 1;", SourceType::kScript).ok());
  EXPECT_FALSE(parse_source("'use strict'; with (a) {}", SourceType::kScript).ok());
  EXPECT_TRUE(parse_source("with (a) {}", SourceType::kScript).ok());
  EXPECT_FALSE(parse_source("with (a) {}", SourceType::kModule).ok());
  EXPECT_FALSE(parse_source("'use strict'; 010;", SourceType::kScript).ok());
}

}  // namespace
}  // namespace capguard::js
