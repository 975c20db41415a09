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

#include "capguard/errors.h"
#include "capguard/instrumenter.h"
#include "corpus_checks.h"

namespace capguard {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;
using testing::write_project;

InstrumentedSource instrument(const std::string& src, const std::string& file = "a.js") {
  return instrument_source(src, file, "pkg", builtin_globals());
}

std::string body_after_prelude(const std::string& text) { return text.substr(text.find('\n') + 1); }

TEST(Instrumenter, RewritesBufferFrom) {
  const InstrumentedSource r = instrument("Buffer.from(x)");
  ASSERT_TRUE(r.parse_ok);
  ASSERT_EQ(r.plan.replacements.size(), 1u);
  EXPECT_EQ(r.plan.replacements[0].start, 0u);
  EXPECT_EQ(r.plan.replacements[0].end, 6u);
  EXPECT_EQ(r.text,
            "const __cgd__ = globalThis.__capguard_globals__(\"pkg\", typeof exports === \"undefined\" ? null : "
            "{ exports, require, module, __filename, __dirname });\n__cgd__.Buffer.from(x)");
}

TEST(Instrumenter, ShadowedEverywhereIsUntouched) {
  const std::string src = "let Buffer = 1; Buffer + 1";
  const InstrumentedSource r = instrument(src);
  EXPECT_TRUE(r.plan.replacements.empty());
  EXPECT_FALSE(r.plan.prelude_needed);
  EXPECT_EQ(r.text, src);
}

TEST(Instrumenter, TwoReplacements) {
  const InstrumentedSource r = instrument("console.log(process.env.HOME);");
  ASSERT_EQ(r.plan.replacements.size(), 2u);
  EXPECT_EQ(r.plan.replacements[0].name, "console");
  EXPECT_EQ(r.plan.replacements[1].name, "process");
  EXPECT_EQ(body_after_prelude(r.text), "__cgd__.console.log(__cgd__.process.env.HOME);");
}

TEST(Instrumenter, NoGlobalsMeansNoChange) {
  const std::string src = "function add(a, b) { return a + b; }\n";
  const InstrumentedSource r = instrument(src);
  EXPECT_EQ(r.text, src);
}

TEST(Instrumenter, SecondPassMakesNoReplacements) {
  const InstrumentedSource first = instrument("Buffer.from(process.argv[2]);\n");
  const InstrumentedSource second = instrument(first.text);
  EXPECT_TRUE(second.parse_ok);
  EXPECT_TRUE(second.plan.replacements.empty());
  EXPECT_EQ(second.text, first.text);
}

TEST(Instrumenter, ShorthandPropertyKeepsItsKey) {
  const InstrumentedSource r = instrument("const o = { process, x: 1 };");
  EXPECT_EQ(body_after_prelude(r.text), "const o = { process: __cgd__.process, x: 1 };");
}

TEST(Instrumenter, KeysMembersAndDeclarationsAreUntouched) {
  const InstrumentedSource r = instrument("obj.process = { Buffer: 1 }; class A { console() {} } console.log(1);");
  ASSERT_EQ(r.plan.replacements.size(), 1u);
  EXPECT_EQ(body_after_prelude(r.text),
            "obj.process = { Buffer: 1 }; class A { console() {} } __cgd__.console.log(1);");
}

TEST(Instrumenter, PreludeFollowsHashbangAndDirectives) {
  EXPECT_EQ(instrument("#!/usr/bin/env node\nconsole.log(1);\n").text.substr(0, 26),
            "#!/usr/bin/env node\nconst ");
  const std::string strict = instrument("'use strict';\nconsole.log(1);\n").text;
  EXPECT_EQ(strict.substr(0, 20), "'use strict';\nconst ");
  EXPECT_NE(strict.find(");\n__cgd__.console"), std::string::npos);
  const std::string only_hashbang = instrument("#!/bin/node").text;
  EXPECT_EQ(only_hashbang, "#!/bin/node");
}

TEST(Instrumenter, ModulesPassNullWrapper) {
  const InstrumentedSource r = instrument("import x from 'y';\nconsole.log(x);\n", "a.mjs");
  EXPECT_EQ(r.text.substr(0, r.text.find('\n')),
            "const __cgd__ = globalThis.__capguard_globals__(\"pkg\", null);");
}

TEST(Instrumenter, RebindingsShapeThePrelude) {
  const InstrumentedSource r = instrument("var require = null, globalThis = {};\nconsole.log(module);\n");
  EXPECT_EQ(r.text.substr(0, r.text.find('\n')),
            "const __cgd__ = global.__capguard_globals__(\"pkg\", typeof exports === \"undefined\" ? null : "
            "{ exports, module, __filename, __dirname });");
}

TEST(Instrumenter, InjectedNameAvoidsCollisions) {
  const InstrumentedSource r = instrument("var __cgd__ = 1, __cgd__1 = 2;\nprocess.exit(__cgd__);\n");
  EXPECT_EQ(r.plan.injected_name, "__cgd__2");
  EXPECT_NE(r.text.find("__cgd__2.process.exit(__cgd__)"), std::string::npos);
}

TEST(Instrumenter, PackageNameIsEscaped) {
  const InstrumentedSource r = instrument_source("process;", "a.js", "we\"ird", builtin_globals());
  EXPECT_NE(r.text.find("(\"we\\\"ird\""), std::string::npos);
}

TEST(Instrumenter, SpanMismatchIsDetected) {
  auto analyzed = analyze_source("Buffer.from(x)", js::SourceType::kDetect);
  RewritePlan plan = plan_rewrites("Buffer.from(x)", *analyzed, builtin_globals());
  try {
    apply_rewrites("Bufer.from(x)", plan, "__cgd__");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpanMismatch);
  }
  plan.replacements.push_back(plan.replacements.front());
  EXPECT_THROW(apply_rewrites("Buffer.from(x)", plan, "__cgd__"), Error);
}

TEST(Instrumenter, UnparsableSourceIsReturnedUnchanged) {
  const InstrumentedSource r = instrument("let = ;");
  EXPECT_FALSE(r.parse_ok);
  EXPECT_EQ(r.text, "let = ;");
}

TEST(Instrumenter, CorpusIdempotenceAndCompleteness) {
  const auto outcome = testing::check_instrumentation(testing::instrumentation_sources());
  EXPECT_GT(outcome.files, 250u);
  EXPECT_GT(outcome.rewritten, 200u);
  EXPECT_EQ(outcome.failures, 0u) << outcome.first_failure;
}

TEST(InstrumentTree, MirrorsTreeAndRewritesJavaScript) {
  TempDir src;
  write_project(src.path(), "app",
                {{"a.js", "console.log(1);\n"}, {"b.js", "module.exports = 1;\n"}, {"c.js", "var x = 1;\n"},
                 {"img.png", std::string("\x89PNG\r\n\x1a\n\0\x01", 10)}});
  write_file(src / ".git/HEAD", "ref\n");
  const DependencyGraph g = discover_packages(src.path());
  TempDir out;
  const InstrumentReport r = instrument_tree(g, out / "shadow", builtin_globals());
  EXPECT_EQ(r.files, 6u);  // three scripts, the image, package.json, package-lock.json
  EXPECT_EQ(r.rewritten, 2u);
  EXPECT_EQ(r.copied, 4u);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(read_file(out / "shadow/img.png"), read_file(src / "img.png"));
  EXPECT_EQ(read_file(out / "shadow/c.js"), "var x = 1;\n");
  EXPECT_NE(read_file(out / "shadow/a.js").find("__cgd__.console"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(out / "shadow/.git"));
}

TEST(InstrumentTree, EmptyTreeAndUnparsableFiles) {
  TempDir src;
  write_project(src.path(), "app", {{"bad.js", "let = ;\n"}});
  const DependencyGraph g = discover_packages(src.path());
  TempDir out;
  const InstrumentReport r = instrument_tree(g, out.path(), builtin_globals());
  EXPECT_EQ(r.unparsable, std::vector<std::string>{"bad.js"});
  EXPECT_EQ(read_file(out / "bad.js"), "let = ;\n");
}

TEST(InstrumentTree, RefusesNonEmptyOutput) {
  TempDir src;
  write_project(src.path(), "app", {});
  const DependencyGraph g = discover_packages(src.path());
  TempDir out;
  write_file(out / "existing", "x");
  EXPECT_THROW(instrument_tree(g, out.path(), builtin_globals()), Error);
}

TEST(InstrumentTree, SkipsOutputInsideProject) {
  TempDir src;
  write_project(src.path(), "app", {{"a.js", "process;\n"}});
  const DependencyGraph g = discover_packages(src.path());
  const InstrumentReport r = instrument_tree(g, src / "shadow", builtin_globals());
  EXPECT_EQ(r.files, 3u);
  EXPECT_FALSE(std::filesystem::exists(src / "shadow/shadow"));
}

}  // namespace
}  // namespace capguard
