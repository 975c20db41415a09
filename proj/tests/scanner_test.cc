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
#include "capguard/scanner.h"
#include "test_util.h"

namespace capguard {
namespace {

using testing::TempDir;
using testing::write_file;
using testing::write_manifest;
using testing::write_project;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIoFailure;
}

TEST(Scanner, DiscoversNestedAndScopedPackages) {
  TempDir t;
  write_project(t.path(), "app", {{"index.js", "require('a');\n"}, {"lib/util.mjs", "export {};\n"}},
                R"({"a": "^1.0.0", "@s/b": "2"})");
  write_manifest(t / "node_modules/a", "a", "1.2.3", R"({"c": "*"})");
  write_file(t / "node_modules/a/index.js", "module.exports = 1;\n");
  write_manifest(t / "node_modules/a/node_modules/c", "c", "0.1.0");
  write_file(t / "node_modules/a/node_modules/c/c.cjs", "\n");
  write_manifest(t / "node_modules/@s/b", "@s/b", "2.0.0");
  write_file(t / "node_modules/@s/b/lib/b.js", "\n");
  write_file(t / "node_modules/@s/b/README.md", "text\n");

  const DependencyGraph g = discover_packages(t.path());
  EXPECT_EQ(g.root_package, "app");
  ASSERT_EQ(g.packages.size(), 4u);
  EXPECT_EQ(g.packages.at("a").version, "1.2.3");
  EXPECT_EQ(g.packages.at("app").declared_runtime_deps, (std::set<std::string>{"@s/b", "a"}));
  std::vector<std::string> rel;
  for (const auto& f : g.files) rel.push_back(f.relative_path + "=" + f.owning_package);
  EXPECT_EQ(rel, (std::vector<std::string>{"index.js=app", "lib/util.mjs=app", "node_modules/@s/b/lib/b.js=@s/b",
                                           "node_modules/a/index.js=a", "node_modules/a/node_modules/c/c.cjs=c"}));
}

TEST(Scanner, MapsFilesToDeepestPackage) {
  TempDir t;
  write_project(t.path(), "app", {});
  write_manifest(t / "node_modules/a", "a", "1.0.0");
  write_manifest(t / "node_modules/a/node_modules/b", "b", "1.0.0");
  const DependencyGraph g = discover_packages(t.path());
  EXPECT_EQ(map_file_to_package(t / "x.js", g), "app");
  EXPECT_EQ(map_file_to_package(t / "node_modules/a/lib/x.js", g), "a");
  EXPECT_EQ(map_file_to_package(t / "node_modules/a/node_modules/b/x.js", g), "b");
  EXPECT_EQ(code_of([&] { map_file_to_package("/elsewhere/x.js", g); }), ErrorCode::kUnownedPath);
}

TEST(Scanner, MissingManifestOrLockfile) {
  TempDir t;
  EXPECT_EQ(code_of([&] { discover_packages(t.path()); }), ErrorCode::kMissingManifest);
  write_manifest(t.path(), "app", "1.0.0");
  EXPECT_EQ(code_of([&] { discover_packages(t.path()); }), ErrorCode::kMissingLockfile);
  EXPECT_EQ(code_of([&] { discover_packages(t / "absent"); }), ErrorCode::kMissingManifest);
}

TEST(Scanner, InvalidVersionsAreWarnedAndNormalized) {
  TempDir t;
  write_project(t.path(), "app", {});
  write_manifest(t / "node_modules/a", "a", "not-a-version");
  const DependencyGraph g = discover_packages(t.path());
  EXPECT_EQ(g.packages.at("a").version, "0.0.0");
  EXPECT_FALSE(g.warnings.empty());
}

TEST(Scanner, EmptyProject) {
  TempDir t;
  write_project(t.path(), "empty", {});
  const DependencyGraph g = discover_packages(t.path());
  EXPECT_EQ(g.packages.size(), 1u);
  EXPECT_TRUE(g.files.empty());
}

TEST(Scanner, VerifyDependencyUsage) {
  TempDir t;
  write_project(t.path(), "app", {{"index.js", "const a = require('used-dep');\n"}},
                R"({"used-dep": "1", "unused-dep": "1", "@types/node": "1"})");
  const DependencyGraph g = discover_packages(t.path());
  const DependencyUsage u = verify_dependency_usage(g.packages.at("app"), g.files_of("app"));
  EXPECT_EQ(u.used, (std::set<std::string>{"used-dep"}));
}

TEST(Scanner, JsPathsAndSemver) {
  EXPECT_TRUE(is_js_path("a/b.js"));
  EXPECT_TRUE(is_js_path("a.mjs"));
  EXPECT_TRUE(is_js_path("a.cjs"));
  EXPECT_FALSE(is_js_path("a.json"));
  EXPECT_FALSE(is_js_path("a.ts"));
  EXPECT_TRUE(is_semver("1.2.3"));
  EXPECT_TRUE(is_semver("1.2.3-beta.1+build.5"));
  EXPECT_FALSE(is_semver("1.2"));
  EXPECT_FALSE(is_semver("01.2.3"));
}

}  // namespace
}  // namespace capguard
