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
#include "capguard/policy.h"
#include "cases.h"
#include "properties.h"

namespace capguard {
namespace {

using testing::read_file;

Policy figure_policy() {
  Policy p;
  p.member_access_tracing = true;
  p.coarse["ast-package"] = {{"fs"}, {"require"}};
  p.fine["ast-package"] = {{"fs.readFile"}, {}};
  return p;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIoFailure;
}

TEST(Policy, SerializesLikeTheExampleFigure) {
  EXPECT_EQ(serialize_policy(figure_policy()),
            read_file(testing::fixtures_dir() / "ast-package" / "expected-policy.json"));
}

TEST(Policy, EmptyPolicy) {
  const std::string bytes = serialize_policy(Policy{});
  EXPECT_EQ(bytes, "{\n  \"memberAccessTracing\": false,\n  \"policyCoarse\": {},\n  \"policyFine\": {}\n}\n");
  EXPECT_EQ(parse_policy(R"({"memberAccessTracing": false, "policyCoarse": {}, "policyFine": {}})"), Policy{});
}

TEST(Policy, RoundTrip) {
  Policy p = figure_policy();
  p.coarse["@scope/x"] = {{"node:path", "lodash/fp"}, {"Buffer", "process"}};
  p.fine["@scope/x"] = {{"node:path.join"}, {"Buffer.*", "process.env"}};
  p.coarse["quote\"pkg"] = {};
  EXPECT_EQ(parse_policy(serialize_policy(p)), p);
}

TEST(Policy, TracingOffDropsFineSection) {
  Policy p = figure_policy();
  p.member_access_tracing = false;
  const Policy back = parse_policy(serialize_policy(p));
  EXPECT_TRUE(back.fine.empty());
  EXPECT_EQ(back.coarse, p.coarse);
}

TEST(Policy, RejectsMalformedDocuments) {
  for (const char* text : {
           "",
           "[]",
           "{\"memberAccessTracing\": true,",
           R"({"policyCoarse": {}, "policyFine": {}})",
           R"({"memberAccessTracing": "yes", "policyCoarse": {}, "policyFine": {}})",
           R"({"memberAccessTracing": false, "policyCoarse": {}, "policyFine": {}, "extra": 1})",
           R"({"memberAccessTracing": false, "policyCoarse": {"a": {"modules": []}}, "policyFine": {}})",
           R"({"memberAccessTracing": false, "policyCoarse": {"a": {"modules": [1], "globals": []}}})",
           R"({"memberAccessTracing": false, "policyCoarse": {"a": {"modules": [], "globals": [], "x": []}}})",
           R"({"memberAccessTracing": true, "policyCoarse": {}, "policyFine": {"a": {"modules": ["fs.readFile"], "globals": []}}})",
       }) {
    SCOPED_TRACE(text);
    EXPECT_EQ(code_of([&] { parse_policy(text); }), ErrorCode::kMalformedPolicy);
  }
}

TEST(Policy, MalformedJsonReportsLineAndColumn) {
  try {
    parse_policy("{\n  \"memberAccessTracing\": tru\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.subject().substr(0, 2), "2:");
  }
}

TEST(Policy, SplitDotted) {
  EXPECT_EQ(split_dotted("fs.readFile"), (std::pair<std::string, std::string>{"fs", "readFile"}));
  EXPECT_EQ(split_dotted("node:fs.readFile"), (std::pair<std::string, std::string>{"node:fs", "readFile"}));
  EXPECT_EQ(split_dotted("Buffer"), (std::pair<std::string, std::string>{"Buffer", ""}));
}

TEST(Policy, BuildUnionsFilesPerPackage) {
  DependencyGraph g;
  g.project_root = "/p";
  g.root_package = "app";
  g.packages["app"] = PackageDescriptor{"app", "1.0.0", "/p", {}};
  g.packages["dep"] = PackageDescriptor{"dep", "1.0.0", "/p/node_modules/dep", {}};
  g.package_dirs = {{"", "app"}, {"node_modules/dep", "dep"}};
  g.files = {{"/p/a.js", "a.js", "app", 1}, {"/p/node_modules/dep/b.js", "node_modules/dep/b.js", "dep", 1}};
  std::vector<FileCapabilities> files = {
      analyze_text("const fs = require('fs'); fs.readFile();", "a.js", builtin_globals(), true),
      analyze_text("process.exit();", "node_modules/dep/b.js", builtin_globals(), true),
  };
  const Policy p = build_policy(g, files, true);
  EXPECT_EQ(p.coarse.at("app"), (PackagePolicyEntry{{"fs"}, {"require"}}));
  EXPECT_EQ(p.fine.at("app"), (PackagePolicyEntry{{"fs.readFile"}, {}}));
  EXPECT_EQ(p.coarse.at("dep"), (PackagePolicyEntry{{}, {"process"}}));
  EXPECT_EQ(p.fine.at("dep"), (PackagePolicyEntry{{}, {"process.exit"}}));
  EXPECT_TRUE(fine_within_coarse(p));
  EXPECT_TRUE(build_policy(g, files, false).fine.empty());
}

TEST(Policy, RandomizedSupersetAndDeterminism) {
  const auto outcome = testing::run_policy_properties(100, 7);
  EXPECT_EQ(outcome.failures, 0u) << outcome.first_failure;
}

TEST(Diff, StoredCasesMatch) {
  const auto cases = testing::load_diff_cases();
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    SCOPED_TRACE(c.old_version + " -> " + c.new_version);
    const PolicyDiff d =
        diff_policies(parse_policy(c.old_policy.dump()), parse_policy(c.new_policy.dump()), c.old_version, c.new_version);
    EXPECT_EQ(semver_level_name(d.semver_level), c.semver);
    EXPECT_EQ(change_class_name(d.change_class), c.change_class);
  }
}

TEST(Diff, ReportsAddedAndRemoved) {
  Policy a;
  a.coarse["x"] = {{"fs"}, {"process"}};
  Policy b;
  b.coarse["x"] = {{"http"}, {"process"}};
  const PolicyDiff d = diff_policies(a, b, "1.0.0", "1.0.1");
  EXPECT_EQ(d.new_modules, (PackageSets{{"x", {"http"}}}));
  EXPECT_EQ(d.removed_modules, (PackageSets{{"x", {"fs"}}}));
  EXPECT_TRUE(d.new_globals.empty());
  EXPECT_EQ(d.change_class, ChangeClass::kModulesOnly);
}

TEST(Diff, Errors) {
  Policy traced;
  traced.member_access_tracing = true;
  EXPECT_EQ(code_of([&] { diff_policies(Policy{}, traced, "1.0.0", "1.0.1"); }), ErrorCode::kTracingMismatch);
  EXPECT_EQ(code_of([&] { classify_semver("1.0", "1.0.1"); }), ErrorCode::kBadVersion);
  EXPECT_EQ(classify_semver("v1.0.0", "1.0.1"), SemverLevel::kPatch);
}

CapabilityUniverse small_universe() {
  MembersCatalog members;
  members.set_module("fs", {"readFile", "writeFile", "stat"});
  members.set_module("path", {"join"});
  members.set_global("Buffer", {"from", "alloc"});
  return make_universe(NameCatalog({"Buffer", "process"}, "g"), NameCatalog({"fs", "path"}, "m"), members);
}

TEST(Stats, HandCountedSmallUniverse) {
  const CapabilityUniverse u = small_universe();
  EXPECT_EQ(u.coarse.size(), 4u);
  EXPECT_EQ(u.fine.size(), 7u);
  Policy p;
  p.member_access_tracing = true;
  p.coarse["a"] = {{"fs", "lodash"}, {"process"}};
  p.fine["a"] = {{"fs.readFile", "lodash.map"}, {}};
  const ReductionStats coarse = reduction_stats(p, u, false);
  EXPECT_EQ(coarse.available, 4u);
  EXPECT_EQ(coarse.used, 2u);
  EXPECT_DOUBLE_EQ(coarse.unused_fraction, 0.5);
  const ReductionStats fine = reduction_stats(p, u, true);
  EXPECT_EQ(fine.used, 2u);  // fs.readFile and the memberless process
  EXPECT_DOUBLE_EQ(fine.unused_fraction, 5.0 / 7.0);
}

TEST(Stats, WildcardExpandsAndNodePrefixNormalizes) {
  Policy p;
  p.member_access_tracing = true;
  p.coarse["a"] = {{"node:fs"}, {"Buffer"}};
  p.fine["a"] = {{"node:fs.*"}, {"Buffer.from"}};
  const ReductionStats s = reduction_stats(p, small_universe(), true);
  EXPECT_EQ(s.used, 4u);
}

TEST(Stats, OneOfHundredAndOneMembers) {
  std::vector<std::string> fs_members;
  fs_members.push_back("readFile");
  for (int i = 1; i < 101; ++i) fs_members.push_back("m" + std::to_string(i));
  MembersCatalog members;
  members.set_module("fs", fs_members);
  const CapabilityUniverse u = make_universe(NameCatalog({}, "g"), NameCatalog({"fs"}, "m"), members);
  Policy p;
  p.member_access_tracing = true;
  p.coarse["ast-package"] = {{"fs"}, {}};
  p.fine["ast-package"] = {{"fs.readFile"}, {}};
  const ReductionStats s = reduction_stats(p, u, true);
  EXPECT_EQ(s.available, 101u);
  EXPECT_EQ(s.used, 1u);
  EXPECT_DOUBLE_EQ(s.unused_fraction, 100.0 / 101.0);
}

TEST(Stats, EmptyUniverseThrows) {
  const CapabilityUniverse empty = make_universe(NameCatalog({}, "g"), NameCatalog({}, "m"), MembersCatalog{});
  EXPECT_EQ(code_of([&] { reduction_stats(Policy{}, empty, false); }), ErrorCode::kEmptyUniverse);
}

TEST(Stats, ReportHasPerPackageRows) {
  Policy p;
  p.coarse["a"] = {{"fs"}, {}};
  p.coarse["b"] = {{}, {}};
  const StatsReport r = stats_report(p, small_universe());
  EXPECT_FALSE(r.has_fine);
  EXPECT_EQ(r.coarse_by_package.at("a").used, 1u);
  EXPECT_EQ(r.coarse_by_package.at("b").used, 0u);
  EXPECT_DOUBLE_EQ(r.coarse_by_package.at("b").unused_fraction, 1.0);
}

}  // namespace
}  // namespace capguard
