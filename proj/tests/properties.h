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

#ifndef CAPGUARD_TESTS_PROPERTIES_H_
#define CAPGUARD_TESTS_PROPERTIES_H_

#include <random>
#include <string>
#include <vector>

#include "capguard/cli.h"
#include "capguard/policy.h"
#include "test_util.h"

namespace capguard::testing {

struct PropertyOutcome {
  size_t trees = 0;
  size_t failures = 0;
  std::string first_failure;
};

// Random JavaScript built from fragments that exercise imports, members,
// destructuring and shadowing.
inline std::string random_source(std::mt19937& rng) {
  static const std::vector<std::string> kModules = {"fs", "path", "os", "http", "child_process", "lodash",
                                                    "node:crypto", "./local", "@scope/pkg/sub"};
  static const std::vector<std::string> kGlobals = {"Buffer", "process", "console", "JSON", "Math", "setTimeout"};
  static const std::vector<std::string> kMembers = {"a", "from", "readFile", "env", "log", "join", "spawn"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  std::string out = rng() % 4 == 0 ? "'use strict';\n" : "";
  const int lines = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < lines; ++i) {
    const std::string n = std::to_string(i);
    switch (rng() % 10) {
      case 0:
        out += "const v" + n + " = require('" + pick(kModules) + "');\nv" + n + "." + pick(kMembers) + "();\n";
        break;
      case 1:
        out += pick(kGlobals) + "." + pick(kMembers) + "(x" + n + ");\n";
        break;
      case 2: {
        const std::string g = pick(kGlobals);
        out += "function f" + n + "(" + g + ") { return " + g + "." + pick(kMembers) + "; }\n";
        break;
      }
      case 3:
        out += "const { " + pick(kMembers) + ": d" + n + " } = require('" + pick(kModules) + "');\n";
        break;
      case 4:
        out += pick(kGlobals) + "[k" + n + "];\n";
        break;
      case 5:
        out += "import('" + pick(kModules) + "').then((m) => m);\n";
        break;
      case 6:
        out += "{ let " + pick(kGlobals) + " = 1; }\n";
        break;
      case 7:
        out += "module.exports." + pick(kMembers) + " = " + pick(kGlobals) + ";\n";
        break;
      case 8:
        out += "/* " + pick(kGlobals) + " */ const o" + n + " = { " + pick(kGlobals) + ": 1, " + pick(kMembers) +
               " };\n";
        break;
      default:
        out += "require(name" + n + ");\n";
        break;
    }
  }
  return out;
}

inline void random_tree(const std::filesystem::path& root, std::mt19937& rng) {
  write_project(root, "root-app", {});
  const int packages = static_cast<int>(rng() % 4);
  std::vector<std::filesystem::path> dirs = {root};
  for (int p = 0; p < packages; ++p) {
    const std::string name = "pkg" + std::to_string(p);
    const auto dir = root / "node_modules" / name;
    write_manifest(dir, name, std::to_string(rng() % 3) + ".1.0");
    dirs.push_back(dir);
  }
  for (const auto& dir : dirs) {
    const int files = 1 + static_cast<int>(rng() % 3);
    for (int f = 0; f < files; ++f) {
      write_file(dir / ("lib/f" + std::to_string(f) + (rng() % 5 == 0 ? ".cjs" : ".js")), random_source(rng));
    }
  }
}

// Builds the policy of each random tree twice and checks that the fine
// section projects into the coarse one, that both builds serialize to the
// same bytes, and that parsing the bytes gives the policy back.
inline PropertyOutcome run_policy_properties(size_t trees, uint32_t seed) {
  PropertyOutcome outcome;
  std::mt19937 rng(seed);
  const cli::Catalogs catalogs = cli::load_catalogs(std::nullopt);
  for (size_t i = 0; i < trees; ++i) {
    TempDir dir;
    random_tree(dir.path(), rng);
    std::string failure;
    try {
      const Policy first = cli::infer_project(dir.path(), catalogs, true).policy;
      const Policy second = cli::infer_project(dir.path(), catalogs, true).policy;
      const std::string bytes = serialize_policy(first);
      if (!fine_within_coarse(first)) failure = "fine not within coarse";
      else if (bytes != serialize_policy(second)) failure = "double build differs";
      else if (!(parse_policy(bytes) == first)) failure = "round trip differs";
    } catch (const std::exception& e) {
      failure = e.what();
    }
    ++outcome.trees;
    if (!failure.empty()) {
      if (outcome.failures++ == 0) outcome.first_failure = "tree " + std::to_string(i) + ": " + failure;
    }
  }
  return outcome;
}

}  // namespace capguard::testing

#endif  // CAPGUARD_TESTS_PROPERTIES_H_
