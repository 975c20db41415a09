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

#ifndef CAPGUARD_CLI_H_
#define CAPGUARD_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "capguard/catalog.h"
#include "capguard/extractor.h"
#include "capguard/policy.h"
#include "capguard/scanner.h"

namespace capguard::cli {

enum class OutputFormat { kHuman, kRecords };

// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPolicyChanged = 2;

struct Catalogs {
  NameCatalog globals;
  NameCatalog modules;
  MembersCatalog members;
};

// Catalogs from `dir` (globals.txt, builtin-modules.txt, members.txt); a
// missing file, or no directory at all, selects the compiled-in catalog.
Catalogs load_catalogs(const std::optional<std::filesystem::path>& dir);

struct InferResult {
  DependencyGraph graph;
  std::vector<FileCapabilities> files;
  Policy policy;
  double elapsed_ms = 0;
};

InferResult infer_project(const std::filesystem::path& project_root, const Catalogs& catalogs, bool tracing);

// Third-party package a module specifier resolves to (`lodash/fp` is
// `lodash`), or empty for built-ins.
std::string third_party_root(const std::string& specifier, const NameCatalog& modules);

struct Streams {
  std::ostream& out;
  std::ostream& err;
  OutputFormat format = OutputFormat::kHuman;
};

int cmd_infer(const std::filesystem::path& project_root, bool tracing,
              const std::optional<std::filesystem::path>& output, const Catalogs& catalogs, const Streams& io);

int cmd_instrument(const std::filesystem::path& project_root, const std::filesystem::path& out_root,
                   const Catalogs& catalogs, const Streams& io);

// 0 when no capability was added, 2 otherwise.
int cmd_diff(const std::filesystem::path& old_policy, const std::filesystem::path& new_policy,
             const std::string& old_version, const std::string& new_version, const Streams& io);

int cmd_stats(const std::filesystem::path& policy, const Catalogs& catalogs, const Streams& io);

int cmd_verify(const std::filesystem::path& project_root, const Catalogs& catalogs, const Streams& io);

struct RunOptions {
  std::filesystem::path project_root;
  std::optional<std::filesystem::path> policy;  // default: <root>/capability-policy.json
  std::filesystem::path entry;                  // relative to the root, or absolute inside it
  std::vector<std::string> args;
  std::optional<std::filesystem::path> shim;    // default: $CAPGUARD_SHIM, then the bundled shim
  std::string node = "node";
  std::optional<std::filesystem::path> out_root;  // default: a fresh temporary directory, removed afterwards
  bool allow_unparsable = false;
};

// Instruments the project, then runs the entry script from the shadow tree
// under the shim with CAPGUARD_POLICY set. Returns the child's exit status,
// or 128 + signal number.
int cmd_run(const RunOptions& options, const Catalogs& catalogs, const Streams& io);

// Path of the shim shipped with the sources.
std::filesystem::path bundled_shim();

}  // namespace capguard::cli

#endif  // CAPGUARD_CLI_H_
