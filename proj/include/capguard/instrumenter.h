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

#ifndef CAPGUARD_INSTRUMENTER_H_
#define CAPGUARD_INSTRUMENTER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capguard/catalog.h"
#include "capguard/extractor.h"
#include "capguard/prelude.h"
#include "capguard/scanner.h"

namespace capguard {

// One identifier use to route through the injected object.
struct Replacement {
  uint32_t start = 0;
  uint32_t end = 0;
  std::string name;
  bool shorthand = false;  // `{ G }` becomes `{ G: <inj>.G }`
};

struct RewritePlan {
  std::string file;
  std::string package;
  std::vector<Replacement> replacements;  // sorted, non-overlapping
  bool prelude_needed = false;

  // Where the prelude goes: after the hashbang line and directive prologue.
  uint32_t prelude_offset = 0;
  enum class Placement : uint8_t { kBeforeLine, kAfterText } placement = Placement::kBeforeLine;
  // Object the registration hook lives on.
  std::string hook_object = "globalThis";
  // CommonJS wrapper names the file does not rebind at top level; empty for
  // module code.
  std::vector<std::string> wrapper_names;
  // Injected identifier that collides with nothing in the file.
  std::string injected_name = std::string(kDefaultInjectedName);
};

// `__cgd__`, or `__cgd__<n>` for the smallest n that is free in the file.
std::string choose_injected_name(const js::ScopeAnalysis& scopes);

// Marks exactly the identifier uses extract_globals reports. `analyzed` must
// come from `source`.
RewritePlan plan_rewrites(std::string_view source, const AnalyzedSource& analyzed, const NameCatalog& catalog);

// The single prelude line, without a line terminator.
std::string prelude_line(const RewritePlan& plan, std::string_view injected_name);

// Throws Error(kSpanMismatch) if the plan does not fit `source`.
std::string apply_rewrites(std::string_view source, const RewritePlan& plan, std::string_view injected_name);

struct InstrumentedSource {
  bool parse_ok = false;
  RewritePlan plan;
  std::string text;  // the input unchanged when nothing was replaced
};

InstrumentedSource instrument_source(std::string_view source, const std::string& file, const std::string& package,
                                     const NameCatalog& catalog);

struct InstrumentReport {
  uint64_t files = 0;
  uint64_t rewritten = 0;
  uint64_t copied = 0;
  uint64_t replacements = 0;
  std::vector<std::string> unparsable;                        // relative paths
  std::vector<std::pair<std::string, std::string>> failures;  // path, message
};

// Mirrors graph.project_root into out_root, rewriting JavaScript files.
// Throws Error(kIoFailure) unless out_root is empty or absent; per-file
// failures are collected in the report.
InstrumentReport instrument_tree(const DependencyGraph& graph, const std::filesystem::path& out_root,
                                 const NameCatalog& catalog);

}  // namespace capguard

#endif  // CAPGUARD_INSTRUMENTER_H_
