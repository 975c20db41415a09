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

#ifndef CAPGUARD_EXTRACTOR_H_
#define CAPGUARD_EXTRACTOR_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capguard/catalog.h"
#include "capguard/js/ast.h"
#include "capguard/js/parser.h"
#include "capguard/js/scope.h"
#include "capguard/scanner.h"

namespace capguard {

enum class CapabilityKind : uint8_t { kModule, kGlobal };

struct Capability {
  CapabilityKind kind = CapabilityKind::kModule;
  std::string name;
  std::optional<std::string> member;  // "*" means every member

  auto operator<=>(const Capability&) const = default;
  bool operator==(const Capability&) const = default;

  // `name` or `name.member`.
  std::string dotted() const { return member ? name + "." + *member : name; }
  Capability object() const { return Capability{kind, name, std::nullopt}; }
};

inline constexpr std::string_view kAllMembers = "*";

// Where a capability was first seen in a file.
struct CapabilityOrigin {
  Capability capability;
  std::string_view construct;  // ESTree node type name
  uint32_t offset = 0;
};

struct FileCapabilities {
  std::string file;
  std::set<Capability> coarse;
  std::set<Capability> fine;
  bool parse_ok = true;
  uint32_t dynamic_imports = 0;
  std::vector<CapabilityOrigin> origins;
  std::optional<js::ParseFailure> parse_error;
};

// A parsed file with its scope analysis.
struct AnalyzedSource {
  std::unique_ptr<js::Ast> ast;
  std::unique_ptr<js::ScopeAnalysis> scopes;
};

js::SourceType source_type_for(const std::string& path);

// Parses and analyzes `source`; `error` receives the failure, if any.
std::optional<AnalyzedSource> analyze_source(std::string_view source, js::SourceType type,
                                             js::ParseFailure* error = nullptr);

struct ImportSet {
  std::set<Capability> modules;
  uint32_t dynamic_imports = 0;
};

// Module capabilities from `require("m")`, `import("m")`, and static
// import/export-from declarations. Relative and absolute specifiers are
// package-internal and are not capabilities.
ImportSet extract_imports(const js::Ast& ast);

// Catalog globals referenced in value position without a shadowing binding.
std::set<Capability> extract_globals(const js::ScopeAnalysis& scopes, const NameCatalog& catalog);

// Member capabilities of modules and globals.
std::set<Capability> extract_members(const js::Ast& ast, const js::ScopeAnalysis& scopes, const NameCatalog& catalog);

// All three, with origins.
FileCapabilities extract_capabilities(const AnalyzedSource& source, const NameCatalog& catalog, bool tracing);

FileCapabilities analyze_text(std::string_view source, const std::string& file, const NameCatalog& catalog,
                              bool tracing);

// Reads and analyzes one file. Unreadable files count as unparsable.
FileCapabilities analyze_file(const FileRecord& record, const NameCatalog& catalog, bool tracing);

// True for specifiers that name files rather than packages or built-ins.
bool is_path_specifier(std::string_view specifier);

}  // namespace capguard

#endif  // CAPGUARD_EXTRACTOR_H_
