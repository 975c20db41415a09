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

#ifndef CAPGUARD_POLICY_H_
#define CAPGUARD_POLICY_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capguard/catalog.h"
#include "capguard/extractor.h"
#include "capguard/scanner.h"

namespace capguard {

struct PackagePolicyEntry {
  std::set<std::string> modules;
  std::set<std::string> globals;

  bool empty() const { return modules.empty() && globals.empty(); }
  bool operator==(const PackagePolicyEntry&) const = default;
};

struct Policy {
  bool member_access_tracing = false;
  std::map<std::string, PackagePolicyEntry> coarse;
  std::map<std::string, PackagePolicyEntry> fine;

  bool operator==(const Policy&) const = default;
};

inline constexpr std::string_view kDefaultPolicyFile = "capability-policy.json";

// Splits a fine entry into object and member at the last dot; members never
// contain dots, module names may. A bare name yields an empty member.
std::pair<std::string, std::string> split_dotted(const std::string& entry);

// Per-package union of the per-file capabilities. Every package of the graph
// gets an entry, possibly empty. Fine entries hold dotted members only.
Policy build_policy(const DependencyGraph& graph, const std::vector<FileCapabilities>& per_file, bool tracing);

// Canonical bytes: two-space indent, sorted keys, inline string arrays,
// trailing newline.
std::string serialize_policy(const Policy& policy);

// Throws Error(kMalformedPolicy) with a line:column or JSON-pointer location.
Policy parse_policy(std::string_view bytes);

// Object-name projection of fine is within coarse for every package.
bool fine_within_coarse(const Policy& policy);

enum class SemverLevel : uint8_t { kMajor, kMinor, kPatch };
enum class ChangeClass : uint8_t { kNone, kGlobalsOnly, kModulesOnly, kBoth };

std::string_view semver_level_name(SemverLevel level);
std::string_view change_class_name(ChangeClass change);

// Throws Error(kBadVersion) unless both are semver strings (a leading `v`
// is accepted).
SemverLevel classify_semver(const std::string& old_version, const std::string& new_version);

using PackageSets = std::map<std::string, std::set<std::string>>;

struct PolicyDiff {
  PackageSets new_modules;
  PackageSets new_globals;
  PackageSets removed_modules;
  PackageSets removed_globals;
  SemverLevel semver_level = SemverLevel::kPatch;
  ChangeClass change_class = ChangeClass::kNone;
};

// Throws Error(kTracingMismatch) when the tracing flags differ. A package
// missing from `old_policy` is compared against an empty allowlist.
PolicyDiff diff_policies(const Policy& old_policy, const Policy& new_policy, const std::string& old_version,
                         const std::string& new_version);

// Every capability that can be granted, as `m:<module>` / `g:<global>`
// (coarse) or `m:<module>.<member>` / `g:<global>.<member>` (fine). Objects
// without recorded members appear bare in the fine universe.
struct CapabilityUniverse {
  std::set<std::string> coarse;
  std::set<std::string> fine;
  // Fine universe entries per object key (`m:fs`), for `*` expansion.
  std::map<std::string, std::vector<std::string>> members_of;
};

CapabilityUniverse make_universe(const NameCatalog& globals, const NameCatalog& modules,
                                 const MembersCatalog& members);

struct ReductionStats {
  uint64_t available = 0;
  uint64_t used = 0;
  double unused_fraction = 1.0;
};

struct StatsReport {
  ReductionStats coarse;
  std::map<std::string, ReductionStats> coarse_by_package;
  bool has_fine = false;
  ReductionStats fine;
  std::map<std::string, ReductionStats> fine_by_package;
};

// Throws Error(kEmptyUniverse) when the universe is empty.
ReductionStats reduction_stats(const Policy& policy, const CapabilityUniverse& universe, bool fine);
StatsReport stats_report(const Policy& policy, const CapabilityUniverse& universe);

}  // namespace capguard

#endif  // CAPGUARD_POLICY_H_
