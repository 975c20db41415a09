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

#include "capguard/policy.h"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "capguard/errors.h"

namespace capguard {

using nlohmann::json;

namespace {

std::string quote(const std::string& s) {
  return json(s).dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_array(std::string* out, const std::set<std::string>& items) {
  out->push_back('[');
  bool first = true;
  for (const auto& item : items) {
    if (!first) out->append(", ");
    first = false;
    out->append(quote(item));
  }
  out->push_back(']');
}

void write_section(std::string* out, std::string_view key, const std::map<std::string, PackagePolicyEntry>& section,
                   bool last) {
  out->append("  \"").append(key).append("\": ");
  if (section.empty()) {
    out->append("{}");
  } else {
    out->append("{\n");
    size_t i = 0;
    for (const auto& [name, entry] : section) {
      out->append("    ").append(quote(name)).append(": {\n");
      out->append("      \"modules\": ");
      write_array(out, entry.modules);
      out->append(",\n      \"globals\": ");
      write_array(out, entry.globals);
      out->append("\n    }");
      out->append(++i == section.size() ? "\n" : ",\n");
    }
    out->append("  }");
  }
  out->append(last ? "\n" : ",\n");
}

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kMalformedPolicy, where, what);
}

std::string location_of(std::string_view bytes, size_t byte) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < byte && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::set<std::string> parse_names(const json& v, const std::string& where) {
  if (!v.is_array()) malformed(where, "expected an array of strings");
  std::set<std::string> names;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) malformed(where + "/" + std::to_string(i), "expected a string");
    std::string s = v[i].get<std::string>();
    if (s.empty()) malformed(where + "/" + std::to_string(i), "empty name");
    names.insert(std::move(s));
  }
  return names;
}

std::map<std::string, PackagePolicyEntry> parse_section(const json& v, const std::string& where, bool fine) {
  if (!v.is_object()) malformed(where, "expected an object");
  std::map<std::string, PackagePolicyEntry> section;
  for (const auto& [pkg, entry] : v.items()) {
    const std::string at = where + "/" + pkg;
    if (!entry.is_object()) malformed(at, "expected an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "modules" && key != "globals") malformed(at + "/" + key, "unexpected key");
    }
    if (!entry.contains("modules") || !entry.contains("globals")) malformed(at, "needs 'modules' and 'globals'");
    PackagePolicyEntry e;
    e.modules = parse_names(entry["modules"], at + "/modules");
    e.globals = parse_names(entry["globals"], at + "/globals");
    for (const auto* names : {&e.modules, &e.globals}) {
      for (const auto& name : *names) {
        const auto [object, member] = split_dotted(name);
        if (object == "*" || object.empty()) malformed(at, "'" + name + "': '*' may only appear as a member");
        if (!fine && member.size() > 0 && member == "*") malformed(at, "'" + name + "': members belong in policyFine");
      }
    }
    section.emplace(pkg, std::move(e));
  }
  return section;
}

std::string strip_v(const std::string& v) { return !v.empty() && v[0] == 'v' ? v.substr(1) : v; }

std::vector<uint64_t> core_numbers(const std::string& version) {
  const std::string v = strip_v(version);
  if (!is_semver(v)) throw Error(ErrorCode::kBadVersion, version, "not a semantic version");
  std::vector<uint64_t> out;
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    size_t end = pos;
    while (end < v.size() && v[end] >= '0' && v[end] <= '9') ++end;
    out.push_back(std::stoull(v.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

void diff_sets(const std::string& pkg, const std::set<std::string>& old_set, const std::set<std::string>& new_set,
               PackageSets* added, PackageSets* removed) {
  std::set<std::string> plus;
  std::set<std::string> minus;
  std::set_difference(new_set.begin(), new_set.end(), old_set.begin(), old_set.end(), std::inserter(plus, plus.end()));
  std::set_difference(old_set.begin(), old_set.end(), new_set.begin(), new_set.end(),
                      std::inserter(minus, minus.end()));
  if (!plus.empty()) (*added)[pkg].insert(plus.begin(), plus.end());
  if (!minus.empty()) (*removed)[pkg].insert(minus.begin(), minus.end());
}

void diff_section(const std::map<std::string, PackagePolicyEntry>& old_section,
                  const std::map<std::string, PackagePolicyEntry>& new_section, PolicyDiff* d) {
  static const PackagePolicyEntry kEmpty;
  std::set<std::string> packages;
  for (const auto& [k, _] : old_section) packages.insert(k);
  for (const auto& [k, _] : new_section) packages.insert(k);
  for (const auto& pkg : packages) {
    auto o = old_section.find(pkg);
    auto n = new_section.find(pkg);
    const PackagePolicyEntry& oe = o == old_section.end() ? kEmpty : o->second;
    const PackagePolicyEntry& ne = n == new_section.end() ? kEmpty : n->second;
    diff_sets(pkg, oe.modules, ne.modules, &d->new_modules, &d->removed_modules);
    diff_sets(pkg, oe.globals, ne.globals, &d->new_globals, &d->removed_globals);
  }
}

std::string normalize_module(const std::string& name) {
  return name.starts_with("node:") ? name.substr(5) : name;
}

// Fine-universe entries a package uses.
std::set<std::string> fine_used(const std::string& pkg, const Policy& policy, const CapabilityUniverse& u) {
  std::set<std::string> used;
  auto add_member = [&](const std::string& object_key, const std::string& member) {
    if (u.coarse.count(object_key) == 0) return;
    if (member == kAllMembers) {
      auto it = u.members_of.find(object_key);
      if (it != u.members_of.end()) used.insert(it->second.begin(), it->second.end());
      return;
    }
    const std::string key = object_key + "." + member;
    if (u.fine.count(key)) used.insert(key);
  };
  auto fine_it = policy.fine.find(pkg);
  if (fine_it != policy.fine.end()) {
    for (const auto& m : fine_it->second.modules) {
      auto [object, member] = split_dotted(m);
      if (!member.empty()) add_member("m:" + normalize_module(object), member);
    }
    for (const auto& g : fine_it->second.globals) {
      auto [object, member] = split_dotted(g);
      if (!member.empty()) add_member("g:" + object, member);
    }
  }
  // Objects without members are used whole.
  auto coarse_it = policy.coarse.find(pkg);
  if (coarse_it != policy.coarse.end()) {
    for (const auto& m : coarse_it->second.modules) {
      const std::string key = "m:" + normalize_module(m);
      if (u.fine.count(key)) used.insert(key);
    }
    for (const auto& g : coarse_it->second.globals) {
      const std::string key = "g:" + g;
      if (u.fine.count(key)) used.insert(key);
    }
  }
  return used;
}

std::set<std::string> coarse_used(const std::string& pkg, const Policy& policy, const CapabilityUniverse& u) {
  std::set<std::string> used;
  auto it = policy.coarse.find(pkg);
  if (it == policy.coarse.end()) return used;
  for (const auto& m : it->second.modules) {
    const std::string key = "m:" + normalize_module(m);
    if (u.coarse.count(key)) used.insert(key);
  }
  for (const auto& g : it->second.globals) {
    const std::string key = "g:" + g;
    if (u.coarse.count(key)) used.insert(key);
  }
  return used;
}

ReductionStats make_stats(uint64_t available, uint64_t used) {
  ReductionStats s;
  s.available = available;
  s.used = used;
  s.unused_fraction = static_cast<double>(available - used) / static_cast<double>(available);
  return s;
}

std::set<std::string> all_packages(const Policy& policy) {
  std::set<std::string> out;
  for (const auto& [k, _] : policy.coarse) out.insert(k);
  for (const auto& [k, _] : policy.fine) out.insert(k);
  return out;
}

}  // namespace

std::pair<std::string, std::string> split_dotted(const std::string& entry) {
  const size_t dot = entry.rfind('.');
  if (dot == std::string::npos) return {entry, ""};
  return {entry.substr(0, dot), entry.substr(dot + 1)};
}

Policy build_policy(const DependencyGraph& graph, const std::vector<FileCapabilities>& per_file, bool tracing) {
  Policy policy;
  policy.member_access_tracing = tracing;
  for (const auto& [name, _] : graph.packages) {
    policy.coarse[name];
    if (tracing) policy.fine[name];
  }
  std::unordered_map<std::string, const std::string*> owner;
  for (const auto& f : graph.files) owner.emplace(f.relative_path, &f.owning_package);
  for (const auto& fc : per_file) {
    auto it = owner.find(fc.file);
    const std::string pkg = it != owner.end() ? *it->second : map_file_to_package(graph.project_root / fc.file, graph);
    PackagePolicyEntry& coarse = policy.coarse[pkg];
    for (const auto& cap : fc.coarse) {
      (cap.kind == CapabilityKind::kModule ? coarse.modules : coarse.globals).insert(cap.name);
    }
    if (!tracing) continue;
    PackagePolicyEntry& fine = policy.fine[pkg];
    for (const auto& cap : fc.fine) {
      (cap.kind == CapabilityKind::kModule ? fine.modules : fine.globals).insert(cap.dotted());
    }
  }
  return policy;
}

std::string serialize_policy(const Policy& policy) {
  std::string out = "{\n";
  out.append("  \"memberAccessTracing\": ").append(policy.member_access_tracing ? "true" : "false").append(",\n");
  write_section(&out, "policyCoarse", policy.coarse, false);
  write_section(&out, "policyFine", policy.member_access_tracing ? policy.fine : decltype(policy.fine){}, true);
  out.append("}\n");
  return out;
}

Policy parse_policy(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    malformed(location_of(bytes, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) malformed("/", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "memberAccessTracing" && key != "policyCoarse" && key != "policyFine") {
      malformed("/" + key, "unexpected key");
    }
  }
  if (!doc.contains("memberAccessTracing") || !doc["memberAccessTracing"].is_boolean()) {
    malformed("/memberAccessTracing", "expected a boolean");
  }
  if (!doc.contains("policyCoarse")) malformed("/policyCoarse", "missing");
  Policy policy;
  policy.member_access_tracing = doc["memberAccessTracing"].get<bool>();
  policy.coarse = parse_section(doc["policyCoarse"], "/policyCoarse", false);
  if (doc.contains("policyFine")) policy.fine = parse_section(doc["policyFine"], "/policyFine", true);
  if (!policy.member_access_tracing) policy.fine.clear();
  if (!fine_within_coarse(policy)) malformed("/policyFine", "names an object missing from policyCoarse");
  return policy;
}

bool fine_within_coarse(const Policy& policy) {
  for (const auto& [pkg, entry] : policy.fine) {
    auto it = policy.coarse.find(pkg);
    const PackagePolicyEntry empty;
    const PackagePolicyEntry& coarse = it == policy.coarse.end() ? empty : it->second;
    for (const auto& m : entry.modules) {
      if (coarse.modules.count(split_dotted(m).first) == 0) return false;
    }
    for (const auto& g : entry.globals) {
      if (coarse.globals.count(split_dotted(g).first) == 0) return false;
    }
  }
  return true;
}

std::string_view semver_level_name(SemverLevel level) {
  switch (level) {
    case SemverLevel::kMajor:
      return "major";
    case SemverLevel::kMinor:
      return "minor";
    case SemverLevel::kPatch:
      return "patch";
  }
  return "patch";
}

std::string_view change_class_name(ChangeClass change) {
  switch (change) {
    case ChangeClass::kNone:
      return "none";
    case ChangeClass::kGlobalsOnly:
      return "globals";
    case ChangeClass::kModulesOnly:
      return "modules";
    case ChangeClass::kBoth:
      return "both";
  }
  return "none";
}

SemverLevel classify_semver(const std::string& old_version, const std::string& new_version) {
  const auto a = core_numbers(old_version);
  const auto b = core_numbers(new_version);
  if (a[0] != b[0]) return SemverLevel::kMajor;
  if (a[1] != b[1]) return SemverLevel::kMinor;
  return SemverLevel::kPatch;
}

PolicyDiff diff_policies(const Policy& old_policy, const Policy& new_policy, const std::string& old_version,
                         const std::string& new_version) {
  if (old_policy.member_access_tracing != new_policy.member_access_tracing) {
    throw Error(ErrorCode::kTracingMismatch, "memberAccessTracing",
                std::string("old is ") + (old_policy.member_access_tracing ? "true" : "false") + ", new is " +
                    (new_policy.member_access_tracing ? "true" : "false"));
  }
  PolicyDiff d;
  d.semver_level = classify_semver(old_version, new_version);
  diff_section(old_policy.coarse, new_policy.coarse, &d);
  if (new_policy.member_access_tracing) diff_section(old_policy.fine, new_policy.fine, &d);
  const bool modules = !d.new_modules.empty();
  const bool globals = !d.new_globals.empty();
  d.change_class = modules && globals ? ChangeClass::kBoth
                   : modules          ? ChangeClass::kModulesOnly
                   : globals          ? ChangeClass::kGlobalsOnly
                                      : ChangeClass::kNone;
  return d;
}

CapabilityUniverse make_universe(const NameCatalog& globals, const NameCatalog& modules,
                                 const MembersCatalog& members) {
  CapabilityUniverse u;
  auto add = [&](const std::string& key, const std::vector<std::string>& member_names) {
    u.coarse.insert(key);
    auto& expanded = u.members_of[key];
    if (member_names.empty()) {
      u.fine.insert(key);
      expanded.push_back(key);
      return;
    }
    for (const auto& m : member_names) {
      const std::string entry = key + "." + m;
      if (u.fine.insert(entry).second) expanded.push_back(entry);
    }
  };
  for (const auto& m : modules.names()) add("m:" + m, members.module_members(m));
  for (const auto& g : globals.names()) add("g:" + g, members.global_members(g));
  return u;
}

ReductionStats reduction_stats(const Policy& policy, const CapabilityUniverse& universe, bool fine) {
  const std::set<std::string>& space = fine ? universe.fine : universe.coarse;
  if (space.empty()) throw Error(ErrorCode::kEmptyUniverse, fine ? "fine universe" : "coarse universe", "no capabilities");
  std::set<std::string> used;
  for (const auto& pkg : all_packages(policy)) {
    const auto part = fine ? fine_used(pkg, policy, universe) : coarse_used(pkg, policy, universe);
    used.insert(part.begin(), part.end());
  }
  return make_stats(space.size(), used.size());
}

StatsReport stats_report(const Policy& policy, const CapabilityUniverse& universe) {
  StatsReport report;
  report.coarse = reduction_stats(policy, universe, false);
  for (const auto& pkg : all_packages(policy)) {
    report.coarse_by_package[pkg] = make_stats(universe.coarse.size(), coarse_used(pkg, policy, universe).size());
  }
  if (policy.member_access_tracing) {
    report.has_fine = true;
    report.fine = reduction_stats(policy, universe, true);
    for (const auto& pkg : all_packages(policy)) {
      report.fine_by_package[pkg] = make_stats(universe.fine.size(), fine_used(pkg, policy, universe).size());
    }
  }
  return report;
}

}  // namespace capguard
