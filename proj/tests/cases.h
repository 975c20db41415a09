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

#ifndef CAPGUARD_TESTS_CASES_H_
#define CAPGUARD_TESTS_CASES_H_

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "capguard/catalog.h"
#include "capguard/extractor.h"
#include "test_util.h"

namespace capguard::testing {

// One stored extraction fixture with its hand-derived result.
struct ExtractionCase {
  std::string name;
  std::string file;
  std::string source;
  std::set<std::string> modules;
  std::set<std::string> globals;
  std::set<std::string> fine;  // `m:<module>.<member>` / `g:<global>.<member>`
  uint32_t dynamic_imports = 0;
  bool parse_ok = true;
};

inline std::vector<ExtractionCase> load_extraction_cases() {
  const auto doc = nlohmann::json::parse(read_file(data_dir() / "extraction-cases.json"));
  std::vector<ExtractionCase> cases;
  for (const auto& j : doc) {
    ExtractionCase c;
    c.name = j.at("name").get<std::string>();
    c.file = j.at("file").get<std::string>();
    c.source = j.at("source").get<std::string>();
    c.modules = j.at("modules").get<std::set<std::string>>();
    c.globals = j.at("globals").get<std::set<std::string>>();
    c.fine = j.at("fine").get<std::set<std::string>>();
    c.dynamic_imports = j.at("dynamic_imports").get<uint32_t>();
    c.parse_ok = j.at("parse_ok").get<bool>();
    cases.push_back(std::move(c));
  }
  return cases;
}

// Empty when the extractor agrees with the case, else a description of the
// first disagreement.
inline std::string check_extraction_case(const ExtractionCase& c) {
  const FileCapabilities got = analyze_text(c.source, c.file, builtin_globals(), true);
  if (got.parse_ok != c.parse_ok) return "parse_ok differs";
  std::set<std::string> modules;
  std::set<std::string> globals;
  std::set<std::string> fine;
  for (const auto& cap : got.coarse) (cap.kind == CapabilityKind::kModule ? modules : globals).insert(cap.name);
  for (const auto& cap : got.fine) fine.insert((cap.kind == CapabilityKind::kModule ? "m:" : "g:") + cap.dotted());
  auto show = [](const std::set<std::string>& s) {
    std::string out = "[";
    for (const auto& x : s) out += (out.size() > 1 ? ", " : "") + x;
    return out + "]";
  };
  if (modules != c.modules) return "modules " + show(modules) + " expected " + show(c.modules);
  if (globals != c.globals) return "globals " + show(globals) + " expected " + show(c.globals);
  if (fine != c.fine) return "fine " + show(fine) + " expected " + show(c.fine);
  if (got.dynamic_imports != c.dynamic_imports) {
    return "dynamic_imports " + std::to_string(got.dynamic_imports) + " expected " + std::to_string(c.dynamic_imports);
  }
  return "";
}

// One version pair with hand-computed classifications.
struct DiffCase {
  std::string old_version;
  std::string new_version;
  nlohmann::json old_policy;
  nlohmann::json new_policy;
  std::string semver;
  std::string change_class;
};

inline std::vector<DiffCase> load_diff_cases() {
  const auto doc = nlohmann::json::parse(read_file(data_dir() / "diff-cases.json"));
  std::vector<DiffCase> cases;
  for (const auto& j : doc) {
    cases.push_back(DiffCase{j.at("old_version"), j.at("new_version"), j.at("old"), j.at("new"), j.at("semver"),
                             j.at("change_class")});
  }
  return cases;
}

}  // namespace capguard::testing

#endif  // CAPGUARD_TESTS_CASES_H_
