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

#ifndef CAPGUARD_TESTS_CORPUS_CHECKS_H_
#define CAPGUARD_TESTS_CORPUS_CHECKS_H_

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "capguard/extractor.h"
#include "capguard/instrumenter.h"
#include "capguard/scanner.h"
#include "cases.h"
#include "test_util.h"

namespace capguard::testing {

// Every JavaScript file the test suite ships: the corpus, the fixtures and
// the parser samples.
inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& dir : {corpus_dir(), fixtures_dir(), data_dir()}) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
      if (e.is_regular_file() && is_js_path(e.path())) files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct InstrumentationOutcome {
  size_t files = 0;
  size_t rewritten = 0;
  size_t unparsable = 0;
  size_t failures = 0;
  std::string first_failure;
  double median_ms = 0;
};

// For each source: the replaced names equal the extracted globals, the
// output parses, grows by exactly one line when rewritten, and yields no
// replacements when instrumented again.
inline InstrumentationOutcome check_instrumentation(const std::vector<std::pair<std::string, std::string>>& sources) {
  InstrumentationOutcome outcome;
  std::vector<double> timings;
  auto fail = [&](const std::string& file, const std::string& why) {
    if (outcome.failures++ == 0) outcome.first_failure = file + ": " + why;
  };
  for (const auto& [file, text] : sources) {
    ++outcome.files;
    const auto started = std::chrono::steady_clock::now();
    const InstrumentedSource first = instrument_source(text, file, "pkg", builtin_globals());
    timings.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count());
    if (!first.parse_ok) {
      ++outcome.unparsable;
      if (first.text != text) fail(file, "unparsable file was modified");
      continue;
    }
    auto analyzed = analyze_source(text, source_type_for(file));
    std::set<std::string> extracted;
    for (const auto& cap : extract_globals(*analyzed->scopes, builtin_globals())) extracted.insert(cap.name);
    std::set<std::string> replaced;
    for (const auto& r : first.plan.replacements) replaced.insert(r.name);
    if (replaced != extracted) {
      fail(file, "replaced set differs from extracted globals");
      continue;
    }
    if (first.plan.replacements.empty()) {
      if (first.text != text) fail(file, "file without globals was modified");
      continue;
    }
    ++outcome.rewritten;
    const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    if (lines(first.text) != lines(text) + 1) fail(file, "line count did not grow by one");
    const InstrumentedSource second = instrument_source(first.text, file, "pkg", builtin_globals());
    if (!second.parse_ok) {
      fail(file, "instrumented output does not parse");
    } else if (!second.plan.replacements.empty()) {
      fail(file, "second pass made " + std::to_string(second.plan.replacements.size()) + " replacements");
    } else if (second.text != first.text) {
      fail(file, "second pass changed the text");
    }
  }
  if (!timings.empty()) {
    std::sort(timings.begin(), timings.end());
    outcome.median_ms = timings[timings.size() / 2];
  }
  return outcome;
}

// The corpus files plus the stored extraction snippets.
inline std::vector<std::pair<std::string, std::string>> instrumentation_sources() {
  std::vector<std::pair<std::string, std::string>> sources;
  for (const auto& path : corpus_files()) {
    sources.emplace_back(path.lexically_relative(source_dir()).generic_string(), read_file(path));
  }
  for (const auto& c : load_extraction_cases()) sources.emplace_back("case:" + c.name + "/" + c.file, c.source);
  return sources;
}

}  // namespace capguard::testing

#endif  // CAPGUARD_TESTS_CORPUS_CHECKS_H_
