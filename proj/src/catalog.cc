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

#include "capguard/catalog.h"

#include <fstream>
#include <sstream>

#include "capguard/errors.h"

namespace capguard {

namespace detail {
extern const std::string_view kGlobalsData;
extern const std::string_view kModulesData;
extern const std::string_view kMembersData;
}  // namespace detail

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string header_label(const std::vector<std::string_view>& lines, const std::string& origin) {
  if (lines.empty() || lines.front().size() < 3 || !lines.front().starts_with("# ")) {
    throw Error(ErrorCode::kBadCatalog, origin, "missing '# <label>' header line");
  }
  return std::string(lines.front().substr(2));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kBadCatalog, path, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

NameCatalog NameCatalog::parse(std::string_view text, const std::string& origin) {
  const auto lines = split_lines(text);
  std::string label = header_label(lines, origin);
  std::set<std::string> names;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto words = split_words(lines[i]);
    if (words.empty() || words.front().starts_with("#")) continue;
    if (words.size() != 1) {
      throw Error(ErrorCode::kBadCatalog, origin + ":" + std::to_string(i + 1), "expected one name per line");
    }
    names.insert(words.front());
  }
  return NameCatalog(std::move(names), std::move(label));
}

NameCatalog NameCatalog::load(const std::string& path) { return parse(read_file(path), path); }

const std::vector<std::string>& required_global_names() {
  static const std::vector<std::string> kNames = {
      "require", "Buffer",   "process",    "console",     "globalThis", "eval",   "module",   "__dirname",
      "__filename", "setTimeout", "setInterval", "JSON", "Math", "Object", "Function"};
  return kNames;
}

void validate_globals(const NameCatalog& globals, const std::string& origin) {
  for (const auto& name : required_global_names()) {
    if (!globals.contains(name)) throw Error(ErrorCode::kBadCatalog, origin, "missing required global '" + name + "'");
  }
}

MembersCatalog MembersCatalog::parse(std::string_view text, const std::string& origin) {
  const auto lines = split_lines(text);
  MembersCatalog catalog;
  catalog.label_ = header_label(lines, origin);
  for (size_t i = 1; i < lines.size(); ++i) {
    auto words = split_words(lines[i]);
    if (words.empty() || words.front().starts_with("#")) continue;
    if (words.size() < 2 || (words[0] != "global" && words[0] != "module")) {
      throw Error(ErrorCode::kBadCatalog, origin + ":" + std::to_string(i + 1),
                  "expected 'global|module <name> <member>...'");
    }
    std::vector<std::string> members(words.begin() + 2, words.end());
    if (words[0] == "global") {
      catalog.globals_[words[1]] = std::move(members);
    } else {
      catalog.modules_[words[1]] = std::move(members);
    }
  }
  return catalog;
}

MembersCatalog MembersCatalog::load(const std::string& path) { return parse(read_file(path), path); }

const std::vector<std::string>& MembersCatalog::global_members(const std::string& name) const {
  static const std::vector<std::string> kNone;
  auto it = globals_.find(name);
  return it == globals_.end() ? kNone : it->second;
}

const std::vector<std::string>& MembersCatalog::module_members(const std::string& name) const {
  static const std::vector<std::string> kNone;
  auto it = modules_.find(name);
  return it == modules_.end() ? kNone : it->second;
}

const NameCatalog& builtin_globals() {
  static const NameCatalog kCatalog = NameCatalog::parse(detail::kGlobalsData, "<builtin globals>");
  return kCatalog;
}

const NameCatalog& builtin_modules() {
  static const NameCatalog kCatalog = NameCatalog::parse(detail::kModulesData, "<builtin modules>");
  return kCatalog;
}

const MembersCatalog& builtin_members() {
  static const MembersCatalog kCatalog = MembersCatalog::parse(detail::kMembersData, "<builtin members>");
  return kCatalog;
}

}  // namespace capguard
