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

#ifndef CAPGUARD_CATALOG_H_
#define CAPGUARD_CATALOG_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace capguard {

// A pinned set of names: global objects or built-in modules. The text form
// is one name per line after a `# <label>` header; blank lines and further
// `#` lines are ignored.
class NameCatalog {
 public:
  NameCatalog() = default;
  NameCatalog(std::set<std::string> names, std::string label)
      : names_(std::move(names)), label_(std::move(label)) {}

  // Throws Error(kBadCatalog) naming `origin` on malformed text.
  static NameCatalog parse(std::string_view text, const std::string& origin);
  static NameCatalog load(const std::string& path);

  bool contains(std::string_view name) const { return names_.count(std::string(name)) != 0; }
  const std::set<std::string>& names() const { return names_; }
  const std::string& label() const { return label_; }
  size_t size() const { return names_.size(); }

 private:
  std::set<std::string> names_;
  std::string label_;
};

// Names every globals catalog must contain.
const std::vector<std::string>& required_global_names();

// Throws Error(kBadCatalog) if a required name is missing.
void validate_globals(const NameCatalog& globals, const std::string& origin);

// Member names per global object and per built-in module. Lines look like
// `global <name> <member>...` or `module <name> <member>...`.
class MembersCatalog {
 public:
  static MembersCatalog parse(std::string_view text, const std::string& origin);
  static MembersCatalog load(const std::string& path);

  void set_global(const std::string& name, std::vector<std::string> members) { globals_[name] = std::move(members); }
  void set_module(const std::string& name, std::vector<std::string> members) { modules_[name] = std::move(members); }

  // Empty when the object has no recorded members.
  const std::vector<std::string>& global_members(const std::string& name) const;
  const std::vector<std::string>& module_members(const std::string& name) const;
  const std::string& label() const { return label_; }

 private:
  std::map<std::string, std::vector<std::string>> globals_;
  std::map<std::string, std::vector<std::string>> modules_;
  std::string label_;
};

// The catalogs compiled into the binary from data/.
const NameCatalog& builtin_globals();
const NameCatalog& builtin_modules();
const MembersCatalog& builtin_members();

}  // namespace capguard

#endif  // CAPGUARD_CATALOG_H_
