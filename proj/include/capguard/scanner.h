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

#ifndef CAPGUARD_SCANNER_H_
#define CAPGUARD_SCANNER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace capguard {

struct PackageDescriptor {
  std::string name;
  std::string version;
  std::filesystem::path root_path;
  std::set<std::string> declared_runtime_deps;
};

struct FileRecord {
  std::filesystem::path path;
  std::string relative_path;  // to the project root, '/'-separated
  std::string owning_package;
  uint64_t byte_length = 0;
};

struct DependencyGraph {
  std::filesystem::path project_root;
  std::string root_package;
  std::map<std::string, PackageDescriptor> packages;
  std::vector<FileRecord> files;  // sorted by relative_path
  // Every installed package directory (relative, '/'-separated; "" is the
  // root) with the package it belongs to.
  std::vector<std::pair<std::string, std::string>> package_dirs;
  std::vector<std::string> warnings;

  std::vector<FileRecord> files_of(const std::string& package) const;
};

// True for `.js`, `.mjs` and `.cjs` paths.
bool is_js_path(const std::filesystem::path& path);

// Walks the installed tree under project_root. Throws Error with
// kMissingManifest, kMissingLockfile or kUnreadableTree.
DependencyGraph discover_packages(const std::filesystem::path& project_root);

// Package owning `path`: the deepest installed package directory enclosing
// it. Throws Error(kUnownedPath) for paths outside the project root.
std::string map_file_to_package(const std::filesystem::path& path, const DependencyGraph& graph);

struct DependencyUsage {
  std::set<std::string> used;
  size_t unreadable_files = 0;
};

// Declared runtime dependencies (minus `@types/...`) whose name occurs
// literally in at least one of `files`.
DependencyUsage verify_dependency_usage(const PackageDescriptor& pkg, const std::vector<FileRecord>& files);

// Strict semver check: MAJOR.MINOR.PATCH with optional -pre and +build.
bool is_semver(const std::string& version);

}  // namespace capguard

#endif  // CAPGUARD_SCANNER_H_
