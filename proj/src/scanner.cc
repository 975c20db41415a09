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

#include "capguard/scanner.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include <json.hpp>

#include "capguard/errors.h"

namespace capguard {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path, bool* ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    *ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  *ok = static_cast<bool>(in) || in.eof();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  bool ok = true;
  const std::string text = slurp(path, &ok);
  if (!ok) throw Error(ErrorCode::kUnreadableTree, path.string(), "cannot read");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnreadableTree, path.string(), e.what());
  }
}

std::string generic(const fs::path& p) {
  std::string s = p.generic_string();
  if (s == ".") s.clear();
  return s;
}

class Walker {
 public:
  explicit Walker(fs::path root) : root_(std::move(root)) {}

  DependencyGraph run() {
    graph_.project_root = root_;
    const fs::path manifest = root_ / "package.json";
    std::error_code ec;
    if (!fs::is_regular_file(manifest, ec)) throw Error(ErrorCode::kMissingManifest, manifest.string(), "not found");
    const fs::path lockfile = root_ / "package-lock.json";
    if (!fs::is_regular_file(lockfile, ec)) throw Error(ErrorCode::kMissingLockfile, lockfile.string(), "not found");

    PackageDescriptor root_pkg = describe(root_, root_.filename().string());
    if (root_pkg.name.empty()) root_pkg.name = fs::absolute(root_).lexically_normal().filename().string();
    const nlohmann::json lock = read_json(lockfile);
    if (lock.is_object() && lock.contains("name") && lock["name"].is_string() &&
        lock["name"].get<std::string>() != root_pkg.name) {
      graph_.warnings.push_back("lockfile name '" + lock["name"].get<std::string>() +
                                "' differs from manifest name '" + root_pkg.name + "'");
    }
    graph_.root_package = root_pkg.name;
    add_package(std::move(root_pkg), root_);

    std::sort(graph_.files.begin(), graph_.files.end(),
              [](const FileRecord& a, const FileRecord& b) { return a.relative_path < b.relative_path; });
    std::sort(graph_.package_dirs.begin(), graph_.package_dirs.end());
    return std::move(graph_);
  }

 private:
  PackageDescriptor describe(const fs::path& dir, const std::string& fallback_name) {
    const fs::path manifest_path = dir / "package.json";
    const nlohmann::json manifest = read_json(manifest_path);
    PackageDescriptor pkg;
    pkg.root_path = dir;
    if (manifest.is_object()) {
      if (manifest.contains("name") && manifest["name"].is_string()) pkg.name = manifest["name"].get<std::string>();
      if (manifest.contains("version") && manifest["version"].is_string()) {
        pkg.version = manifest["version"].get<std::string>();
      }
      if (manifest.contains("dependencies") && manifest["dependencies"].is_object()) {
        for (const auto& [dep, range] : manifest["dependencies"].items()) pkg.declared_runtime_deps.insert(dep);
      }
    }
    if (pkg.name.empty()) pkg.name = fallback_name;
    if (!is_semver(pkg.version)) {
      graph_.warnings.push_back(generic(manifest_path.lexically_relative(root_)) + ": version '" + pkg.version +
                                "' is not semver; using 0.0.0");
      pkg.version = "0.0.0";
    }
    return pkg;
  }

  bool first_visit(const fs::path& dir) {
    std::error_code ec;
    fs::path real = fs::canonical(dir, ec);
    if (ec) throw Error(ErrorCode::kUnreadableTree, dir.string(), ec.message());
    return visited_.insert(real.string()).second;
  }

  void add_package(PackageDescriptor pkg, const fs::path& dir) {
    if (!first_visit(dir)) return;
    const std::string name = pkg.name;
    graph_.packages.emplace(name, std::move(pkg));
    graph_.package_dirs.emplace_back(generic(dir.lexically_relative(root_)), name);
    walk_files(dir, name);
    walk_installed(dir / "node_modules");
  }

  void walk_installed(const fs::path& modules_dir) {
    std::error_code ec;
    if (!fs::is_directory(modules_dir, ec)) return;
    for (const fs::path& entry : list_dir(modules_dir)) {
      const std::string leaf = entry.filename().string();
      if (leaf.starts_with(".")) continue;
      if (leaf.starts_with("@")) {
        if (!fs::is_directory(entry, ec)) continue;
        for (const fs::path& scoped : list_dir(entry)) consider_package(scoped, leaf + "/" + scoped.filename().string());
        continue;
      }
      consider_package(entry, leaf);
    }
  }

  void consider_package(const fs::path& dir, const std::string& dir_name) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return;
    if (!fs::is_regular_file(dir / "package.json", ec)) {
      graph_.warnings.push_back(generic(dir.lexically_relative(root_)) + ": no package.json; skipped");
      return;
    }
    add_package(describe(dir, dir_name), dir);
  }

  std::vector<fs::path> list_dir(const fs::path& dir) {
    std::vector<fs::path> entries;
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) throw Error(ErrorCode::kUnreadableTree, dir.string(), ec.message());
    for (; it != fs::directory_iterator(); it.increment(ec)) {
      if (ec) throw Error(ErrorCode::kUnreadableTree, dir.string(), ec.message());
      entries.push_back(it->path());
    }
    std::sort(entries.begin(), entries.end());
    return entries;
  }

  // Files of one package: everything below `dir` except installed
  // dependencies.
  void walk_files(const fs::path& dir, const std::string& owner) {
    for (const fs::path& entry : list_dir(dir)) {
      std::error_code ec;
      const fs::file_status st = fs::status(entry, ec);
      if (ec) {
        // Dangling links are not part of the tree.
        if (fs::is_symlink(fs::symlink_status(entry, ec))) continue;
        throw Error(ErrorCode::kUnreadableTree, entry.string(), ec.message());
      }
      if (fs::is_directory(st)) {
        const std::string leaf = entry.filename().string();
        if (leaf == "node_modules" || leaf == ".git") continue;
        if (!first_visit(entry)) continue;
        walk_files(entry, owner);
        continue;
      }
      if (!fs::is_regular_file(st) || !is_js_path(entry)) continue;
      FileRecord rec;
      rec.path = entry;
      rec.relative_path = generic(entry.lexically_relative(root_));
      rec.owning_package = owner;
      rec.byte_length = fs::file_size(entry, ec);
      if (ec) throw Error(ErrorCode::kUnreadableTree, entry.string(), ec.message());
      graph_.files.push_back(std::move(rec));
    }
  }

  fs::path root_;
  DependencyGraph graph_;
  std::unordered_set<std::string> visited_;
};

}  // namespace

std::vector<FileRecord> DependencyGraph::files_of(const std::string& package) const {
  std::vector<FileRecord> out;
  for (const auto& f : files) {
    if (f.owning_package == package) out.push_back(f);
  }
  return out;
}

bool is_js_path(const fs::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".js" || ext == ".mjs" || ext == ".cjs";
}

bool is_semver(const std::string& version) {
  static const std::regex kSemver(
      R"(^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(-[0-9A-Za-z-]+(\.[0-9A-Za-z-]+)*)?(\+[0-9A-Za-z-]+(\.[0-9A-Za-z-]+)*)?$)");
  return std::regex_match(version, kSemver);
}

DependencyGraph discover_packages(const fs::path& project_root) { return Walker(project_root).run(); }

std::string map_file_to_package(const fs::path& path, const DependencyGraph& graph) {
  const fs::path root = fs::absolute(graph.project_root).lexically_normal();
  const fs::path abs = fs::absolute(path).lexically_normal();
  const fs::path rel = abs.lexically_relative(root);
  const std::string rel_str = generic(rel);
  if (rel.empty() || rel_str == ".." || rel_str.starts_with("../")) {
    throw Error(ErrorCode::kUnownedPath, path.string(), "outside " + root.string());
  }
  const std::string* best = &graph.root_package;
  size_t best_len = 0;
  for (const auto& [dir, name] : graph.package_dirs) {
    if (dir.empty() || dir.size() < best_len) continue;
    const bool encloses = rel_str == dir || (rel_str.size() > dir.size() && rel_str.starts_with(dir) &&
                                             rel_str[dir.size()] == '/');
    if (encloses && dir.size() >= best_len) {
      best = &name;
      best_len = dir.size();
    }
  }
  return *best;
}

DependencyUsage verify_dependency_usage(const PackageDescriptor& pkg, const std::vector<FileRecord>& files) {
  DependencyUsage usage;
  std::vector<std::string> pending;
  for (const auto& dep : pkg.declared_runtime_deps) {
    if (!dep.starts_with("@types")) pending.push_back(dep);
  }
  for (const auto& file : files) {
    if (pending.empty()) break;
    bool ok = true;
    const std::string text = slurp(file.path, &ok);
    if (!ok) {
      ++usage.unreadable_files;
      continue;
    }
    for (auto it = pending.begin(); it != pending.end();) {
      if (text.find(*it) != std::string::npos) {
        usage.used.insert(*it);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
  }
  return usage;
}

}  // namespace capguard
