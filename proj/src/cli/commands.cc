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

#include "capguard/cli.h"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "capguard/errors.h"
#include "capguard/instrumenter.h"

#ifndef CAPGUARD_SHIM_PATH
#define CAPGUARD_SHIM_PATH "capguard-shim.js"
#endif

namespace capguard::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, path.string(), "cannot open for reading");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, path.string(), "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, path.string(), "write failed");
}

void record(const Streams& io, const json& j) { io.out << j.dump() << '\n'; }

std::string percent(double fraction) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << fraction * 100.0 << " %";
  return s.str();
}

size_t width_of(const std::vector<std::string>& names, size_t floor) {
  size_t w = floor;
  for (const auto& n : names) w = std::max(w, n.size());
  return w + 2;
}

json stats_record(const std::string* package, const char* granularity, const ReductionStats& s) {
  return {{"record", "stats"},
          {"package", package ? json(*package) : json(nullptr)},
          {"granularity", granularity},
          {"available", s.available},
          {"used", s.used},
          {"unused_fraction", s.unused_fraction}};
}

void print_sets(const Streams& io, const char* change, const char* kind, const PackageSets& sets, size_t w) {
  for (const auto& [pkg, names] : sets) {
    for (const auto& name : names) {
      if (io.format == OutputFormat::kRecords) {
        record(io, {{"record", "change"}, {"package", pkg}, {"change", change}, {"kind", kind}, {"capability", name}});
      } else {
        io.out << std::left << std::setw(static_cast<int>(w)) << pkg << std::setw(9) << change << std::setw(9)
               << kind << name << '\n';
      }
    }
  }
}

std::vector<std::string> package_names(const PackageSets& a, const PackageSets& b, const PackageSets& c,
                                       const PackageSets& d) {
  std::vector<std::string> names;
  for (const auto* sets : {&a, &b, &c, &d}) {
    for (const auto& [k, _] : *sets) names.push_back(k);
  }
  return names;
}

template <typename F>
int guarded(const Streams& io, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    io.err << "capguard: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    io.err << "capguard: " << e.what() << '\n';
  }
  return kExitFailure;
}

}  // namespace

Catalogs load_catalogs(const std::optional<fs::path>& dir) {
  Catalogs c{builtin_globals(), builtin_modules(), builtin_members()};
  if (!dir) return c;
  if (!fs::is_directory(*dir)) throw Error(ErrorCode::kBadCatalog, dir->string(), "not a directory");
  if (fs::exists(*dir / "globals.txt")) {
    c.globals = NameCatalog::load((*dir / "globals.txt").string());
    validate_globals(c.globals, (*dir / "globals.txt").string());
  }
  if (fs::exists(*dir / "builtin-modules.txt")) c.modules = NameCatalog::load((*dir / "builtin-modules.txt").string());
  if (fs::exists(*dir / "members.txt")) c.members = MembersCatalog::load((*dir / "members.txt").string());
  return c;
}

InferResult infer_project(const fs::path& project_root, const Catalogs& catalogs, bool tracing) {
  const auto started = std::chrono::steady_clock::now();
  InferResult result;
  result.graph = discover_packages(project_root);
  result.files.reserve(result.graph.files.size());
  for (const auto& record : result.graph.files) {
    result.files.push_back(analyze_file(record, catalogs.globals, tracing));
  }
  result.policy = build_policy(result.graph, result.files, tracing);
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::string third_party_root(const std::string& specifier, const NameCatalog& modules) {
  if (specifier.starts_with("node:") || modules.contains(specifier)) return "";
  const size_t first = specifier.find('/');
  std::string root = specifier.substr(0, first);
  if (specifier.starts_with("@") && first != std::string::npos) {
    const size_t second = specifier.find('/', first + 1);
    root = specifier.substr(0, second);
  }
  if (modules.contains(root)) return "";
  return root;
}

int cmd_infer(const fs::path& project_root, bool tracing, const std::optional<fs::path>& output,
              const Catalogs& catalogs, const Streams& io) {
  return guarded(io, [&] {
    InferResult r = infer_project(project_root, catalogs, tracing);
    const fs::path target = output ? *output : project_root / std::string(kDefaultPolicyFile);
    write_text(target, serialize_policy(r.policy));
    for (const auto& w : r.graph.warnings) io.err << "capguard: warning: " << w << '\n';
    size_t unparsable = 0;
    for (const auto& f : r.files) {
      if (f.parse_ok) continue;
      ++unparsable;
      io.err << "capguard: warning: cannot parse " << f.file;
      if (f.parse_error) io.err << ":" << f.parse_error->line << ":" << f.parse_error->column << ": " << f.parse_error->message;
      io.err << '\n';
    }
    std::vector<std::string> names;
    for (const auto& [name, _] : r.policy.coarse) names.push_back(name);
    const size_t w = width_of(names, 7);
    if (io.format == OutputFormat::kHuman) {
      io.out << std::left << std::setw(static_cast<int>(w)) << "package" << std::setw(9) << "modules" << std::setw(9)
             << "globals" << (tracing ? "fine" : "") << '\n';
    }
    for (const auto& [name, entry] : r.policy.coarse) {
      auto fine = r.policy.fine.find(name);
      const size_t fine_count =
          fine == r.policy.fine.end() ? 0 : fine->second.modules.size() + fine->second.globals.size();
      if (io.format == OutputFormat::kRecords) {
        json j = {{"record", "package"},
                  {"package", name},
                  {"modules", entry.modules.size()},
                  {"globals", entry.globals.size()}};
        if (tracing) j["fine"] = fine_count;
        record(io, j);
      } else {
        io.out << std::left << std::setw(static_cast<int>(w)) << name << std::setw(9) << entry.modules.size()
               << std::setw(9) << entry.globals.size();
        if (tracing) io.out << fine_count;
        io.out << '\n';
      }
    }
    if (io.format == OutputFormat::kRecords) {
      record(io, {{"record", "infer"},
                  {"policy", target.string()},
                  {"packages", r.policy.coarse.size()},
                  {"files", r.files.size()},
                  {"unparsable", unparsable},
                  {"elapsed_ms", r.elapsed_ms}});
    } else {
      io.out << "wrote " << target.string() << " (" << r.policy.coarse.size() << " packages, " << r.files.size()
             << " files, " << unparsable << " unparsable) in " << std::fixed << std::setprecision(1) << r.elapsed_ms
             << " ms\n";
    }
    return kExitOk;
  });
}

int cmd_instrument(const fs::path& project_root, const fs::path& out_root, const Catalogs& catalogs,
                   const Streams& io) {
  return guarded(io, [&] {
    const DependencyGraph graph = discover_packages(project_root);
    const InstrumentReport report = instrument_tree(graph, out_root, catalogs.globals);
    for (const auto& path : report.unparsable) io.err << "capguard: warning: copied unparsable " << path << '\n';
    for (const auto& [path, message] : report.failures) io.err << "capguard: " << path << ": " << message << '\n';
    if (io.format == OutputFormat::kRecords) {
      record(io, {{"record", "instrument"},
                  {"out", out_root.string()},
                  {"files", report.files},
                  {"rewritten", report.rewritten},
                  {"copied", report.copied},
                  {"replacements", report.replacements},
                  {"unparsable", report.unparsable},
                  {"failed", report.failures.size()}});
    } else {
      io.out << "instrumented " << report.files << " files into " << out_root.string() << ": " << report.rewritten
             << " rewritten (" << report.replacements << " replacements), " << report.copied << " copied, "
             << report.unparsable.size() << " unparsable, " << report.failures.size() << " failed\n";
    }
    return report.failures.empty() ? kExitOk : kExitFailure;
  });
}

int cmd_diff(const fs::path& old_policy, const fs::path& new_policy, const std::string& old_version,
             const std::string& new_version, const Streams& io) {
  return guarded(io, [&] {
    const Policy a = parse_policy(read_text(old_policy));
    const Policy b = parse_policy(read_text(new_policy));
    const PolicyDiff d = diff_policies(a, b, old_version, new_version);
    const size_t w = width_of(package_names(d.new_modules, d.new_globals, d.removed_modules, d.removed_globals), 7);
    if (io.format == OutputFormat::kHuman) {
      io.out << std::left << std::setw(static_cast<int>(w)) << "package" << std::setw(9) << "change" << std::setw(9)
             << "kind"
             << "capability\n";
    }
    print_sets(io, "added", "module", d.new_modules, w);
    print_sets(io, "added", "global", d.new_globals, w);
    print_sets(io, "removed", "module", d.removed_modules, w);
    print_sets(io, "removed", "global", d.removed_globals, w);
    if (io.format == OutputFormat::kRecords) {
      record(io, {{"record", "diff"},
                  {"old_version", old_version},
                  {"new_version", new_version},
                  {"semver", semver_level_name(d.semver_level)},
                  {"change_class", change_class_name(d.change_class)}});
    } else {
      io.out << old_version << " -> " << new_version << ": " << semver_level_name(d.semver_level)
             << " update, new capabilities: " << change_class_name(d.change_class) << '\n';
    }
    return d.change_class == ChangeClass::kNone ? kExitOk : kExitPolicyChanged;
  });
}

int cmd_stats(const fs::path& policy_path, const Catalogs& catalogs, const Streams& io) {
  return guarded(io, [&] {
    const Policy policy = parse_policy(read_text(policy_path));
    const CapabilityUniverse universe = make_universe(catalogs.globals, catalogs.modules, catalogs.members);
    const StatsReport report = stats_report(policy, universe);
    if (io.format == OutputFormat::kRecords) {
      record(io, stats_record(nullptr, "coarse", report.coarse));
      for (const auto& [pkg, s] : report.coarse_by_package) record(io, stats_record(&pkg, "coarse", s));
      if (report.has_fine) {
        record(io, stats_record(nullptr, "fine", report.fine));
        for (const auto& [pkg, s] : report.fine_by_package) record(io, stats_record(&pkg, "fine", s));
      }
      return kExitOk;
    }
    std::vector<std::string> names = {"(all packages)"};
    for (const auto& [pkg, _] : report.coarse_by_package) names.push_back(pkg);
    const size_t w = width_of(names, 7);
    auto row = [&](const std::string& pkg, const char* granularity, const ReductionStats& s) {
      io.out << std::left << std::setw(static_cast<int>(w)) << pkg << std::setw(8) << granularity << std::right
             << std::setw(10) << s.available << std::setw(8) << s.used << std::setw(11) << percent(s.unused_fraction)
             << '\n';
    };
    io.out << std::left << std::setw(static_cast<int>(w)) << "package" << std::setw(8) << "kind" << std::right
           << std::setw(10) << "available" << std::setw(8) << "used" << std::setw(11) << "unused" << '\n';
    row("(all packages)", "coarse", report.coarse);
    for (const auto& [pkg, s] : report.coarse_by_package) row(pkg, "coarse", s);
    if (report.has_fine) {
      row("(all packages)", "fine", report.fine);
      for (const auto& [pkg, s] : report.fine_by_package) row(pkg, "fine", s);
    }
    return kExitOk;
  });
}

int cmd_verify(const fs::path& project_root, const Catalogs& catalogs, const Streams& io) {
  return guarded(io, [&] {
    const InferResult r = infer_project(project_root, catalogs, false);
    std::map<std::string, uint32_t> dynamic;
    std::map<std::string, std::set<std::string>> extracted;
    std::map<std::string, std::string> owner;
    for (const auto& rec : r.graph.files) owner.emplace(rec.relative_path, rec.owning_package);
    for (const auto& f : r.files) {
      const auto it = owner.find(f.file);
      const std::string pkg = it == owner.end() ? r.graph.root_package : it->second;
      dynamic[pkg] += f.dynamic_imports;
      for (const auto& cap : f.coarse) {
        if (cap.kind != CapabilityKind::kModule) continue;
        const std::string root = third_party_root(cap.name, catalogs.modules);
        if (!root.empty()) extracted[pkg].insert(root);
      }
    }
    size_t total_verified = 0;
    size_t total_detected = 0;
    for (const auto& [name, pkg] : r.graph.packages) {
      const DependencyUsage usage = verify_dependency_usage(pkg, r.graph.files_of(name));
      std::set<std::string> detected;
      std::set<std::string> missed;
      for (const auto& dep : usage.used) (extracted[name].count(dep) ? detected : missed).insert(dep);
      total_verified += usage.used.size();
      total_detected += detected.size();
      if (io.format == OutputFormat::kRecords) {
        record(io, {{"record", "verify"},
                    {"package", name},
                    {"declared", pkg.declared_runtime_deps.size()},
                    {"verified", usage.used.size()},
                    {"detected", detected.size()},
                    {"missed", missed},
                    {"dynamic_imports", dynamic[name]}});
      } else {
        io.out << name << ": " << detected.size() << "/" << usage.used.size() << " verified dependencies detected";
        if (dynamic[name] != 0) io.out << ", " << dynamic[name] << " dynamic imports";
        io.out << '\n';
        for (const auto& m : missed) io.out << "  missed " << m << '\n';
      }
    }
    const double rate = total_verified == 0 ? 1.0 : static_cast<double>(total_detected) / total_verified;
    if (io.format == OutputFormat::kRecords) {
      record(io, {{"record", "verify-summary"},
                  {"verified", total_verified},
                  {"detected", total_detected},
                  {"detection_rate", rate}});
    } else {
      io.out << "detected " << total_detected << " of " << total_verified << " verified dependencies ("
             << percent(rate) << ")\n";
    }
    return kExitOk;
  });
}

fs::path bundled_shim() { return fs::path(CAPGUARD_SHIM_PATH); }

int cmd_run(const RunOptions& options, const Catalogs& catalogs, const Streams& io) {
  fs::path out_root;
  bool temporary = false;
  const int status = guarded(io, [&]() -> int {
    const fs::path root = fs::canonical(options.project_root);
    const fs::path policy =
        fs::absolute(options.policy ? *options.policy : root / std::string(kDefaultPolicyFile));
    parse_policy(read_text(policy));  // fail before spawning anything

    fs::path shim = bundled_shim();
    if (options.shim) {
      shim = *options.shim;
    } else if (const char* env = std::getenv("CAPGUARD_SHIM"); env != nullptr && *env != '\0') {
      shim = env;
    }
    if (!fs::is_regular_file(shim)) throw Error(ErrorCode::kIoFailure, shim.string(), "shim not found");
    shim = fs::absolute(shim);

    const fs::path entry = fs::weakly_canonical(options.entry.is_absolute() ? options.entry : root / options.entry);
    const fs::path relative = entry.lexically_relative(root);
    if (relative.empty() || *relative.begin() == "..") {
      throw Error(ErrorCode::kUnownedPath, entry.string(), "entry is outside the project root");
    }

    if (options.out_root) {
      out_root = *options.out_root;
    } else {
      std::string pattern = (fs::temp_directory_path() / "capguard-run-XXXXXX").string();
      if (mkdtemp(pattern.data()) == nullptr) {
        throw Error(ErrorCode::kIoFailure, pattern, std::strerror(errno));
      }
      out_root = pattern;
      temporary = true;
    }
    const DependencyGraph graph = discover_packages(root);
    const InstrumentReport report = instrument_tree(graph, out_root, catalogs.globals);
    for (const auto& [path, message] : report.failures) io.err << "capguard: " << path << ": " << message << '\n';
    if (!report.failures.empty()) {
      throw Error(ErrorCode::kIoFailure, out_root.string(), "instrumentation incomplete");
    }
    if (!report.unparsable.empty() && !options.allow_unparsable) {
      for (const auto& path : report.unparsable) io.err << "capguard: cannot parse " << path << '\n';
      throw Error(ErrorCode::kIoFailure, out_root.string(),
                  "refusing to run uninstrumented files (pass --allow-unparsable to override)");
    }

    std::vector<std::string> argv = {options.node, "--require", shim.string(), (out_root / relative).string()};
    argv.insert(argv.end(), options.args.begin(), options.args.end());
    std::vector<char*> raw;
    for (auto& a : argv) raw.push_back(a.data());
    raw.push_back(nullptr);
    const std::string shadow = fs::absolute(out_root).string();

    io.out.flush();
    io.err.flush();
    const pid_t pid = fork();
    if (pid < 0) throw Error(ErrorCode::kIoFailure, options.node, std::strerror(errno));
    if (pid == 0) {
      setenv("CAPGUARD_POLICY", policy.c_str(), 1);
      setenv("CAPGUARD_ROOT", shadow.c_str(), 1);
      setenv("CAPGUARD_ROOT_PACKAGE", graph.root_package.c_str(), 1);
      execvp(raw[0], raw.data());
      std::fprintf(stderr, "capguard: cannot execute %s: %s\n", raw[0], std::strerror(errno));
      _exit(127);
    }
    int wstatus = 0;
    while (waitpid(pid, &wstatus, 0) < 0) {
      if (errno != EINTR) throw Error(ErrorCode::kIoFailure, options.node, std::strerror(errno));
    }
    if (WIFEXITED(wstatus)) return WEXITSTATUS(wstatus);
    if (WIFSIGNALED(wstatus)) return 128 + WTERMSIG(wstatus);
    return kExitFailure;
  });
  if (temporary) {
    std::error_code ec;
    fs::remove_all(out_root, ec);
  }
  return status;
}

}  // namespace capguard::cli
