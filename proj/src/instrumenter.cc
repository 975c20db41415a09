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

#include "capguard/instrumenter.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <system_error>

#include <json.hpp>

#include "capguard/errors.h"

namespace capguard {

namespace fs = std::filesystem;
using js::Node;
using js::NodeType;

namespace {

// Offset just past the hashbang line, or npos when there is none or it has
// no terminator.
size_t after_hashbang(std::string_view source) {
  if (!source.starts_with("#!")) return std::string_view::npos;
  const size_t eol = source.find_first_of("\r\n");
  if (eol == std::string_view::npos) return eol;
  if (source[eol] == '\r' && eol + 1 < source.size() && source[eol + 1] == '\n') return eol + 2;
  return eol + 1;
}

void place_prelude(std::string_view source, const js::Ast& ast, RewritePlan* plan) {
  const Node* last_directive = nullptr;
  for (const Node* stmt : ast.root()->list) {
    if (!stmt->has(js::flag::kDirective)) break;
    last_directive = stmt;
  }
  if (last_directive != nullptr) {
    plan->prelude_offset = last_directive->end;
    plan->placement = RewritePlan::Placement::kAfterText;
    return;
  }
  if (!source.starts_with("#!")) {
    plan->prelude_offset = 0;
    plan->placement = RewritePlan::Placement::kBeforeLine;
    return;
  }
  const size_t line2 = after_hashbang(source);
  if (line2 == std::string_view::npos) {
    plan->prelude_offset = static_cast<uint32_t>(source.size());
    plan->placement = RewritePlan::Placement::kAfterText;
  } else {
    plan->prelude_offset = static_cast<uint32_t>(line2);
    plan->placement = RewritePlan::Placement::kBeforeLine;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, path.string(), "cannot open for reading");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, path.string(), "read failed");
  return text;
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, path.string(), "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, path.string(), "write failed");
}

std::string relative_slash(const fs::path& path, const fs::path& root) {
  return path.lexically_relative(root).generic_string();
}

class TreeMirror {
 public:
  TreeMirror(const DependencyGraph& graph, const fs::path& out_root, const NameCatalog& catalog)
      : graph_(graph), root_(graph.project_root), out_root_(out_root), catalog_(catalog) {}

  InstrumentReport run() {
    std::error_code ec;
    out_canonical_ = fs::weakly_canonical(out_root_, ec);
    mirror_dir(root_, out_root_);
    std::sort(report_.unparsable.begin(), report_.unparsable.end());
    std::sort(report_.failures.begin(), report_.failures.end());
    return report_;
  }

 private:
  void fail(const fs::path& path, const std::string& message) {
    report_.failures.emplace_back(relative_slash(path, root_), message);
  }

  void mirror_dir(const fs::path& dir, const fs::path& target) {
    std::error_code ec;
    const fs::path canonical = fs::canonical(dir, ec);
    if (ec) return fail(dir, ec.message());
    if (canonical == out_canonical_ || !visited_.insert(canonical.string()).second) return;
    fs::create_directories(target, ec);
    if (ec) return fail(dir, ec.message());
    std::vector<fs::directory_entry> entries;
    fs::directory_iterator it(dir, ec);
    if (ec) return fail(dir, ec.message());
    for (; it != fs::directory_iterator(); it.increment(ec)) {
      if (ec) break;
      entries.push_back(*it);
    }
    if (ec) return fail(dir, ec.message());
    std::sort(entries.begin(), entries.end());
    for (const auto& entry : entries) {
      const std::string name = entry.path().filename().string();
      if (name == ".git") continue;
      const fs::path out = target / name;
      if (entry.is_directory(ec)) {
        mirror_dir(entry.path(), out);
      } else if (entry.is_regular_file(ec)) {
        mirror_file(entry.path(), out);
      }
    }
    visited_.erase(canonical.string());
  }

  void mirror_file(const fs::path& path, const fs::path& out) {
    ++report_.files;
    try {
      if (is_js_path(path)) {
        std::string package = graph_.root_package;
        try {
          package = map_file_to_package(path, graph_);
        } catch (const Error&) {
        }
        const std::string source = read_file(path);
        InstrumentedSource result = instrument_source(source, relative_slash(path, root_), package, catalog_);
        if (!result.parse_ok) report_.unparsable.push_back(relative_slash(path, root_));
        if (!result.plan.replacements.empty()) {
          write_file(out, result.text);
          fs::permissions(out, fs::status(path).permissions());
          ++report_.rewritten;
          report_.replacements += result.plan.replacements.size();
          return;
        }
      }
      std::error_code ec;
      fs::copy_file(path, out, fs::copy_options::overwrite_existing, ec);
      if (ec) throw Error(ErrorCode::kIoFailure, path.string(), ec.message());
      ++report_.copied;
    } catch (const Error& e) {
      fail(path, e.what());
    } catch (const fs::filesystem_error& e) {
      fail(path, e.what());
    }
  }

  const DependencyGraph& graph_;
  fs::path root_;
  fs::path out_root_;
  fs::path out_canonical_;
  const NameCatalog& catalog_;
  std::set<std::string> visited_;
  InstrumentReport report_;
};

}  // namespace

std::string choose_injected_name(const js::ScopeAnalysis& scopes) {
  const auto& names = scopes.identifier_names();
  std::string name(kDefaultInjectedName);
  for (int n = 1; names.count(name) != 0; ++n) name = std::string(kDefaultInjectedName) + std::to_string(n);
  return name;
}

RewritePlan plan_rewrites(std::string_view text, const AnalyzedSource& source, const NameCatalog& catalog) {
  RewritePlan plan;
  for (const auto& ref : source.scopes->references()) {
    if (ref.binding != nullptr || !catalog.contains(ref.id->name)) continue;
    plan.replacements.push_back(Replacement{ref.id->start, ref.id->end, ref.id->name, ref.shorthand});
  }
  std::sort(plan.replacements.begin(), plan.replacements.end(),
            [](const Replacement& x, const Replacement& y) { return x.start < y.start; });
  plan.prelude_needed = !plan.replacements.empty();
  place_prelude(text, *source.ast, &plan);
  plan.injected_name = choose_injected_name(*source.scopes);
  const auto& top = source.scopes->program_scope().names;
  if (top.count("globalThis") != 0) plan.hook_object = "global";
  if (!source.ast->is_module()) {
    for (auto w : kWrapperNames) {
      if (top.count(std::string(w)) == 0) plan.wrapper_names.emplace_back(w);
    }
  }
  return plan;
}

std::string prelude_line(const RewritePlan& plan, std::string_view injected_name) {
  std::string line = "const ";
  line.append(injected_name).append(" = ").append(plan.hook_object).append(".").append(kGlobalsHook).append("(");
  line.append(nlohmann::json(plan.package).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
  line.append(", ");
  if (plan.wrapper_names.empty()) {
    line.append("null");
  } else {
    line.append("typeof ").append(plan.wrapper_names.front()).append(" === \"undefined\" ? null : { ");
    for (size_t i = 0; i < plan.wrapper_names.size(); ++i) {
      if (i != 0) line.append(", ");
      line.append(plan.wrapper_names[i]);
    }
    line.append(" }");
  }
  line.append(");");
  return line;
}

std::string apply_rewrites(std::string_view source, const RewritePlan& plan, std::string_view injected_name) {
  uint32_t cursor = 0;
  for (const auto& r : plan.replacements) {
    if (r.start < cursor || r.end <= r.start || r.end > source.size()) {
      throw Error(ErrorCode::kSpanMismatch, plan.file,
                  "replacement [" + std::to_string(r.start) + ", " + std::to_string(r.end) + ") out of order or bounds");
    }
    const std::string_view text = source.substr(r.start, r.end - r.start);
    if (text != r.name && text.find('\\') == std::string_view::npos) {
      throw Error(ErrorCode::kSpanMismatch, plan.file,
                  "expected '" + r.name + "' at " + std::to_string(r.start) + ", found '" + std::string(text) + "'");
    }
    cursor = r.end;
  }
  if (plan.prelude_needed && plan.prelude_offset > source.size()) {
    throw Error(ErrorCode::kSpanMismatch, plan.file, "prelude offset past end of source");
  }

  std::string out;
  out.reserve(source.size() + plan.replacements.size() * (injected_name.size() + 1) + 160);
  size_t pos = 0;
  bool prelude_done = !plan.prelude_needed;
  auto emit_prelude_until = [&](size_t limit) {
    if (prelude_done || plan.prelude_offset > limit) return;
    out.append(source.substr(pos, plan.prelude_offset - pos));
    pos = plan.prelude_offset;
    if (plan.placement == RewritePlan::Placement::kAfterText) {
      out.append("\n").append(prelude_line(plan, injected_name));
    } else {
      out.append(prelude_line(plan, injected_name)).append("\n");
    }
    prelude_done = true;
  };
  for (const auto& r : plan.replacements) {
    emit_prelude_until(r.start);
    out.append(source.substr(pos, r.start - pos));
    const std::string_view text = source.substr(r.start, r.end - r.start);
    if (r.shorthand) out.append(text).append(": ");
    out.append(injected_name).append(".").append(text);
    pos = r.end;
  }
  emit_prelude_until(source.size());
  out.append(source.substr(pos));
  return out;
}

InstrumentedSource instrument_source(std::string_view source, const std::string& file, const std::string& package,
                                     const NameCatalog& catalog) {
  InstrumentedSource result;
  auto analyzed = analyze_source(source, source_type_for(file));
  if (!analyzed) {
    result.plan.file = file;
    result.plan.package = package;
    result.text = std::string(source);
    return result;
  }
  result.parse_ok = true;
  result.plan = plan_rewrites(source, *analyzed, catalog);
  result.plan.file = file;
  result.plan.package = package;
  if (result.plan.replacements.empty()) {
    result.text = std::string(source);
    return result;
  }
  result.text = apply_rewrites(source, result.plan, result.plan.injected_name);
  return result;
}

InstrumentReport instrument_tree(const DependencyGraph& graph, const fs::path& out_root, const NameCatalog& catalog) {
  std::error_code ec;
  if (fs::exists(out_root, ec)) {
    if (!fs::is_directory(out_root, ec) || !fs::is_empty(out_root, ec)) {
      throw Error(ErrorCode::kIoFailure, out_root.string(), "output directory must be empty or absent");
    }
  }
  return TreeMirror(graph, out_root, catalog).run();
}

}  // namespace capguard
