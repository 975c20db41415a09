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

#include "capguard/extractor.h"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "capguard/prelude.h"

namespace capguard {

using js::Node;
using js::NodeType;

namespace {

// Visits every node once, top-level prelude lines excluded.
template <typename Fn>
void walk(const js::Ast& ast, Fn&& fn) {
  if (ast.root() == nullptr) return;
  std::vector<const Node*> stack;
  for (auto it = ast.root()->list.rbegin(); it != ast.root()->list.rend(); ++it) {
    if (!is_prelude_statement(**it)) stack.push_back(*it);
  }
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    fn(*n);
    std::vector<const Node*> children;
    js::for_each_child(*n, [&](const Node& c) {
      if (children.empty() || children.back() != &c) children.push_back(&c);
    });
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }
}

std::optional<std::string> literal_specifier(const Node* arg) {
  if (arg == nullptr) return std::nullopt;
  if (arg->is(NodeType::kLiteral) && arg->literal_kind == js::LiteralKind::kString) return arg->name;
  if (arg->is(NodeType::kTemplateLiteral) && arg->list2.empty() && arg->list.size() == 1) {
    return arg->list.front()->name;
  }
  return std::nullopt;
}

bool is_require_call(const Node* n) {
  return n != nullptr && n->is(NodeType::kCallExpression) && n->a->is(NodeType::kIdentifier) &&
         n->a->name == "require" && !n->list.empty() && !n->list.front()->is(NodeType::kSpreadElement);
}

// The package or built-in named by `require("m")`, if `n` is one.
std::optional<std::string> required_module(const Node* n) {
  if (!is_require_call(n)) return std::nullopt;
  auto spec = literal_specifier(n->list.front());
  if (!spec || is_path_specifier(*spec)) return std::nullopt;
  return spec;
}

std::string key_member(const Node* key, bool computed) {
  if (computed) return std::string(kAllMembers);
  if (key->is(NodeType::kIdentifier)) return key->name;
  if (key->is(NodeType::kLiteral) && key->literal_kind == js::LiteralKind::kString && !key->name.empty() &&
      key->name.find('.') == std::string::npos) {
    return key->name;
  }
  return std::string(kAllMembers);
}

class Collector {
 public:
  explicit Collector(std::vector<CapabilityOrigin>* origins) : origins_(origins) {}

  void add(std::set<Capability>* set, Capability cap, const Node& at) {
    if (set->insert(cap).second && origins_ != nullptr) {
      origins_->push_back(CapabilityOrigin{std::move(cap), js::node_type_name(at.type), at.start});
    }
  }

 private:
  std::vector<CapabilityOrigin>* origins_;
};

ImportSet collect_imports(const js::Ast& ast, Collector& out) {
  ImportSet result;
  auto add_module = [&](const Node* source, const Node& at) {
    auto spec = literal_specifier(source);
    if (!spec) {
      ++result.dynamic_imports;
      return;
    }
    if (is_path_specifier(*spec)) return;
    out.add(&result.modules, Capability{CapabilityKind::kModule, *spec, std::nullopt}, at);
  };
  walk(ast, [&](const Node& n) {
    switch (n.type) {
      case NodeType::kCallExpression:
        if (n.a->is(NodeType::kIdentifier) && n.a->name == "require" && !n.list.empty()) {
          add_module(n.list.front()->is(NodeType::kSpreadElement) ? nullptr : n.list.front(), n);
        }
        break;
      case NodeType::kImportExpression:
        add_module(n.a, n);
        break;
      case NodeType::kImportDeclaration:
        add_module(n.a, n);
        break;
      case NodeType::kExportNamedDeclaration:
        if (n.b != nullptr) add_module(n.b, n);
        break;
      case NodeType::kExportAllDeclaration:
        add_module(n.b, n);
        break;
      default:
        break;
    }
  });
  return result;
}

std::set<Capability> collect_globals(const js::ScopeAnalysis& scopes, const NameCatalog& catalog, Collector& out) {
  std::set<Capability> globals;
  for (const auto& ref : scopes.references()) {
    if (ref.binding == nullptr && catalog.contains(ref.id->name)) {
      out.add(&globals, Capability{CapabilityKind::kGlobal, ref.id->name, std::nullopt}, *ref.id);
    }
  }
  return globals;
}

class MemberExtractor {
 public:
  MemberExtractor(const js::Ast& ast, const js::ScopeAnalysis& scopes, const NameCatalog& catalog, Collector& out)
      : ast_(ast), scopes_(scopes), catalog_(catalog), out_(out) {}

  std::set<Capability> run() {
    find_module_bindings();
    find_first_writes();
    walk(ast_, [&](const Node& n) { visit(n); });
    return members_;
  }

 private:
  void bind_module(const Node* id, const std::string& module) {
    const js::Binding* b = scopes_.declared(id);
    if (b == nullptr) return;
    if (module_of_.emplace(b, module).second) origin_id_.emplace(b, id);
  }

  void find_module_bindings() {
    walk(ast_, [&](const Node& n) {
      if (n.is(NodeType::kVariableDeclarator)) {
        if (n.a->is(NodeType::kIdentifier)) {
          if (auto m = required_module(n.b)) bind_module(n.a, *m);
          if (n.b != nullptr) declarators_with_init_.push_back(&n);
        }
        return;
      }
      if (!n.is(NodeType::kImportDeclaration)) return;
      auto source = literal_specifier(n.a);
      if (!source || is_path_specifier(*source)) return;
      for (const Node* spec : n.list) {
        const bool whole = !spec->is(NodeType::kImportSpecifier) ||
                           spec->a->name == "default";
        if (whole) bind_module(spec->b, *source);
      }
    });
  }

  void note_write(const js::Binding* b, uint32_t at) {
    if (module_of_.count(b) == 0) return;
    auto [it, inserted] = first_write_.emplace(b, at);
    if (!inserted && at < it->second) it->second = at;
  }

  void find_first_writes() {
    for (const auto& ref : scopes_.references()) {
      if (ref.write && ref.binding != nullptr) note_write(ref.binding, ref.id->start);
    }
    for (const Node* d : declarators_with_init_) {
      const js::Binding* b = scopes_.declared(d->a);
      if (b == nullptr) continue;
      auto origin = origin_id_.find(b);
      if (origin != origin_id_.end() && origin->second != d->a) note_write(b, d->a->start);
    }
  }

  // The module or global an expression denotes, if any.
  std::optional<Capability> object_of(const Node* e) const {
    if (e == nullptr) return std::nullopt;
    if (e->is(NodeType::kIdentifier)) {
      if (!scopes_.is_reference(e)) return std::nullopt;
      const js::Binding* b = scopes_.resolved(e);
      if (b == nullptr) {
        if (catalog_.contains(e->name)) return Capability{CapabilityKind::kGlobal, e->name, std::nullopt};
        return std::nullopt;
      }
      auto it = module_of_.find(b);
      if (it == module_of_.end()) return std::nullopt;
      auto w = first_write_.find(b);
      if (w != first_write_.end() && e->start > w->second) return std::nullopt;
      return Capability{CapabilityKind::kModule, it->second, std::nullopt};
    }
    if (auto m = required_module(e)) return Capability{CapabilityKind::kModule, *m, std::nullopt};
    return std::nullopt;
  }

  void add_member(const Capability& object, std::string member, const Node& at) {
    Capability cap = object;
    cap.member = std::move(member);
    out_.add(&members_, std::move(cap), at);
  }

  void destructure(const Capability& object, const Node* pattern) {
    if (pattern->is(NodeType::kObjectPattern)) {
      for (const Node* prop : pattern->list) {
        if (prop->is(NodeType::kRestElement)) {
          add_member(object, std::string(kAllMembers), *prop);
        } else {
          add_member(object, key_member(prop->a, prop->has(js::flag::kComputed)), *prop);
        }
      }
      return;
    }
    if (pattern->is(NodeType::kArrayPattern)) {
      for (size_t i = 0; i < pattern->list.size(); ++i) {
        const Node* e = pattern->list[i];
        if (e == nullptr) continue;
        add_member(object, e->is(NodeType::kRestElement) ? std::string(kAllMembers) : std::to_string(i), *e);
      }
    }
  }

  static bool is_pattern(const Node* n) {
    return n->is(NodeType::kObjectPattern) || n->is(NodeType::kArrayPattern);
  }

  void visit(const Node& n) {
    switch (n.type) {
      case NodeType::kMemberExpression: {
        if (n.b->is(NodeType::kPrivateIdentifier)) return;
        if (auto object = object_of(n.a)) {
          add_member(*object, key_member(n.b, n.has(js::flag::kComputed)), n);
        }
        return;
      }
      case NodeType::kVariableDeclarator:
        if (is_pattern(n.a)) {
          if (auto object = object_of(n.b)) destructure(*object, n.a);
        }
        return;
      case NodeType::kAssignmentExpression:
        if (n.op == "=" && is_pattern(n.a)) {
          if (auto object = object_of(n.b)) destructure(*object, n.a);
        }
        return;
      case NodeType::kImportDeclaration:
      case NodeType::kExportNamedDeclaration: {
        const Node* source_node = n.is(NodeType::kImportDeclaration) ? n.a : n.b;
        auto source = literal_specifier(source_node);
        if (!source || is_path_specifier(*source)) return;
        const Capability module{CapabilityKind::kModule, *source, std::nullopt};
        for (const Node* spec : n.list) {
          if (!spec->is(NodeType::kImportSpecifier) && !spec->is(NodeType::kExportSpecifier)) continue;
          const Node* imported = spec->a;
          const std::string& name = imported->name;
          if (name == "default") continue;
          add_member(module, key_member(imported, false), *spec);
        }
        return;
      }
      case NodeType::kExportAllDeclaration: {
        auto source = literal_specifier(n.b);
        if (!source || is_path_specifier(*source)) return;
        add_member(Capability{CapabilityKind::kModule, *source, std::nullopt}, std::string(kAllMembers), n);
        return;
      }
      default:
        return;
    }
  }

  const js::Ast& ast_;
  const js::ScopeAnalysis& scopes_;
  const NameCatalog& catalog_;
  Collector& out_;
  std::unordered_map<const js::Binding*, std::string> module_of_;
  std::unordered_map<const js::Binding*, const Node*> origin_id_;
  std::unordered_map<const js::Binding*, uint32_t> first_write_;
  std::vector<const Node*> declarators_with_init_;
  std::set<Capability> members_;
};

}  // namespace

bool is_path_specifier(std::string_view specifier) {
  return specifier.empty() || specifier.front() == '.' || specifier.front() == '/' ||
         specifier.starts_with("file:");
}

js::SourceType source_type_for(const std::string& path) {
  if (path.ends_with(".mjs")) return js::SourceType::kModule;
  if (path.ends_with(".cjs")) return js::SourceType::kScript;
  return js::SourceType::kDetect;
}

std::optional<AnalyzedSource> analyze_source(std::string_view source, js::SourceType type, js::ParseFailure* error) {
  js::ParseResult parsed = js::parse_source(source, type);
  if (!parsed.ok()) {
    if (error != nullptr) *error = parsed.error();
    return std::nullopt;
  }
  AnalyzedSource out;
  out.ast = parsed.take();
  out.scopes = std::make_unique<js::ScopeAnalysis>(*out.ast, analysis_options());
  return out;
}

ImportSet extract_imports(const js::Ast& ast) {
  Collector out(nullptr);
  return collect_imports(ast, out);
}

std::set<Capability> extract_globals(const js::ScopeAnalysis& scopes, const NameCatalog& catalog) {
  Collector out(nullptr);
  return collect_globals(scopes, catalog, out);
}

std::set<Capability> extract_members(const js::Ast& ast, const js::ScopeAnalysis& scopes, const NameCatalog& catalog) {
  Collector out(nullptr);
  return MemberExtractor(ast, scopes, catalog, out).run();
}

FileCapabilities extract_capabilities(const AnalyzedSource& source, const NameCatalog& catalog, bool tracing) {
  FileCapabilities result;
  Collector out(&result.origins);
  ImportSet imports = collect_imports(*source.ast, out);
  result.dynamic_imports = imports.dynamic_imports;
  result.coarse = std::move(imports.modules);
  for (auto& g : collect_globals(*source.scopes, catalog, out)) result.coarse.insert(g);
  if (tracing) {
    result.fine = MemberExtractor(*source.ast, *source.scopes, catalog, out).run();
    for (const auto& cap : result.fine) result.coarse.insert(cap.object());
  }
  return result;
}

FileCapabilities analyze_text(std::string_view source, const std::string& file, const NameCatalog& catalog,
                              bool tracing) {
  js::ParseFailure error;
  auto analyzed = analyze_source(source, source_type_for(file), &error);
  if (!analyzed) {
    FileCapabilities result;
    result.file = file;
    result.parse_ok = false;
    result.parse_error = std::move(error);
    return result;
  }
  FileCapabilities result = extract_capabilities(*analyzed, catalog, tracing);
  result.file = file;
  return result;
}

FileCapabilities analyze_file(const FileRecord& record, const NameCatalog& catalog, bool tracing) {
  std::ifstream in(record.path, std::ios::binary);
  std::ostringstream ss;
  if (in.is_open()) ss << in.rdbuf();
  const std::string name = record.relative_path.empty() ? record.path.generic_string() : record.relative_path;
  if (!in.is_open() || in.bad()) {
    FileCapabilities result;
    result.file = name;
    result.parse_ok = false;
    result.parse_error = js::ParseFailure{0, 1, 0, "unreadable file"};
    return result;
  }
  return analyze_text(ss.str(), name, catalog, tracing);
}

}  // namespace capguard
