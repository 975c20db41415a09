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

#ifndef CAPGUARD_PRELUDE_H_
#define CAPGUARD_PRELUDE_H_

#include <array>
#include <string_view>

#include "capguard/js/ast.h"
#include "capguard/js/scope.h"

namespace capguard {

// The contract between instrumented files and the runtime shim. Each
// rewritten file starts with one line of the form
//
//   const __cgd__ = globalThis.__capguard_globals__("<package>", <wrapper>);
//
// where <wrapper> is null or an object literal holding the CommonJS wrapper
// values (`require`, `module`, ...) the file did not rebind. The hook returns
// the object whose members stand in for the globals.
inline constexpr std::string_view kDefaultInjectedName = "__cgd__";
inline constexpr std::string_view kGlobalsHook = "__capguard_globals__";
inline constexpr std::array<std::string_view, 5> kWrapperNames = {"exports", "require", "module", "__filename",
                                                                  "__dirname"};

// True for a top-level statement shaped like the prelude line.
bool is_prelude_statement(const js::Node& stmt);

// Scope options shared by extraction and instrumentation: prelude lines are
// invisible to both.
js::ScopeOptions analysis_options();

}  // namespace capguard

#endif  // CAPGUARD_PRELUDE_H_
