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

#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "capguard/cli.h"
#include "capguard/errors.h"

namespace fs = std::filesystem;
using capguard::cli::OutputFormat;

int main(int argc, char** argv) {
  CLI::App app{"capguard: infer, diff and enforce per-package capability policies"};
  app.require_subcommand(1);

  bool tracing = false;
  std::string format = "human";
  std::optional<fs::path> catalog;
  std::optional<fs::path> policy;
  std::optional<fs::path> out;

  auto shared = [&](CLI::App* cmd, bool with_tracing) {
    if (with_tracing) {
      cmd->add_flag("--tracing,!--no-tracing", tracing, "Record member accesses (policyFine)");
    }
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"human", "records"}));
    cmd->add_option("--catalog", catalog, "Directory with globals.txt, builtin-modules.txt, members.txt")
        ->check(CLI::ExistingDirectory);
  };

  fs::path root;
  auto* infer = app.add_subcommand("infer", "Write the capability policy of an installed project");
  infer->add_option("root", root, "Project root")->required()->check(CLI::ExistingDirectory);
  infer->add_option("--policy,--out", policy, "Output path (default: <root>/capability-policy.json)");
  shared(infer, true);

  auto* instrument = app.add_subcommand("instrument", "Write an instrumented copy of a project");
  instrument->add_option("root", root, "Project root")->required()->check(CLI::ExistingDirectory);
  instrument->add_option("--out", out, "Output directory, empty or absent")->required();
  shared(instrument, false);

  fs::path old_policy;
  fs::path new_policy;
  std::string old_version;
  std::string new_version;
  auto* diff = app.add_subcommand("diff", "Compare two policies; exits 2 when capabilities were added");
  diff->add_option("old", old_policy, "Old policy")->required()->check(CLI::ExistingFile);
  diff->add_option("new", new_policy, "New policy")->required()->check(CLI::ExistingFile);
  diff->add_option("old_version", old_version, "Old version")->required();
  diff->add_option("new_version", new_version, "New version")->required();
  diff->add_option("--format", format, "Report format")->check(CLI::IsMember({"human", "records"}));

  auto* stats = app.add_subcommand("stats", "Attack-surface reduction of a policy");
  stats->add_option("policy_file", policy, "Policy file")->check(CLI::ExistingFile);
  stats->add_option("--policy", policy, "Policy file")->check(CLI::ExistingFile);
  shared(stats, false);

  auto* verify = app.add_subcommand("verify", "Check extracted imports against declared dependencies");
  verify->add_option("root", root, "Project root")->required()->check(CLI::ExistingDirectory);
  shared(verify, false);

  capguard::cli::RunOptions run_options;
  std::optional<fs::path> shim;
  auto* run = app.add_subcommand("run", "Run a script from an instrumented copy under the shim");
  run->add_option("root", root, "Project root")->required()->check(CLI::ExistingDirectory);
  run->add_option("entry", run_options.entry, "Entry script, relative to the root")->required();
  run->add_option("--policy", policy, "Policy file (default: <root>/capability-policy.json)");
  run->add_option("--shim", shim, "Shim script (default: $CAPGUARD_SHIM, then the bundled shim)");
  run->add_option("--node", run_options.node, "Node.js executable");
  run->add_option("--out", out, "Keep the instrumented copy here");
  run->add_flag("--allow-unparsable", run_options.allow_unparsable, "Run even if some files were copied unmodified");
  // Everything from the first argument after the entry on goes to the script.
  run->prefix_command();
  run->usage("capguard run [OPTIONS] root entry [script args...]");
  shared(run, false);

  // For run, arguments after a bare `--` go to the script untouched.
  int parsed_argc = argc;
  std::vector<std::string> script_tail;
  if (argc > 1 && std::string_view(argv[1]) == "run") {
    for (int i = 2; i < argc; ++i) {
      if (std::string_view(argv[i]) != "--") continue;
      parsed_argc = i;
      script_tail.assign(argv + i + 1, argv + argc);
      break;
    }
  }
  CLI11_PARSE(app, parsed_argc, argv);

  const capguard::cli::Streams io{std::cout, std::cerr,
                                  format == "records" ? OutputFormat::kRecords : OutputFormat::kHuman};
  capguard::cli::Catalogs catalogs;
  try {
    catalogs = capguard::cli::load_catalogs(catalog);
  } catch (const capguard::Error& e) {
    std::cerr << "capguard: " << e.what() << '\n';
    return capguard::cli::kExitFailure;
  }

  if (infer->parsed()) return capguard::cli::cmd_infer(root, tracing, policy, catalogs, io);
  if (instrument->parsed()) return capguard::cli::cmd_instrument(root, *out, catalogs, io);
  if (diff->parsed()) return capguard::cli::cmd_diff(old_policy, new_policy, old_version, new_version, io);
  if (stats->parsed()) {
    if (!policy) {
      std::cerr << "capguard: stats needs a policy file\n";
      return capguard::cli::kExitFailure;
    }
    return capguard::cli::cmd_stats(*policy, catalogs, io);
  }
  if (verify->parsed()) return capguard::cli::cmd_verify(root, catalogs, io);
  run_options.project_root = root;
  run_options.args = run->remaining();
  run_options.args.insert(run_options.args.end(), script_tail.begin(), script_tail.end());
  run_options.policy = policy;
  run_options.shim = shim;
  run_options.out_root = out;
  return capguard::cli::cmd_run(run_options, catalogs, io);
}
