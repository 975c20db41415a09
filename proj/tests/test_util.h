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

#ifndef CAPGUARD_TESTS_TEST_UTIL_H_
#define CAPGUARD_TESTS_TEST_UTIL_H_

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

namespace capguard::testing {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(CAPGUARD_SOURCE_DIR); }
inline fs::path data_dir() { return source_dir() / "tests" / "data"; }
inline fs::path fixtures_dir() { return source_dir() / "tests" / "fixtures"; }
inline fs::path corpus_dir() { return source_dir() / "tests" / "corpus"; }

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// A directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "capguard-test-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) std::abort();
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

// Writes package.json and package-lock.json for a package at `dir`.
inline void write_manifest(const fs::path& dir, const std::string& name, const std::string& version,
                           const std::string& deps_json = "{}", bool lockfile = false) {
  write_file(dir / "package.json", "{\n  \"name\": \"" + name + "\",\n  \"version\": \"" + version +
                                       "\",\n  \"dependencies\": " + deps_json + "\n}\n");
  if (lockfile) {
    write_file(dir / "package-lock.json", "{\n  \"name\": \"" + name + "\",\n  \"version\": \"" + version +
                                              "\",\n  \"lockfileVersion\": 3,\n  \"packages\": {}\n}\n");
  }
}

// A project root with a lockfile plus `files` (relative path -> content).
inline void write_project(const fs::path& root, const std::string& name,
                          const std::map<std::string, std::string>& files, const std::string& deps_json = "{}") {
  write_manifest(root, name, "1.0.0", deps_json, true);
  for (const auto& [rel, text] : files) write_file(root / rel, text);
}

struct CommandResult {
  int status = -1;
  std::string out;
};

// Runs a shell command and captures its stdout.
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

inline std::string capguard_bin() { return CAPGUARD_BIN; }

}  // namespace capguard::testing

#endif  // CAPGUARD_TESTS_TEST_UTIL_H_
