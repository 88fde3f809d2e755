// Copyright 2026 The treepart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "treepart/bridge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "treepart/case_io.hpp"
#include "treepart/error.hpp"

namespace treepart {
namespace fs = std::filesystem;

void check_bridge(const SolverBridge& bridge) {
  if (bridge.command.find("{model}") == std::string::npos ||
      bridge.command.find("{solution}") == std::string::npos) {
    throw InvalidArgument(
        "solver command must contain {model} and {solution} placeholders");
  }
  if (!(bridge.timeout_s > 0.0)) throw InvalidArgument("solver timeout must be positive");
  if (!(bridge.gap >= 0.0)) throw InvalidArgument("solver gap must be non-negative");
}

SolverBridge bridge_from_env() {
  const char* cmd = std::getenv(kSolverCommandEnv);
  if (cmd == nullptr || *cmd == '\0') {
    throw UnsupportedOperation(std::string("no solver bridge configured; set ") +
                               kSolverCommandEnv + " or pass --bridge-cmd");
  }
  SolverBridge bridge;
  bridge.command = cmd;
  check_bridge(bridge);
  return bridge;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

void replace_all(std::string& s, const std::string& key, const std::string& value) {
  for (std::size_t at = s.find(key); at != std::string::npos;
       at = s.find(key, at + value.size())) {
    s.replace(at, key.size(), value);
  }
}

// Scratch directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "treepart-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw IoError("cannot create scratch directory under " +
                    fs::temp_directory_path().string());
    }
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string tail_of(const fs::path& log) {
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.size() > 600) text = "..." + text.substr(text.size() - 600);
  return text;
}

// Runs cmd under /bin/sh in its own process group so a timeout can take
// down the whole pipeline. Returns the exit status.
int run_command(const std::string& cmd, const fs::path& log, double timeout_s) {
  const pid_t pid = ::fork();
  if (pid < 0) throw SolverError(SolverError::Reason::kNonzeroExit, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::dup2(fd, STDERR_FILENO);
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  auto pause = std::chrono::milliseconds(1);
  for (;;) {
    int status = 0;
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      if (WIFEXITED(status)) return WEXITSTATUS(status);
      return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw SolverError(SolverError::Reason::kTimeout,
                        "solver exceeded " + std::to_string(timeout_s) + " s");
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::milliseconds(50));
  }
}

}  // namespace

BridgeResult run_bridge(const MilpModel& model, const SolverBridge& bridge) {
  check_bridge(bridge);
  ScratchDir dir;
  const fs::path model_path = dir.path() / "model.lp";
  const fs::path solution_path = dir.path() / "solution.txt";
  const fs::path log_path = dir.path() / "solver.log";
  export_lp(model, model_path);

  std::string cmd = bridge.command;
  replace_all(cmd, "{model}", shell_quote(model_path.string()));
  replace_all(cmd, "{solution}", shell_quote(solution_path.string()));
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", bridge.timeout_s);
    replace_all(cmd, "{timeout}", buf);
    std::snprintf(buf, sizeof buf, "%.17g", bridge.gap);
    replace_all(cmd, "{gap}", buf);
  }

  const auto start = std::chrono::steady_clock::now();
  const int code = run_command(cmd, log_path, bridge.timeout_s);
  BridgeResult result;
  result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (code != 0) {
    throw SolverError(SolverError::Reason::kNonzeroExit,
                      "solver exited with status " + std::to_string(code) + ": " +
                          tail_of(log_path));
  }

  std::ifstream in(solution_path);
  if (!in) {
    throw SolverError(SolverError::Reason::kBadOutput,
                      "solver wrote no solution file: " + tail_of(log_path));
  }
  result.values.assign(model.variables.size(), 0.0);
  std::string line;
  int line_no = 0;
  int read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (name[0] == '#') {
      std::string key, value;
      if (name == "#" && (ls >> key >> value) && key == "status") {
        result.status = value;
      }
      continue;
    }
    std::string token;
    if (!(ls >> token)) {
      throw SolverError(SolverError::Reason::kBadOutput,
                        "solution line " + std::to_string(line_no) + " has no value");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw SolverError(SolverError::Reason::kBadOutput,
                        "solution line " + std::to_string(line_no) +
                            " has a malformed value '" + token + "'");
    }
    const int v = model.find_variable(name);
    if (v >= 0) {
      result.values[v] = value;
      ++read;
    }
  }
  if (result.status == "infeasible" || result.status == "infeasible_or_unbounded") {
    throw SolverError(SolverError::Reason::kInfeasible, "solver reports the model infeasible");
  }
  if (result.status == "time_limit" && read == 0) {
    throw SolverError(SolverError::Reason::kTimeout,
                      "solver hit its time limit without a feasible point");
  }
  if (read == 0 && !model.variables.empty()) {
    throw SolverError(SolverError::Reason::kBadOutput,
                      "solution file names none of the model variables (status '" +
                          result.status + "')");
  }
  return result;
}

TreePartitionSolution solve_via_bridge(const Network& net,
                                       const CoherencyGroups& groups,
                                       const SteinerFixings* ssr,
                                       const SolverBridge& bridge) {
  const auto start = std::chrono::steady_clock::now();
  const TreePartitionModel tpm = build_model(net, groups, ssr);
  BridgeResult result = run_bridge(tpm.model, bridge);

  // Integer values come back with solver tolerance noise; snap them before
  // checking so the check is about structure, not about 1e-10 residues.
  for (std::size_t v = 0; v < result.values.size(); ++v) {
    if (tpm.model.variables[v].kind == VarKind::kBinary) {
      result.values[v] = std::round(result.values[v]);
    }
  }
  const auto bad = violated_constraints(tpm.model, result.values, 1e-6);
  if (!bad.empty()) {
    std::string msg = "solver answer violates " + std::to_string(bad.size()) +
                      " model rows, first: " + bad.front();
    throw InvariantViolation(msg);
  }
  TreePartitionSolution sol = decode_solution(
      tpm, net, result.values, ssr != nullptr ? Method::kSsr : Method::kMilp);
  validate_solution(net, groups, sol);
  sol.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace treepart
