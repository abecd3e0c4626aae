// Copyright 2025 The FACPL Workbench authors
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

#include "facpl/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef FACPL_DEFAULT_SOLVER
#define FACPL_DEFAULT_SOLVER "z3"
#endif

namespace facpl {

SolverConfig SolverConfig::from_environment() {
  SolverConfig c;
  const char* env = std::getenv("FACPL_SOLVER");
  c.executable = env && *env ? env : FACPL_DEFAULT_SOLVER;
  return c;
}

std::string outcome_name(SolverVerdict::Outcome o) {
  switch (o) {
    case SolverVerdict::Outcome::Sat: return "sat";
    case SolverVerdict::Outcome::Unsat: return "unsat";
    case SolverVerdict::Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

// First whole-line sat/unsat/unknown token of the output.
std::optional<SolverVerdict::Outcome> first_verdict(const std::string& out) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line == "sat") return SolverVerdict::Outcome::Sat;
    if (line == "unsat") return SolverVerdict::Outcome::Unsat;
    if (line == "unknown") return SolverVerdict::Outcome::Unknown;
  }
  return std::nullopt;
}

}  // namespace

SolverVerdict run_solver_file(const std::string& path,
                              const SolverConfig& cfg) {
  std::vector<std::string> argv_s{cfg.executable};
  for (const auto& a : cfg.args) argv_s.push_back(a == "{file}" ? path : a);
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  int fds[2];
  if (pipe(fds) != 0)
    throw SolverUnavailable(std::string("pipe: ") + std::strerror(errno));
  // A separate pipe reports exec failure to the parent.
  int errp[2];
  if (pipe(errp) != 0) {
    close(fds[0]);
    close(fds[1]);
    throw SolverUnavailable(std::string("pipe: ") + std::strerror(errno));
  }
  fcntl(errp[1], F_SETFD, FD_CLOEXEC);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0)
    throw SolverUnavailable(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    close(errp[0]);
    execvp(argv[0], argv.data());
    const int e = errno;
    (void)!write(errp[1], &e, sizeof e);
    _exit(127);
  }
  close(fds[1]);
  close(errp[1]);
  int exec_errno = 0;
  const bool exec_failed =
      read(errp[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
  close(errp[0]);
  if (exec_failed) {
    close(fds[0]);
    waitpid(pid, nullptr, 0);
    throw SolverUnavailable("cannot run solver '" + cfg.executable +
                            "': " + std::strerror(exec_errno));
  }

  std::string output;
  bool timed_out = false;
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(cfg.timeout_seconds));
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    const int r = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    const ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  if (timed_out) kill(pid, SIGKILL);
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);

  SolverVerdict v;
  v.output = output;
  v.duration_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  if (timed_out) {
    v.outcome = SolverVerdict::Outcome::Unknown;
    v.reason = "timeout";
    return v;
  }
  const auto verdict = first_verdict(output);
  if (!verdict) {
    std::string msg = "solver produced no verdict";
    if (WIFEXITED(status)) msg += " (exit " + std::to_string(WEXITSTATUS(status)) + ")";
    if (!output.empty()) msg += ": " + output.substr(0, 400);
    throw SolverUnavailable(msg);
  }
  v.outcome = *verdict;
  if (v.outcome == SolverVerdict::Outcome::Unknown) v.reason = "solver returned unknown";
  return v;
}

SolverVerdict run_solver(const std::string& script, const std::string& path,
                         const SolverConfig& cfg) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverUnavailable("cannot write " + path);
    out << script;
  }
  return run_solver_file(path, cfg);
}

std::string PropertyResult::verdict_name() const {
  if (!holds) return "unknown";
  return *holds ? "holds" : "fails";
}

std::string PropertyResult::to_json() const {
  nlohmann::ordered_json j;
  j["policy"] = policy;
  j["property"] = property;
  j["verdict"] = verdict_name();
  j["solverResult"] = outcome_name(verdict.outcome);
  if (!verdict.reason.empty()) j["reason"] = verdict.reason;
  j["durationMs"] = verdict.duration_ms;
  j["scriptPath"] = script_path;
  j["strings"] = strings;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j.dump();
}

PropertyResult verify(const Policy& p, const PropertyQuery& q,
                      const VerifyOptions& opts) {
  PropertyResult r;
  r.policy = opts.policy_name;
  r.property = q.describe();
  EmittedScript s = emit_query(p, q);
  r.strings = s.strings;
  r.warnings = s.warnings;
  r.script_path = opts.out_dir + "/" + opts.policy_name + "_" +
                  std::to_string(opts.index) + "-" + q.kind_name() + ".smt2";
  r.verdict = run_solver(s.text, r.script_path, opts.solver);
  using O = SolverVerdict::Outcome;
  if (r.verdict.outcome != O::Unknown) {
    const bool sat = r.verdict.outcome == O::Sat;
    r.holds = q.holds_on_sat() ? sat : !sat;
  }
  return r;
}

}  // namespace facpl
