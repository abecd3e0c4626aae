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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "facpl/smt.hpp"

namespace facpl {

// The solver could not be run at all (missing executable, crash without a
// verdict). Distinct from an unknown verdict.
class SolverUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  std::string executable;
  // `{file}` is replaced by the script path.
  std::vector<std::string> args{"-smt2", "{file}"};
  double timeout_seconds = 30;

  // FACPL_SOLVER if set, otherwise the solver found at configure time.
  static SolverConfig from_environment();
};

struct SolverVerdict {
  enum class Outcome { Sat, Unsat, Unknown };
  Outcome outcome = Outcome::Unknown;
  std::string reason;  // for unknown: solver reason or "timeout"
  std::string output;  // raw solver output
  double duration_ms = 0;
};

std::string outcome_name(SolverVerdict::Outcome o);

// Writes nothing; runs the solver on an existing script file.
SolverVerdict run_solver_file(const std::string& path, const SolverConfig& cfg);
// Writes `script` to `path` and runs the solver on it.
SolverVerdict run_solver(const std::string& script, const std::string& path,
                         const SolverConfig& cfg);

struct PropertyResult {
  std::string policy;
  std::string property;
  std::string script_path;
  SolverVerdict verdict;
  // Unset when the solver answered unknown.
  std::optional<bool> holds;
  std::vector<std::string> strings;
  std::vector<std::string> warnings;

  std::string verdict_name() const;  // holds, fails or unknown
  std::string to_json() const;
};

struct VerifyOptions {
  SolverConfig solver = SolverConfig::from_environment();
  std::string out_dir = ".";
  std::string policy_name = "policy";
  int index = 1;
};

PropertyResult verify(const Policy& p, const PropertyQuery& q,
                      const VerifyOptions& opts);

}  // namespace facpl
