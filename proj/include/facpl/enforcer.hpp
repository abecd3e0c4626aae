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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/evaluator.hpp"

namespace facpl {

// Line-oriented, thread-safe text sink. Lines go to a stream when one is
// attached and are always retained in memory.
class TextSink {
 public:
  TextSink() = default;
  explicit TextSink(std::ostream* out) : out_(out) {}

  void write(const std::string& line);
  std::vector<std::string> lines() const;

 private:
  mutable std::mutex mu_;
  std::ostream* out_ = nullptr;
  std::vector<std::string> lines_;
};

// Returns true when the action succeeded.
using ActionHandler = std::function<bool(const std::vector<ArgValue>&)>;

class ActionRegistry {
 public:
  void add(std::string action, ActionHandler handler);
  // Unknown actions fail.
  bool run(const std::string& action, const std::vector<ArgValue>& args) const;
  bool has(const std::string& action) const;

 private:
  std::map<std::string, ActionHandler> handlers_;
};

struct DefaultActionOptions {
  std::shared_ptr<TextSink> log_sink;   // receives log(...) records
  std::shared_ptr<TextSink> mail_sink;  // receives mailTo(...) intents
  bool mail_succeeds = true;
};

// log (always succeeds), mailTo (configurable), compress (no-op).
ActionRegistry default_registry(DefaultActionOptions opts = {});

// Registry whose handlers report fixed outcomes per action id.
ActionRegistry scripted_registry(const std::map<std::string, bool>& outcomes);

struct DischargeEntry {
  std::string action;
  std::vector<ArgValue> args;
  bool succeeded = false;
  bool skipped_optional = false;  // optional obligation whose failure was ignored

  friend bool operator==(const DischargeEntry&,
                         const DischargeEntry&) = default;
};

struct DischargeResult {
  bool ok = true;
  std::vector<DischargeEntry> log;
};

// Attempts every obligation in order; ok iff every mandatory one succeeded.
DischargeResult discharge(const std::vector<InstantiatedObligation>& ios,
                          const ActionRegistry& reg);

struct EnforcedOutcome {
  Decision decision = Decision::NotApp;
  std::vector<DischargeEntry> discharge_log;
};

EnforcedOutcome enforce(EnfAlg ea, const PdpResponse& res,
                        const ActionRegistry& reg);

EnforcedOutcome eval_pas(const Pas& pas, const SyntacticRequest& sr,
                         const ActionRegistry& reg,
                         ContextProvider provider = nullptr);

// `<ISO-timestamp> <actionId>(<comma-joined args>) <OK|FAIL|SKIPPED-OPT>`
std::string discharge_line(const std::string& timestamp,
                           const DischargeEntry& e);
void write_discharge_log(TextSink& sink, const std::string& timestamp,
                         const EnforcedOutcome& outcome);
std::string iso_timestamp_now();

}  // namespace facpl
