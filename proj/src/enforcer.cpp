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

#include "facpl/enforcer.hpp"

#include <chrono>

namespace facpl {

void TextSink::write(const std::string& line) {
  std::lock_guard lock(mu_);
  lines_.push_back(line);
  if (out_) *out_ << line << '\n' << std::flush;
}

std::vector<std::string> TextSink::lines() const {
  std::lock_guard lock(mu_);
  return lines_;
}

void ActionRegistry::add(std::string action, ActionHandler handler) {
  handlers_[std::move(action)] = std::move(handler);
}

bool ActionRegistry::has(const std::string& action) const {
  return handlers_.count(action) != 0;
}

bool ActionRegistry::run(const std::string& action,
                         const std::vector<ArgValue>& args) const {
  auto it = handlers_.find(action);
  if (it == handlers_.end()) return false;
  return it->second(args);
}

namespace {

std::string join_args(const std::vector<ArgValue>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += arg_to_string(args[i]);
  }
  return out;
}

}  // namespace

ActionRegistry default_registry(DefaultActionOptions opts) {
  ActionRegistry reg;
  auto log_sink = opts.log_sink;
  reg.add("log", [log_sink](const std::vector<ArgValue>& args) {
    if (log_sink) log_sink->write(join_args(args));
    return true;
  });
  auto mail_sink = opts.mail_sink;
  const bool mail_ok = opts.mail_succeeds;
  reg.add("mailTo", [mail_sink, mail_ok](const std::vector<ArgValue>& args) {
    if (mail_sink) mail_sink->write("mailTo " + join_args(args));
    return mail_ok;
  });
  reg.add("compress", [](const std::vector<ArgValue>&) { return true; });
  return reg;
}

ActionRegistry scripted_registry(const std::map<std::string, bool>& outcomes) {
  ActionRegistry reg;
  for (const auto& [action, ok] : outcomes) {
    const bool result = ok;
    reg.add(action, [result](const std::vector<ArgValue>&) { return result; });
  }
  return reg;
}

DischargeResult discharge(const std::vector<InstantiatedObligation>& ios,
                          const ActionRegistry& reg) {
  DischargeResult out;
  for (const auto& io : ios) {
    const bool success = reg.run(io.action, io.args);
    DischargeEntry e{io.action, io.args, success, false};
    if (!success) {
      if (io.type == ObType::Optional) {
        e.skipped_optional = true;
      } else {
        out.ok = false;
      }
    }
    out.log.push_back(std::move(e));
  }
  return out;
}

EnforcedOutcome enforce(EnfAlg ea, const PdpResponse& res,
                        const ActionRegistry& reg) {
  const bool admissible =
      res.decision == Decision::Permit || res.decision == Decision::Deny;
  if (!admissible) {
    switch (ea) {
      case EnfAlg::DenyBiased: return {Decision::Deny, {}};
      case EnfAlg::PermitBiased: return {Decision::Permit, {}};
      case EnfAlg::Base: return {res.decision, {}};
    }
  }
  DischargeResult d = discharge(res.obligations, reg);
  EnforcedOutcome out;
  out.discharge_log = std::move(d.log);
  switch (ea) {
    case EnfAlg::DenyBiased:
      out.decision = res.decision == Decision::Permit && d.ok ? Decision::Permit
                                                              : Decision::Deny;
      break;
    case EnfAlg::PermitBiased:
      out.decision = res.decision == Decision::Deny && d.ok ? Decision::Deny
                                                            : Decision::Permit;
      break;
    case EnfAlg::Base:
      out.decision = d.ok ? res.decision : Decision::Indet;
      break;
  }
  return out;
}

EnforcedOutcome eval_pas(const Pas& pas, const SyntacticRequest& sr,
                         const ActionRegistry& reg, ContextProvider provider) {
  SemanticRequest r = build_request(sr, std::move(provider));
  return enforce(pas.enf, eval_pdp(pas.pdp, r), reg);
}

std::string discharge_line(const std::string& timestamp,
                           const DischargeEntry& e) {
  const char* status = e.succeeded          ? "OK"
                       : e.skipped_optional ? "SKIPPED-OPT"
                                            : "FAIL";
  return timestamp + " " + e.action + "(" + join_args(e.args) + ") " + status;
}

void write_discharge_log(TextSink& sink, const std::string& timestamp,
                         const EnforcedOutcome& outcome) {
  for (const auto& e : outcome.discharge_log)
    sink.write(discharge_line(timestamp, e));
}

std::string iso_timestamp_now() {
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                  std::chrono::system_clock::now().time_since_epoch())
                  .count();
  std::string s = Date{secs}.to_string();
  if (s.size() == 10) s += "T00:00:00";
  return s + "Z";
}

}  // namespace facpl
