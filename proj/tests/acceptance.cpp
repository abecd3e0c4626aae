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

// Acceptance suite: one PASS/FAIL line per criterion. The exit status counts
// failures other than the divergences listed in kKnownDivergences, which are
// still reported as FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "facpl/generator.hpp"
#include "facpl/oracle.hpp"
#include "facpl/smt.hpp"
#include "facpl/solver.hpp"
#include "facpl/translator.hpp"
#include "facpl/typing.hpp"

#include "combining_fixtures.hpp"
#include "support.hpp"

using namespace facpl;
using namespace facpl::test;

namespace {

// Pinned budgets.
constexpr double kRegressionBudgetMs = 1000;
constexpr double kSolverCallBudgetMs = 5000;
constexpr int kOraclePolicies = 200;
constexpr double kOracleBudgetMs = 5 * 60 * 1000;
constexpr int kIrrelevantNameTriples = 10000;
constexpr int kBenchRequests = 10000;
constexpr double kMeanEvalBudgetMs = 5;
constexpr double kCompletenessBudgetMs = 1000;

// P2 and Pr1: asserting every other name of P2 missing leaves the mailTo
// obligation without its recipient, so the exact request evaluates to indet.
const std::set<std::string> kKnownDivergences = {"2"};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SolverConfig solver() {
  SolverConfig cfg = SolverConfig::from_environment();
  cfg.timeout_seconds = kSolverCallBudgetMs / 1000;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "facpl-acceptance";
  std::filesystem::create_directories(dir);
  return dir.string();
}

Outcome regression() {
  const auto t0 = Clock::now();
  std::vector<std::string> bad;
  const PdpResponse a = eval_policy(p1(), build_request(req1(), time_provider(ehealth_time())));
  const std::vector<ArgValue> args{Value("e-Prescription"), Value("Dr. House"), Value("write")};
  const bool a_ok = a.decision == Decision::Permit && a.obligations.size() == 1 &&
                    a.obligations[0].type == ObType::Mandatory &&
                    a.obligations[0].action == "log" && a.obligations[0].args.size() == 4 &&
                    std::vector<ArgValue>(a.obligations[0].args.begin() + 1,
                                          a.obligations[0].args.end()) == args;
  if (!a_ok) bad.push_back("P1/req1 gave " + a.to_string());
  const PdpResponse b = eval_policy(p1(), build_request(req2()));
  if (!(b == PdpResponse::not_app())) bad.push_back("P1/req2 gave " + b.to_string());
  const PdpResponse c = eval_policy(p2(), build_request(req2_mail()));
  const bool c_ok = c.decision == Decision::Deny && c.obligations.size() == 1 &&
                    c.obligations[0].action == "mailTo";
  if (!c_ok) bad.push_back("P2/req2+mail gave " + c.to_string());
  const double ms = ms_since(t0);
  if (ms >= kRegressionBudgetMs) bad.push_back("took " + fmt("%.1f ms", ms));
  std::string detail = "P1/req1 permit+log, P1/req2 not-app, P2/req2+mail deny+mailTo in " +
                       fmt("%.1f ms", ms);
  for (const auto& s : bad) detail += "; " + s;
  return {bad.empty(), detail};
}

Outcome properties() {
  const auto pr = parse_properties(read_text("policies/ehealth/p1.props"),
                                   source_path("policies/ehealth"));
  const PropertyQuery& pr1 = pr.at(0);
  const PropertyQuery& pr2 = pr.at(1);
  struct Row {
    const char* label;
    Policy policy;
    const char* name;
    PropertyQuery query;
    bool expect;
  };
  const std::vector<Row> rows{
      {"P1 Pr1", p1(), "p1", pr1, false},
      {"P1 Pr2", p1(), "p1", pr2, true},
      {"P2 Pr1", p2(), "p2", pr1, true},
      {"P2 Pr2", p2(), "p2", pr2, false},
      {"P1 complete", p1(), "p1", PropertyQuery::complete(), false},
      {"P2 complete", p2(), "p2", PropertyQuery::complete(), true},
      {"P2 covers P1", p2(), "p2", PropertyQuery::cover(p1(), "p1"), true},
      {"P1 covers P2", p1(), "p1", PropertyQuery::cover(p2(), "p2"), false},
      {"P1/P2 disjoint", p1(), "p1", PropertyQuery::disjoint(p2(), "p2"), false},
  };
  int exact = 0;
  double slowest = 0;
  std::string misses;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    VerifyOptions o;
    o.solver = solver();
    o.out_dir = scratch();
    o.policy_name = rows[i].name;
    o.index = static_cast<int>(i + 1);
    const PropertyResult r = verify(rows[i].policy, rows[i].query, o);
    slowest = std::max(slowest, r.verdict.duration_ms);
    const bool ok = r.holds.has_value() && *r.holds == rows[i].expect &&
                    r.verdict.duration_ms < kSolverCallBudgetMs;
    exact += ok;
    if (!ok)
      misses += std::string("; ") + rows[i].label + " expected " +
                (rows[i].expect ? "holds" : "fails") + ", got " + r.verdict_name() + " (" +
                outcome_name(r.verdict.outcome) + ")";
  }
  return {exact == 9, std::to_string(exact) + "/9 verdicts exact, slowest call " +
                          fmt("%.1f ms", slowest) + misses};
}

Outcome matrices() {
  const std::vector<InstantiatedObligation> fo1{{ObType::Mandatory, "fo1a", {}},
                                                {ObType::Optional, "fo1b", {}}};
  const std::vector<InstantiatedObligation> fo2{{ObType::Mandatory, "fo2", {}}};
  int exact = 0;
  std::string misses;
  for (AlgId alg : kAllAlgorithms) {
    const auto& m = kMatrix.at(alg);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const bool ok = combine_binary(alg, arg(i, fo1), arg(j, fo2)) == expected_cell(m[i][j], fo1, fo2);
        exact += ok;
        if (!ok) misses += "; " + std::string(alg_name(alg)) + " " + std::to_string(i) + "," + std::to_string(j);
      }
  }
  return {exact == 128, std::to_string(exact) + "/128 cells exact" + misses};
}

Outcome oracle() {
  const auto t0 = Clock::now();
  int passed = 0, sampled = 0;
  std::uint64_t requests = 0, violations = 0, disagreements = 0;
  for (int i = 0; i < kOraclePolicies; ++i) {
    const GenSpec spec{1 + i % 3, 1 + (i / 3) % 3, 2 + i % 3, static_cast<std::uint64_t>(i)};
    const OracleReport r = check_correspondence(gen_policy(spec));
    requests += r.requests;
    violations += r.partition_violations;
    disagreements += r.requests - r.agreements;
    sampled += r.sampled;
    passed += r.ok() && !r.sampled;
  }
  const double ms = ms_since(t0);
  return {passed == kOraclePolicies && ms < kOracleBudgetMs,
          std::to_string(passed) + "/" + std::to_string(kOraclePolicies) +
              " policies fully enumerated and agreeing, " + std::to_string(requests) +
              " requests, " + std::to_string(violations) + " partition violations, " +
              std::to_string(disagreements) + " disagreements, " + std::to_string(sampled) +
              " sampled, " + fmt("%.1f s", ms / 1000)};
}

Outcome irrelevant_names() {
  std::mt19937_64 rng(2016);
  int identical = 0;
  for (int i = 0; i < kIrrelevantNameTriples; ++i) {
    const GenSpec spec{1 + i % 3, 1 + (i / 3) % 3, 3 + i % 6, static_cast<std::uint64_t>(i / 10)};
    const Policy p = gen_policy(spec);
    const NameSet used = names(p);
    const SemanticRequest r = gen_request(gen_attributes(spec), rng);
    SemanticRequest mutated = r;
    mutated.bind(attr("noise/n" + std::to_string(rng() % 5)), Value(static_cast<double>(rng() % 9)));
    for (const auto& a : gen_attributes(spec))
      if (!used.count(a.name)) mutated.bind(a.name, Value("noise"));
    identical += eval_policy(p, r) == eval_policy(p, mutated);
  }
  return {identical == kIrrelevantNameTriples,
          std::to_string(identical) + "/" + std::to_string(kIrrelevantNameTriples) + " triples identical"};
}

Outcome strategies() {
  int sequences = 0, agreed = 0;
  for (AlgId alg : kAllAlgorithms)
    for (int len = 1; len <= 4; ++len) {
      int total = 1;
      for (int k = 0; k < len; ++k) total *= 4;
      for (int code = 0; code < total; ++code) {
        std::vector<Policy> ps;
        for (int k = 0, c = code; k < len; ++k, c /= 4) ps.push_back(rule_for(c % 4, k));
        const SemanticRequest r;
        const PdpResponse all = combine(alg, Strategy::All, ps, r);
        const PdpResponse greedy = combine(alg, Strategy::Greedy, ps, r);
        ++sequences;
        agreed += all.decision == greedy.decision && is_prefix(greedy.obligations, all.obligations);
      }
    }
  return {sequences == 8 * 340 && agreed == sequences,
          std::to_string(agreed) + "/" + std::to_string(sequences) + " sequences agree"};
}

Outcome counts() {
  // Rows are d = 1..5, columns w = 1..5.
  constexpr std::uint64_t kTable[5][5] = {{1, 2, 3, 4, 5},
                                          {2, 6, 12, 20, 30},
                                          {3, 14, 39, 84, 155},
                                          {4, 30, 120, 340, 780},
                                          {5, 62, 363, 1364, 3905}};
  int exact = 0;
  for (int d = 1; d <= 5; ++d)
    for (int w = 1; w <= 5; ++w) {
      const Policy p = gen_policy({d, w, 10, 7});
      const auto n = subpolicy_count(d, w);
      exact += n == kTable[d - 1][w - 1] && subpolicy_total(p) == n;
    }
  return {exact == 25, std::to_string(exact) + "/25 counts exact"};
}

Outcome typing() {
  Rule r;
  r.target = eor(ename("cat/id"), eequal(ename("cat/id"), elit(5)));
  const SolveResult bad = welltyped(Policy(r));
  const bool unsat = std::holds_alternative<Unsat>(bad) &&
                     std::get<Unsat>(bad).message.find("cat/id") != std::string::npos;
  const SolveResult good = welltyped(p1());
  bool set_of_string = false;
  if (const auto* g = std::get_if<TypeAssignment>(&good)) {
    const auto it = g->find(attr("subject/permission"));
    set_of_string = it != g->end() && it->second == TypeTerm::set_of(TypeTerm::string());
  }
  return {unsat && set_of_string,
          std::string("or(cat/id, equal(cat/id, 5)) ") + (unsat ? "Unsat" : "accepted") +
              ", P1 subject/permission " + (set_of_string ? "Set(String)" : "not Set(String)")};
}

Outcome performance() {
  const GenSpec spec{3, 3, 1000, 42};
  const Policy p = gen_policy(spec);
  const auto attrs = gen_attributes(spec);
  std::mt19937_64 rng(9);
  std::vector<SemanticRequest> reqs;
  reqs.reserve(kBenchRequests);
  for (int i = 0; i < kBenchRequests; ++i) reqs.push_back(gen_request(attrs, rng));
  std::size_t permits = 0;
  const auto t0 = Clock::now();
  for (const auto& r : reqs) permits += eval_policy(p, r).decision == Decision::Permit;
  const double mean = ms_since(t0) / kBenchRequests;

  VerifyOptions o;
  o.solver = solver();
  o.out_dir = scratch();
  o.policy_name = "p2-perf";
  const PropertyResult c = verify(p2(), PropertyQuery::complete(), o);
  const bool ok = mean <= kMeanEvalBudgetMs && c.holds == true &&
                  c.verdict.duration_ms < kCompletenessBudgetMs;
  return {ok, "mean eval " + fmt("%.4f ms", mean) + " on p(3,3,1000) over " +
                  std::to_string(kBenchRequests) + " requests (" + std::to_string(permits) +
                  " permits), P2 complete " + c.verdict_name() + " in " +
                  fmt("%.1f ms", c.verdict.duration_ms)};
}

Outcome emission() {
  const std::string a = emit_policy(load_policy("policies/ehealth/p1.fpl")).text;
  const std::string b = emit_policy(load_policy("policies/ehealth/p1.fpl")).text;
  const std::string first = scratch() + "/p1-first.smt2", second = scratch() + "/p1-second.smt2";
  const auto v = run_solver(a + "(check-sat)\n", first, solver());
  { std::ofstream(second, std::ios::binary) << b << "(check-sat)\n"; }
  const bool identical = slurp(first) == slurp(second);
  const bool accepted = v.outcome != SolverVerdict::Outcome::Unknown &&
                        v.output.find("error") == std::string::npos;
  return {identical && accepted, std::string(identical ? "byte-identical" : "differing") +
                                     " scripts (" + std::to_string(a.size()) + " bytes), solver " +
                                     (accepted ? "accepted" : "rejected") + " with " +
                                     outcome_name(v.outcome)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1", regression}, {"2", properties},       {"3", matrices},
      {"4", oracle},     {"5", irrelevant_names}, {"6", strategies},
      {"7", counts},     {"8", typing},           {"9", performance},
      {"10", emission}};
  int unexpected = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const bool known = kKnownDivergences.count(id) > 0;
    if (!o.pass && !known) ++unexpected;
    std::printf("criterion %s: %s %s%s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                !o.pass && known ? " [known divergence, see decisions ledger]" : "");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
