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

#include <doctest.h>

#include <filesystem>
#include <random>
#include <regex>

#include "facpl/generator.hpp"
#include "facpl/operators.hpp"
#include "facpl/smt.hpp"
#include "facpl/solver.hpp"
#include "facpl/translator.hpp"
#include "support.hpp"

using namespace facpl;
using facpl::test::attr;

namespace {

std::string scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "facpl-test-smt";
  std::filesystem::create_directories(dir);
  return dir.string();
}

SolverConfig solver() {
  SolverConfig cfg = SolverConfig::from_environment();
  cfg.timeout_seconds = 20;
  return cfg;
}

// An operand of a truth-table case: a well-typed value, missing, or a value
// of the wrong type for the name's inferred type.
struct Operand {
  enum Kind { Val, Bot, Wrong } kind;
  ExtendedValue v;
};

Operand val(ExtendedValue v) { return {Operand::Val, std::move(v)}; }
const Operand kBot{Operand::Bot, {}};
const Operand kWrong{Operand::Wrong, {}};

ExtendedValue wrong_value(const TypeTerm& t) {
  switch (t.kind()) {
    case TypeTerm::Kind::Bool:
    case TypeTerm::Kind::String: return Value(7);
    default: return Value("zz");
  }
}

ExtendedValue concrete(const Operand& o, const TypeTerm& t) {
  switch (o.kind) {
    case Operand::Val: return o.v;
    case Operand::Bot: return Bottom{};
    case Operand::Wrong: return wrong_value(t);
  }
  return Bottom{};
}

struct Table {
  std::string label;
  bool unary = false;
  CBinOp op = CBinOp::Eq;
  TypeTerm ta = TypeTerm::boolean(), tb = TypeTerm::boolean();
  std::vector<Operand> as, bs;
  bool skip_double_wrong = false;
};

void collect_strings(const ExtendedValue& v, std::set<std::string>& out) {
  if (v.is_value() && v.value().is_string()) out.insert(v.value().as_string());
  if (v.is_set())
    for (const auto& e : v.set().elements())
      if (e.is_string()) out.insert(e.as_string());
}

// Runs every cell of `t` through the solver in one script and compares each
// observation (true, false, ⊥, error, numeric value) with the operator
// semantics used by the evaluator.
void check_table(const Table& t) {
  struct Cell {
    AttributeName a, b;
    Operand oa, ob;
    ExtendedValue expected;
  };
  std::vector<Cell> cells;
  TypeAssignment ta;
  std::set<std::string> strings;
  for (std::size_t i = 0; i < t.as.size(); ++i) {
    for (std::size_t j = 0; j < (t.unary ? 1 : t.bs.size()); ++j) {
      const Operand& oa = t.as[i];
      const Operand ob = t.unary ? kBot : t.bs[j];
      if (t.skip_double_wrong && oa.kind == Operand::Wrong && ob.kind == Operand::Wrong) continue;
      Cell c{attr("c" + std::to_string(cells.size()) + "/a"),
             attr("c" + std::to_string(cells.size()) + "/b"), oa, ob, {}};
      const ExtendedValue va = concrete(oa, t.ta), vb = concrete(ob, t.tb);
      c.expected = t.unary ? ops::four_not(va) : ops::apply([&] {
        switch (t.op) {
          case CBinOp::FAnd: return ExprOp::And;
          case CBinOp::FOr: return ExprOp::Or;
          case CBinOp::Eq: return ExprOp::Equal;
          case CBinOp::In: return ExprOp::In;
          case CBinOp::Gt: return ExprOp::GreaterThan;
          case CBinOp::Add: return ExprOp::Add;
          case CBinOp::Sub: return ExprOp::Subtract;
          case CBinOp::Mul: return ExprOp::Multiply;
          default: return ExprOp::Divide;
        }
      }(), va, vb);
      ta.emplace(c.a, t.ta);
      if (!t.unary) ta.emplace(c.b, t.tb);
      collect_strings(oa.v, strings);
      collect_strings(ob.v, strings);
      cells.push_back(std::move(c));
    }
  }

  SmtContext ctx(ta, strings);
  SmtContext::Named roots;
  std::vector<bool> want;
  std::vector<std::string> where;
  std::string asserts;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    const Constraint e = t.unary ? c_fnot(c_name(c.a)) : c_bin(t.op, c_name(c.a), c_name(c.b));
    const std::string p = "r" + std::to_string(k) + "_";
    const std::string label = t.label + " cell " + std::to_string(k) + " (" +
                              concrete(c.oa, t.ta).to_string() + ", " +
                              concrete(c.ob, t.tb).to_string() + ") expected " +
                              c.expected.to_string();
    const auto observe = [&](const std::string& suffix, Constraint obs, bool expected) {
      roots.emplace_back(p + suffix, std::move(obs));
      want.push_back(expected);
      where.push_back(label + " [" + suffix + "]");
    };
    const bool numeric = t.op == CBinOp::Add || t.op == CBinOp::Sub ||
                         t.op == CBinOp::Mul || t.op == CBinOp::Div;
    if (!numeric || t.unary) {
      observe("t", e, c.expected.is_true());
      observe("f", c_fnot(e), c.expected.is_false());
    }
    observe("b", c_is_bot(e), c.expected.is_bottom());
    observe("e", c_is_err(e), c.expected.is_error());
    if (numeric && !t.unary && c.expected.is_value())
      observe("v", c_bin(CBinOp::Eq, e, c_lit(c.expected.value())), true);
    const auto bind = [&](const AttributeName& n, const Operand& o) {
      if (o.kind == Operand::Val) asserts += ctx.assert_value(n, o.v);
      if (o.kind == Operand::Bot) asserts += ctx.assert_missing(n);
      if (o.kind == Operand::Wrong)
        asserts += "(assert (err " + SmtContext::name_symbol(n) + "))\n";
    };
    bind(c.a, c.oa);
    if (!t.unary) bind(c.b, c.ob);
  }
  // Every input is pinned, so the observations are determined. Asserting
  // that at least one observation differs from the oracle must be unsat;
  // a separate sat check on the bindings alone rules out a vacuous proof.
  // Refutation is used since observations over sets carry quantifiers for
  // which the solver cannot always build a model.
  const std::string base = ctx.prelude() + ctx.define(roots, {}, "") + asserts;
  const std::string dir = scratch_dir() + "/table-" + t.label;
  const SolverVerdict consistent = run_solver(base + "(check-sat)\n", dir + "-sat.smt2", solver());
  REQUIRE_MESSAGE(consistent.outcome == SolverVerdict::Outcome::Sat, t.label, ": ", consistent.output);
  std::string differs = "(assert (or";
  for (std::size_t i = 0; i < roots.size(); ++i)
    differs += " (= " + roots[i].first + (want[i] ? " false)" : " true)");
  differs += "))\n(check-sat)\n(get-value (";
  for (const auto& [n, _] : roots) differs += n + " ";
  differs += "))\n";
  const SolverVerdict v = run_solver(base + differs, dir + ".smt2", solver());
  CHECK_MESSAGE(v.outcome == SolverVerdict::Outcome::Unsat, t.label, ": ", v.output);
  if (v.outcome != SolverVerdict::Outcome::Sat) return;
  const std::regex pair(R"(\((r\d+_[tfbev])\s+(true|false)\))");
  for (auto it = std::sregex_iterator(v.output.begin(), v.output.end(), pair);
       it != std::sregex_iterator(); ++it)
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (roots[i].first == (*it)[1] && want[i] != ((*it)[2] == "true"))
        FAIL_CHECK("disagreement: ", where[i]);
}

std::vector<Operand> with_edges(std::vector<ExtendedValue> vs) {
  std::vector<Operand> out;
  for (auto& v : vs) out.push_back(val(std::move(v)));
  out.push_back(kBot);
  out.push_back(kWrong);
  return out;
}

ExtendedValue date(const char* s) { return Value(*Date::parse(s)); }
ExtendedValue strings(std::initializer_list<const char*> xs) {
  std::vector<Value> v;
  for (const char* x : xs) v.push_back(Value(x));
  return ValueSet(v);
}

PropertyResult run(const Policy& p, const PropertyQuery& q, const std::string& name) {
  VerifyOptions o;
  o.solver = solver();
  o.out_dir = scratch_dir();
  o.policy_name = name;
  return verify(p, q, o);
}

SyntacticRequest syntactic(const SemanticRequest& r, bool& representable) {
  SyntacticRequest out;
  representable = true;
  for (const auto& [n, v] : r.bindings()) {
    if (v.is_value()) out.push_back({n, v.value()});
    if (v.is_set()) {
      if (v.set().size() < 2) representable = false;
      for (const auto& e : v.set().elements()) out.push_back({n, e});
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("solver driver") {
  TEST_CASE("trivial scripts") {
    const auto sat = run_solver("(assert (= 1 1))\n(check-sat)\n", scratch_dir() + "/one.smt2", solver());
    CHECK(sat.outcome == SolverVerdict::Outcome::Sat);
    const auto unsat = run_solver("(declare-const p Bool)\n(assert (and p (not p)))\n(check-sat)\n",
                                  scratch_dir() + "/two.smt2", solver());
    CHECK(unsat.outcome == SolverVerdict::Outcome::Unsat);
    CHECK(outcome_name(unsat.outcome) == "unsat");
  }

  TEST_CASE("missing solver and timeouts") {
    SolverConfig missing;
    missing.executable = "/nonexistent/solver";
    CHECK_THROWS_AS(run_solver("(check-sat)\n", scratch_dir() + "/three.smt2", missing),
                    SolverUnavailable);

    SolverConfig slow;
    slow.executable = "/bin/sh";
    slow.args = {"-c", "sleep 5"};
    slow.timeout_seconds = 0.3;
    const auto v = run_solver("(check-sat)\n", scratch_dir() + "/four.smt2", slow);
    CHECK(v.outcome == SolverVerdict::Outcome::Unknown);
    CHECK(v.reason == "timeout");
    CHECK(v.duration_ms < 3000);
  }
}

TEST_SUITE("smt emission") {
  TEST_CASE("byte-stable scripts") {
    const std::string a = emit_policy(test::p1()).text;
    const std::string b = emit_policy(test::parse_or_throw(print(test::p1()))).text;
    CHECK(a == b);
    CHECK(a.find("cns_target_Rule1") != std::string::npos);
    CHECK(a.find("(define-fun cns_permit () Bool") != std::string::npos);
    CHECK(a.find("check-sat") == std::string::npos);
    const auto q = PropertyQuery::cover(test::p2(), "p2");
    CHECK(emit_query(test::p1(), q).text == emit_query(test::p1(), q).text);
  }

  TEST_CASE("exact requests mark the other names missing") {
    const auto q = PropertyQuery::evaluate_to({{attr("subject/role"), Value("pharmacist")}},
                                              Decision::Deny);
    const std::string text = emit_query(test::p1(), q).text;
    for (const auto& n : names(test::p1())) {
      if (n == attr("subject/role")) continue;
      CHECK(text.find("(assert (miss " + SmtContext::name_symbol(n) + "))") != std::string::npos);
    }
    CHECK(text.find("(assert (miss n_subject/role))") == std::string::npos);
  }

  TEST_CASE("extendable requests constrain only their names") {
    const auto q = PropertyQuery::may_evaluate_to({{attr("action/id"), Value("write")}},
                                                  Decision::Permit);
    const std::string text = emit_query(test::p1(), q).text;
    CHECK(text.find("(assert (= (val n_action/id)") != std::string::npos);
    CHECK(text.find("(assert (miss") == std::string::npos);
    const std::string complete = emit_query(test::p1(), PropertyQuery::complete()).text;
    CHECK(complete.find("(assert (= (val") == std::string::npos);
  }

  TEST_CASE("typed-request and ill-typed errors") {
    const auto bad = PropertyQuery::evaluate_to({{attr("subject/role"), Value(3)}}, Decision::Deny);
    CHECK_THROWS_AS(emit_query(test::p1(), bad), SmtError);
    Rule r;
    r.target = eor(ename("cat/id"), eequal(ename("cat/id"), elit(5)));
    CHECK_THROWS_AS(emit_policy(Policy(r)), SmtError);
    PolicySet greedy;
    greedy.strategy = Strategy::Greedy;
    greedy.policies = {Policy(Rule{})};
    CHECK_THROWS_AS(emit_policy(greedy), GreedyNotTranslatable);
  }

  TEST_CASE("property files") {
    const auto qs = parse_properties(test::read_text("policies/ehealth/p1.props"),
                                     test::source_path("policies/ehealth"));
    REQUIRE(qs.size() == 5);
    CHECK(qs[0].kind == PropertyQuery::Kind::EvaluateTo);
    CHECK(qs[0].decision == Decision::Deny);
    CHECK(qs[0].request.size() == 3);
    CHECK(qs[1].kind == PropertyQuery::Kind::MayEvaluateTo);
    CHECK(qs[2].kind == PropertyQuery::Kind::Complete);
    CHECK(qs[3].kind == PropertyQuery::Kind::Cover);
    CHECK(qs[3].other.has_value());
    CHECK(qs[4].kind == PropertyQuery::Kind::Disjoint);
    CHECK_THROWS_AS(parse_properties("frobnicate\n", "."), PropertyFileError);
    CHECK_THROWS_AS(parse_properties("evaluate-to maybe (a/b, 1)\n", "."), PropertyFileError);
    CHECK_THROWS_AS(parse_properties("cover nowhere.fpl\n", "."), PropertyFileError);
  }
}

TEST_SUITE("smt operator tables") {
  TEST_CASE("boolean connectives") {
    const auto b = with_edges({true, false});
    check_table({"and", false, CBinOp::FAnd, TypeTerm::boolean(), TypeTerm::boolean(), b, b});
    check_table({"or", false, CBinOp::FOr, TypeTerm::boolean(), TypeTerm::boolean(), b, b});
    check_table({"not", true, CBinOp::FAnd, TypeTerm::boolean(), TypeTerm::boolean(), b, {}});
  }

  TEST_CASE("equality on every sort") {
    const auto s = with_edges({Value("x"), Value("y")});
    check_table({"eq-str", false, CBinOp::Eq, TypeTerm::string(), TypeTerm::string(), s, s, true});
    const auto r = with_edges({Value(0), Value(2.5)});
    check_table({"eq-real", false, CBinOp::Eq, TypeTerm::dbl(), TypeTerm::dbl(), r, r, true});
    const auto d = with_edges({date("2016-10-22T10:15:12"), date("2017-01-01T00:00:00")});
    check_table({"eq-date", false, CBinOp::Eq, TypeTerm::date(), TypeTerm::date(), d, d, true});
    const auto b = with_edges({true, false});
    check_table({"eq-bool", false, CBinOp::Eq, TypeTerm::boolean(), TypeTerm::boolean(), b, b, true});
    const TypeTerm set = TypeTerm::set_of(TypeTerm::string());
    const auto ss = with_edges({strings({"x"}), strings({"x", "y"}), strings({"y", "x"})});
    check_table({"eq-set", false, CBinOp::Eq, set, set, ss, ss, true});
  }

  TEST_CASE("membership") {
    const TypeTerm set = TypeTerm::set_of(TypeTerm::string());
    check_table({"in", false, CBinOp::In, TypeTerm::string(), set,
                 with_edges({Value("x"), Value("y")}),
                 with_edges({strings({"x"}), strings({"x", "z"})})});
  }

  TEST_CASE("ordering") {
    const auto r = with_edges({Value(0), Value(2.5)});
    check_table({"gt-real", false, CBinOp::Gt, TypeTerm::dbl(), TypeTerm::dbl(), r, r});
    const auto d = with_edges({date("2016-10-22T10:15:12"), date("2017-01-01T00:00:00")});
    check_table({"gt-date", false, CBinOp::Gt, TypeTerm::date(), TypeTerm::date(), d, d});
  }

  TEST_CASE("arithmetic") {
    const auto r = with_edges({Value(0), Value(2), Value(-4), Value(0.5)});
    for (auto [label, op] : {std::pair{"add", CBinOp::Add}, {"sub", CBinOp::Sub},
                             {"mul", CBinOp::Mul}, {"div", CBinOp::Div}})
      check_table({label, false, op, TypeTerm::dbl(), TypeTerm::dbl(), r, r});
  }
}

TEST_SUITE("smt verification") {
  TEST_CASE("e-Health verdicts") {
    const auto pharmacist_write = SyntacticRequest{{attr("subject/role"), Value("pharmacist")},
                                                   {attr("action/id"), Value("write")},
                                                   {attr("resource/type"), Value("e-Prescription")}};
    const auto pr1 = PropertyQuery::evaluate_to(pharmacist_write, Decision::Deny);
    const auto pr2 = PropertyQuery::may_evaluate_to(
        {{attr("subject/role"), Value("pharmacist")}, {attr("resource/type"), Value("e-Prescription")}},
        Decision::NotApp);
    CHECK(run(test::p1(), pr1, "p1").holds == false);
    CHECK(run(test::p1(), pr2, "p1").holds == true);
    CHECK(run(test::p2(), pr2, "p2").holds == false);
    CHECK(run(test::p1(), PropertyQuery::complete(), "p1").holds == false);
    const PropertyResult complete = run(test::p2(), PropertyQuery::complete(), "p2");
    CHECK(complete.holds == true);
    CHECK(complete.verdict.duration_ms < 1000);
    CHECK(run(test::p2(), PropertyQuery::cover(test::p1(), "p1"), "p2").holds == true);
    CHECK(run(test::p1(), PropertyQuery::cover(test::p2(), "p2"), "p1").holds == false);
    CHECK(run(test::p1(), PropertyQuery::disjoint(test::p2(), "p2"), "p1").holds == false);
  }

  TEST_CASE("P2 denies the pharmacist once the patient mail is known") {
    auto request = SyntacticRequest{{attr("subject/role"), Value("pharmacist")},
                                    {attr("action/id"), Value("write")},
                                    {attr("resource/type"), Value("e-Prescription")}};
    // Without the mail address the mailTo obligation cannot be instantiated.
    CHECK(run(test::p2(), PropertyQuery::evaluate_to(request, Decision::Indet), "p2").holds == true);
    request.push_back({attr("resource/patient-mail"), Value("alice@example.org")});
    CHECK(run(test::p2(), PropertyQuery::evaluate_to(request, Decision::Deny), "p2").holds == true);
  }

  TEST_CASE("must-evaluate-to") {
    const auto q = PropertyQuery::must_evaluate_to(
        {{attr("subject/role"), Value("doctor")}, {attr("action/id"), Value("write")}},
        Decision::Deny);
    CHECK(run(test::p2(), q, "p2").holds == false);
    Policy always_deny = Rule{Effect::Deny};
    PolicySet s;
    s.target = eequal(ename("a/b"), elit("v"));
    s.policies = {always_deny};
    s.alg = AlgId::DUnlessP;
    CHECK(run(s, PropertyQuery::must_evaluate_to({{attr("a/b"), Value("v")}}, Decision::Deny), "s")
              .holds == true);
  }

  TEST_CASE("JSON report") {
    const PropertyResult r = run(test::p2(), PropertyQuery::complete(), "p2");
    CHECK(r.verdict_name() == "holds");
    const std::string j = r.to_json();
    CHECK(j.find("\"verdict\":\"holds\"") != std::string::npos);
    CHECK(j.find("\"solverResult\":\"unsat\"") != std::string::npos);
    CHECK(std::filesystem::exists(r.script_path));
  }

  TEST_CASE("solver agrees with the evaluator on exact requests") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int i = 0; i < 40 && checked < 30; ++i) {
      const GenSpec spec{1 + i % 2, 1 + i % 3, 3 + i % 3, 500u + i};
      const Policy p = gen_policy(spec);
      const SemanticRequest r = gen_request(gen_attributes(spec), rng);
      bool representable = true;
      const SyntacticRequest sr = syntactic(r, representable);
      if (!representable) continue;
      const Decision d = eval_policy(p, build_request(sr)).decision;
      const Decision other = d == Decision::Permit ? Decision::Deny : Decision::Permit;
      const auto yes = run(p, PropertyQuery::evaluate_to(sr, d), "gen" + std::to_string(i));
      const auto no = run(p, PropertyQuery::evaluate_to(sr, other), "gen" + std::to_string(i));
      CHECK_MESSAGE(yes.holds == true, "policy ", i, " decision ", decision_name(d));
      CHECK_MESSAGE(no.holds == false, "policy ", i);
      ++checked;
    }
    CHECK(checked >= 20);
  }
}
