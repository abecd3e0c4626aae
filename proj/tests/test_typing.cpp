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

#include "facpl/generator.hpp"
#include "facpl/typing.hpp"
#include "support.hpp"

using namespace facpl;
using facpl::test::attr;

namespace {

const TypeAssignment& assignment(const SolveResult& r) {
  const std::string why = std::get_if<Unsat>(&r) ? std::get<Unsat>(r).message : "";
  REQUIRE_MESSAGE(std::holds_alternative<TypeAssignment>(r), why);
  return std::get<TypeAssignment>(r);
}

bool unsat(const SolveResult& r) { return std::holds_alternative<Unsat>(r); }

}  // namespace

TEST_SUITE("type inference") {
  TEST_CASE("the ill-typed disjunction") {
    TypeEnv env;
    const Expr e = eor(ename("cat/id"), eequal(ename("cat/id"), elit(5)));
    const Inferred inf = infer(e, env);
    CHECK(inf.type == TypeTerm::boolean());
    const TypeTerm x = TypeTerm::var(env.vars().at(attr("cat/id")));
    // X = Double from the comparison, X = Bool and Bool = Bool from the or.
    bool x_double = false, x_bool = false, bool_bool = false;
    for (const auto& eq : inf.constraint.equations) {
      x_double |= eq.lhs == x && eq.rhs == TypeTerm::dbl();
      x_bool |= eq.lhs == x && eq.rhs == TypeTerm::boolean();
      bool_bool |= eq.lhs == TypeTerm::boolean() && eq.rhs == TypeTerm::boolean();
    }
    CHECK(x_double);
    CHECK(x_bool);
    CHECK(bool_bool);

    const SolveResult r = solve(inf.constraint, env);
    REQUIRE(unsat(r));
    CHECK(std::get<Unsat>(r).message.find("type constraint unsatisfiable") != std::string::npos);
    CHECK(std::get<Unsat>(r).message.find("cat/id") != std::string::npos);
  }

  TEST_CASE("literals and membership") {
    TypeEnv env;
    const Inferred lit = infer(elit(true), env);
    CHECK(lit.type == TypeTerm::boolean());
    CHECK(lit.constraint.equations.empty());

    const Inferred in = infer(ein(elit("e-Pre-Read"), ename("sub/perm")), env);
    CHECK(in.type == TypeTerm::boolean());
    const TypeAssignment ta = assignment(solve(in.constraint, env));
    CHECK(ta.at(attr("sub/perm")) == TypeTerm::set_of(TypeTerm::string()));
  }

  TEST_CASE("solving") {
    TypeEnv env;
    const TypeTerm x = env.lookup(attr("a/x")), y = env.lookup(attr("a/y"));
    TypingConstraint c;
    c.equations.push_back({x, TypeTerm::dbl()});
    CHECK(assignment(solve(c, env)).at(attr("a/x")) == TypeTerm::dbl());

    TypingConstraint t;
    t.equations.push_back({x, y});
    t.equations.push_back({y, TypeTerm::set_of(TypeTerm::string())});
    const TypeAssignment ta = assignment(solve(t, env));
    CHECK(ta.at(attr("a/x")) == TypeTerm::set_of(TypeTerm::string()));
    CHECK(ta.at(attr("a/y")) == TypeTerm::set_of(TypeTerm::string()));

    TypingConstraint occurs;
    occurs.equations.push_back({x, TypeTerm::set_of(x)});
    CHECK(unsat(solve(occurs, env)));
  }

  TEST_CASE("defaults and overloading") {
    TypeEnv env;
    const Inferred g = infer(egreater(ename("a/x"), ename("a/y")), env);
    const TypeAssignment ta = assignment(solve(g.constraint, env));
    CHECK(ta.at(attr("a/x")) == TypeTerm::dbl());
    CHECK(ta.at(attr("a/y")) == TypeTerm::dbl());

    TypeEnv env2;
    const Inferred d = infer(egreater(ename("a/x"), elit(Value(test::ehealth_time()))), env2);
    CHECK(assignment(solve(d.constraint, env2)).at(attr("a/x")) == TypeTerm::date());

    TypeEnv env3;
    const Inferred s = infer(egreater(ename("a/x"), elit("b")), env3);
    CHECK(unsat(solve(s.constraint, env3)));

    TypeEnv env4;
    const Inferred free = infer(eequal(ename("a/x"), ename("a/y")), env4);
    CHECK(assignment(solve(free.constraint, env4)).at(attr("a/x")) == TypeTerm::string());
  }

  TEST_CASE("policies") {
    const TypeAssignment ta = assignment(welltyped(test::p1()));
    CHECK(ta.at(attr("subject/role")) == TypeTerm::string());
    CHECK(ta.at(attr("action/id")) == TypeTerm::string());
    CHECK(ta.at(attr("subject/permission")) == TypeTerm::set_of(TypeTerm::string()));
    CHECK(ta.at(attr("resource/type")) == TypeTerm::string());
    CHECK(ta.at(attr("subject/permission")).to_string() == "Set(String)");

    Rule bad;
    bad.target = eor(ename("cat/id"), eequal(ename("cat/id"), elit(5)));
    CHECK(unsat(welltyped(Policy(bad))));

    CHECK(assignment(welltyped(Policy(Rule{Effect::Deny}))).empty());

    Rule numeric;
    numeric.target = eadd(elit(1), elit(2));
    CHECK(unsat(welltyped(Policy(numeric))));

    Rule nested;
    nested.target = ein(ename("a/s"), ename("a/t"));
    nested.obligations = {{ObType::Mandatory, "x", {ename("a/s")}}};
    CHECK(assignment(welltyped(Policy(nested))).at(attr("a/t")) ==
          TypeTerm::set_of(TypeTerm::string()));
    Rule sets_of_sets;
    sets_of_sets.target = eand(ein(ename("a/s"), ename("a/t")), ein(elit("v"), ename("a/s")));
    CHECK(unsat(welltyped(Policy(sets_of_sets))));
  }

  TEST_CASE("generated policies are well typed") {
    for (int i = 0; i < 50; ++i) {
      const Policy p = gen_policy({1 + i % 3, 1 + i % 4, 1 + i % 9, static_cast<std::uint64_t>(i)});
      CHECK(std::holds_alternative<TypeAssignment>(welltyped(p)));
    }
  }
}
