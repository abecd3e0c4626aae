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

#include <functional>
#include <random>

#include "facpl/generator.hpp"
#include "facpl/parser.hpp"

using namespace facpl;

namespace {

// Total number of sub-policies for d = 1..5 (rows) and w = 1..5 (columns).
constexpr std::uint64_t kTable[5][5] = {
    {1, 2, 3, 4, 5},
    {2, 6, 12, 20, 30},
    {3, 14, 39, 84, 155},
    {4, 30, 120, 340, 780},
    {5, 62, 363, 1364, 3905},
};

// Checks the shape recursively: policy sets at levels below d with exactly w
// children, rules exactly at level d.
bool shaped(const Policy& p, int level, int d, int w) {
  if (level == d) return p.is_rule();
  if (p.is_rule()) return false;
  const PolicySet& s = p.set();
  if (static_cast<int>(s.policies.size()) != w) return false;
  if (s.strategy != Strategy::All) return false;
  for (const auto& c : s.policies)
    if (!shaped(c, level + 1, d, w)) return false;
  return true;
}

}  // namespace

TEST_SUITE("generator") {
  TEST_CASE("sub-policy counts") {
    int exact = 0;
    for (int d = 1; d <= 5; ++d) {
      for (int w = 1; w <= 5; ++w) {
        CHECK_MESSAGE(subpolicy_count(d, w) == kTable[d - 1][w - 1], "d=", d, " w=", w);
        exact += subpolicy_count(d, w) == kTable[d - 1][w - 1];
      }
    }
    CHECK(exact == 25);
    CHECK(subpolicy_count(5, 5) == 3905);
    CHECK(subpolicy_count(3, 2) == 14);
    CHECK(subpolicy_count(1, 1) == 1);
    CHECK(subpolicy_count(4, 5) == 780);
    CHECK(subpolicy_count(2, 3) == 12);
    for (int w = 1; w <= 8; ++w) CHECK(subpolicy_count(1, w) == static_cast<std::uint64_t>(w));
  }

  TEST_CASE("generated structure has the requested shape") {
    for (int d = 1; d <= 4; ++d) {
      for (int w = 1; w <= 4; ++w) {
        const Policy p = gen_policy({d, w, 10, 42});
        CHECK(depth(p) == static_cast<std::size_t>(d));
        CHECK(shaped(p, 0, d, w));
        CHECK(subpolicy_total(p) == subpolicy_count(d, w));
      }
    }
    const Policy big = gen_policy({5, 5, 100, 1});
    CHECK(subpolicy_total(big) == 3905);
  }

  TEST_CASE("targets, names and obligations") {
    for (int a : {1, 3, 20}) {
      const GenSpec spec{3, 3, a, 9};
      const Policy p = gen_policy(spec);
      CHECK(names(p).size() <= static_cast<std::size_t>(a));
      const auto attrs = gen_attributes(spec);
      CHECK(attrs.size() == static_cast<std::size_t>(a));
      for (const auto& g : attrs) CHECK(g.pool.size() == 4);
    }
    // Every target is a conjunction of one to three atoms.
    std::function<int(const Expr&)> atoms = [&](const Expr& e) -> int {
      if (e.kind() == Expr::Kind::Binary && e.op() == ExprOp::And)
        return atoms(e.lhs()) + atoms(e.rhs());
      REQUIRE(e.kind() == Expr::Kind::Binary);
      CHECK((e.op() == ExprOp::Equal || e.op() == ExprOp::In));
      return 1;
    };
    int obligations = 0, nodes = 0;
    std::function<void(const Policy&)> walk = [&](const Policy& p) {
      ++nodes;
      if (p.is_rule()) {
        const int n = atoms(p.rule().target);
        CHECK((n >= 1 && n <= 3));
        obligations += !p.rule().obligations.empty();
        return;
      }
      const int n = atoms(p.set().target);
      CHECK((n >= 1 && n <= 3));
      obligations += !p.set().obl_permit.empty() || !p.set().obl_deny.empty();
      for (const auto& c : p.set().policies) walk(c);
    };
    walk(gen_policy({4, 4, 30, 5}));
    // Roughly 30% of nodes carry an obligation.
    CHECK(obligations > nodes / 6);
    CHECK(obligations < nodes / 2);
  }

  TEST_CASE("deterministic in the seed") {
    const GenSpec spec{3, 3, 12, 77};
    CHECK(gen_policy(spec) == gen_policy(spec));
    CHECK(print(gen_policy(spec)) == print(gen_policy(spec)));
    CHECK_FALSE(gen_policy(spec) == gen_policy({3, 3, 12, 78}));
    std::mt19937_64 a(3), b(3);
    const auto attrs = gen_attributes(spec);
    for (int i = 0; i < 20; ++i)
      CHECK(gen_request(attrs, a).bindings() == gen_request(attrs, b).bindings());
  }

  TEST_CASE("guard") {
    CHECK_THROWS_AS(gen_policy({0, 1, 1, 0}), GenGuardExceeded);
    CHECK_THROWS_AS(gen_policy({9, 1, 1, 0}), GenGuardExceeded);
    CHECK_THROWS_AS(gen_policy({1, 9, 1, 0}), GenGuardExceeded);
    CHECK_THROWS_AS(gen_policy({1, 1, 0, 0}), GenGuardExceeded);
    CHECK_NOTHROW(gen_policy({1, 8, 1, 0}));
  }
}
