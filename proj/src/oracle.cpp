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

#include "facpl/oracle.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>

#include "facpl/translator.hpp"
#include "facpl/typing.hpp"

namespace facpl {

EnumerationRefused::EnumerationRefused(std::uint64_t count)
    : std::runtime_error("request enumeration refused: " +
                         std::to_string(count) +
                         " requests exceed the bound"),
      count_(count) {}

ExtendedValue probe_for(const std::vector<ExtendedValue>& seeds) {
  for (const auto& s : seeds) {
    if (s.is_set()) return s.set().elements().front();
    if (s.is_value()) {
      if (s.value().is_string()) return Value(0.0);
      return Value("probe");
    }
  }
  return Value("probe");
}

RequestSpace::RequestSpace(const DomainSeed& seeds) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (const auto& [name, values] : seeds) {
    std::vector<ExtendedValue> c = values;
    c.push_back(probe_for(values));
    c.push_back(ExtendedValue::bottom());
    const std::uint64_t n = c.size();
    count_ = count_ > kMax / n ? kMax : count_ * n;
    names_.push_back(name);
    choices_.push_back(std::move(c));
  }
}

SemanticRequest RequestSpace::at(std::uint64_t index) const {
  std::map<AttributeName, ExtendedValue> b;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto n = choices_[i].size();
    const auto& v = choices_[i][index % n];
    index /= n;
    if (!v.is_bottom()) b.emplace(names_[i], v);
  }
  return SemanticRequest(std::move(b));
}

std::vector<SemanticRequest> enumerate_requests(const DomainSeed& seeds,
                                                std::uint64_t bound) {
  RequestSpace space(seeds);
  if (space.count() > bound) throw EnumerationRefused(space.count());
  std::vector<SemanticRequest> out;
  out.reserve(space.count());
  for (std::uint64_t i = 0; i < space.count(); ++i) out.push_back(space.at(i));
  return out;
}

std::vector<std::uint64_t> sample_indices(const RequestSpace& space,
                                          std::uint64_t bound,
                                          std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (space.count() <= bound) {
    out.resize(space.count());
    for (std::uint64_t i = 0; i < space.count(); ++i) out[i] = i;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, space.count() - 1);
  out.reserve(bound);
  for (std::uint64_t i = 0; i < bound; ++i) out.push_back(pick(rng));
  return out;
}

namespace {

struct Literals {
  std::set<Value> scalar;
  std::set<Value> members;  // literals tested for membership in the name
};

void collect(const Expr& e, std::map<AttributeName, Literals>& out) {
  switch (e.kind()) {
    case Expr::Kind::Name:
      out[e.attribute()];
      return;
    case Expr::Kind::Literal:
      return;
    case Expr::Kind::Not:
      collect(e.operand(), out);
      return;
    case Expr::Kind::Binary:
      break;
  }
  const Expr& a = e.lhs();
  const Expr& b = e.rhs();
  if (e.op() == ExprOp::In) {
    if (a.kind() == Expr::Kind::Literal && b.kind() == Expr::Kind::Name)
      out[b.attribute()].members.insert(a.value());
  } else {
    if (a.kind() == Expr::Kind::Name && b.kind() == Expr::Kind::Literal)
      out[a.attribute()].scalar.insert(b.value());
    if (b.kind() == Expr::Kind::Name && a.kind() == Expr::Kind::Literal)
      out[b.attribute()].scalar.insert(a.value());
  }
  collect(a, out);
  collect(b, out);
}

void collect(const std::vector<Obligation>& os,
             std::map<AttributeName, Literals>& out) {
  for (const auto& o : os)
    for (const auto& a : o.args) collect(a, out);
}

void collect(const Policy& p, std::map<AttributeName, Literals>& out) {
  if (p.is_rule()) {
    collect(p.rule().target, out);
    collect(p.rule().obligations, out);
    return;
  }
  const auto& s = p.set();
  collect(s.target, out);
  for (const auto& c : s.policies) collect(c, out);
  collect(s.obl_permit, out);
  collect(s.obl_deny, out);
}

// A value of type `t` not among `taken`.
Value fresh_value(ValueType t, const std::set<Value>& taken) {
  switch (t) {
    case ValueType::Double: {
      double m = 0;
      for (const auto& v : taken)
        if (v.is_double()) m = std::max(m, v.as_double());
      return Value(m + 1);
    }
    case ValueType::Date: {
      Date m = *Date::from_civil(2000, 1, 1);
      for (const auto& v : taken)
        if (v.is_date()) m = std::max(m, v.as_date());
      return Value(Date{m.seconds + 86400});
    }
    case ValueType::Bool:
      return Value(!taken.count(Value(false)) ? false : true);
    case ValueType::String:
      break;
  }
  std::string s = "fresh";
  while (taken.count(Value(s))) s += "~";
  return Value(s);
}

}  // namespace

DomainSeed seed_domains(const Policy& p) {
  std::map<AttributeName, Literals> lits;
  collect(p, lits);
  const SolveResult typed = welltyped(p);
  const auto* types = std::get_if<TypeAssignment>(&typed);

  DomainSeed out;
  for (const auto& [name, l] : lits) {
    std::optional<TypeTerm> type;
    if (types) {
      auto it = types->find(name);
      if (it != types->end()) type = it->second;
    }
    const bool is_set =
        type ? type->is_set() : (!l.members.empty() && l.scalar.empty());
    std::vector<ExtendedValue> seeds;
    if (is_set) {
      const std::vector<Value> m(l.members.begin(), l.members.end());
      for (std::size_t i = 0; i < m.size(); ++i) {
        seeds.emplace_back(ValueSet({m[i]}));
        for (std::size_t j = i + 1; j < m.size(); ++j)
          seeds.emplace_back(ValueSet({m[i], m[j]}));
      }
      const ValueType et = type ? type->base_type()
                                : (m.empty() ? ValueType::String : m[0].type());
      seeds.emplace_back(ValueSet({fresh_value(et, l.members)}));
    } else {
      for (const auto& v : l.scalar) seeds.emplace_back(v);
      ValueType t = ValueType::String;
      if (type) {
        t = type->base_type();
      } else if (!l.scalar.empty()) {
        t = l.scalar.begin()->type();
      }
      if (t == ValueType::Bool) {
        for (bool b : {false, true})
          if (!l.scalar.count(Value(b))) seeds.emplace_back(Value(b));
      } else {
        seeds.emplace_back(fresh_value(t, l.scalar));
      }
    }
    out.emplace(name, std::move(seeds));
  }
  return out;
}

namespace {

std::string describe(const SemanticRequest& r) {
  std::string s = "{";
  bool first = true;
  for (const auto& [n, v] : r.bindings()) {
    if (!first) s += ", ";
    first = false;
    s += n.to_string() + " = " + v.to_string();
  }
  return s + "}";
}

}  // namespace

OracleReport check_correspondence(const Policy& p, std::uint64_t bound) {
  const ConstraintProgram program(translate_policy(p));
  const RequestSpace space(seed_domains(p));
  OracleReport rep;
  rep.space = space.count();
  rep.sampled = space.count() > bound;
  for (std::uint64_t idx : sample_indices(space, bound)) {
    const SemanticRequest r = space.at(idx);
    const Decision dec = eval_policy(p, r).decision;
    const std::vector<bool> sat = program.satisfied(r);
    ++rep.requests;
    const auto hits = std::count(sat.begin(), sat.end(), true);
    const bool agree = sat[static_cast<std::size_t>(dec)];
    if (hits != 1) ++rep.partition_violations;
    if (agree && hits == 1) ++rep.agreements;
    if ((!agree || hits != 1) && rep.failures.size() < 5) {
      std::string s = describe(r) + ": evaluator " +
                      std::string(decision_name(dec)) + ", satisfied";
      for (auto d : kAllDecisions)
        if (sat[static_cast<std::size_t>(d)])
          s += " " + std::string(decision_name(d));
      rep.failures.push_back(std::move(s));
    }
  }
  return rep;
}

}  // namespace facpl
