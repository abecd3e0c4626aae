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

#include "facpl/ast.hpp"

#include <algorithm>
#include <cassert>

namespace facpl {

std::optional<AttributeName> AttributeName::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos || slash == 0 ||
      slash + 1 == text.size())
    return std::nullopt;
  return AttributeName{std::string(text.substr(0, slash)),
                       std::string(text.substr(slash + 1))};
}

namespace {

constexpr std::pair<ExprOp, std::string_view> kOpNames[] = {
    {ExprOp::And, "and"},          {ExprOp::Or, "or"},
    {ExprOp::Equal, "equal"},      {ExprOp::In, "in"},
    {ExprOp::GreaterThan, "greater-than"},
    {ExprOp::Add, "add"},          {ExprOp::Subtract, "subtract"},
    {ExprOp::Divide, "divide"},    {ExprOp::Multiply, "multiply"},
};

constexpr std::pair<AlgId, std::string_view> kAlgNames[] = {
    {AlgId::POver, "p-over"},        {AlgId::DOver, "d-over"},
    {AlgId::DUnlessP, "d-unless-p"}, {AlgId::PUnlessD, "p-unless-d"},
    {AlgId::FirstApp, "first-app"},  {AlgId::OneApp, "one-app"},
    {AlgId::WeakCon, "weak-con"},    {AlgId::StrongCon, "strong-con"},
};

}  // namespace

std::string_view expr_op_name(ExprOp op) {
  for (auto [o, n] : kOpNames)
    if (o == op) return n;
  return "?";
}

std::optional<ExprOp> expr_op_from_name(std::string_view name) {
  for (auto [o, n] : kOpNames)
    if (n == name) return o;
  return std::nullopt;
}

std::string_view alg_name(AlgId a) {
  for (auto [id, n] : kAlgNames)
    if (id == a) return n;
  return "?";
}

std::optional<AlgId> alg_from_name(std::string_view name) {
  for (auto [id, n] : kAlgNames)
    if (n == name) return id;
  return std::nullopt;
}

std::string_view strategy_name(Strategy s) {
  return s == Strategy::All ? "all" : "greedy";
}

std::string_view enf_alg_name(EnfAlg e) {
  switch (e) {
    case EnfAlg::Base: return "base";
    case EnfAlg::DenyBiased: return "deny-biased";
    case EnfAlg::PermitBiased: return "permit-biased";
  }
  return "?";
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Permit: return "permit";
    case Decision::Deny: return "deny";
    case Decision::NotApp: return "not-app";
    case Decision::Indet: return "indet";
  }
  return "?";
}

std::optional<Decision> decision_from_name(std::string_view name) {
  for (Decision d : kAllDecisions)
    if (decision_name(d) == name) return d;
  return std::nullopt;
}

struct Expr::Node {
  Kind kind;
  ExprOp op = ExprOp::And;
  AttributeName name;
  Value value;
  std::vector<Expr> children;
};

Expr Expr::name(AttributeName n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Name;
  node->name = std::move(n);
  return Expr(std::move(node));
}

Expr Expr::literal(Value v) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Literal;
  node->value = std::move(v);
  return Expr(std::move(node));
}

Expr Expr::negation(Expr e) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->children.push_back(std::move(e));
  return Expr(std::move(node));
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Binary;
  node->op = op;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Expr(std::move(node));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const AttributeName& Expr::attribute() const { return node_->name; }
const Value& Expr::value() const { return node_->value; }
ExprOp Expr::op() const { return node_->op; }
const Expr& Expr::operand() const { return node_->children[0]; }
const Expr& Expr::lhs() const { return node_->children[0]; }
const Expr& Expr::rhs() const { return node_->children[1]; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Name: return a.attribute() == b.attribute();
    case Expr::Kind::Literal: return a.value() == b.value();
    case Expr::Kind::Not: return a.operand() == b.operand();
    case Expr::Kind::Binary:
      return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

Expr ename(std::string_view qualified) {
  auto n = AttributeName::parse(qualified);
  assert(n && "attribute names are written cat/attr");
  return Expr::name(*n);
}
Expr elit(Value v) { return Expr::literal(std::move(v)); }
Expr enot(Expr e) { return Expr::negation(std::move(e)); }
Expr eand(Expr a, Expr b) { return Expr::binary(ExprOp::And, a, b); }
Expr eor(Expr a, Expr b) { return Expr::binary(ExprOp::Or, a, b); }
Expr eequal(Expr a, Expr b) { return Expr::binary(ExprOp::Equal, a, b); }
Expr ein(Expr a, Expr b) { return Expr::binary(ExprOp::In, a, b); }
Expr egreater(Expr a, Expr b) {
  return Expr::binary(ExprOp::GreaterThan, a, b);
}
Expr eadd(Expr a, Expr b) { return Expr::binary(ExprOp::Add, a, b); }
Expr esub(Expr a, Expr b) { return Expr::binary(ExprOp::Subtract, a, b); }
Expr emul(Expr a, Expr b) { return Expr::binary(ExprOp::Multiply, a, b); }
Expr ediv(Expr a, Expr b) { return Expr::binary(ExprOp::Divide, a, b); }

bool operator==(const PolicySet& a, const PolicySet& b) {
  return a.alg == b.alg && a.strategy == b.strategy && a.target == b.target &&
         a.policies == b.policies && a.obl_permit == b.obl_permit &&
         a.obl_deny == b.obl_deny;
}

std::string InstantiatedObligation::to_string() const {
  std::string out = type == ObType::Mandatory ? "m " : "o ";
  out += action + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += arg_to_string(args[i]);
  }
  return out + ")";
}

std::string PdpResponse::to_string() const {
  std::string out = "<" + std::string(decision_name(decision));
  for (const auto& o : obligations) out += " [" + o.to_string() + "]";
  return out + ">";
}

std::size_t depth(const Policy& p) {
  if (p.is_rule()) return 0;
  std::size_t best = 0;
  for (const auto& c : p.set().policies) best = std::max(best, depth(c));
  return best + 1;
}

namespace {

void collect(const Expr& e, NameSet& out) {
  switch (e.kind()) {
    case Expr::Kind::Name: out.insert(e.attribute()); break;
    case Expr::Kind::Literal: break;
    case Expr::Kind::Not: collect(e.operand(), out); break;
    case Expr::Kind::Binary:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
      break;
  }
}

void collect(const std::vector<Obligation>& os, NameSet& out) {
  for (const auto& o : os)
    for (const auto& a : o.args) collect(a, out);
}

void collect(const Policy& p, NameSet& out) {
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

}  // namespace

NameSet names(const Expr& e) {
  NameSet out;
  collect(e, out);
  return out;
}

NameSet names(const Obligation& o) {
  NameSet out;
  for (const auto& a : o.args) collect(a, out);
  return out;
}

NameSet names(const Policy& p) {
  NameSet out;
  collect(p, out);
  return out;
}

NameSet names(const Pdp& pdp) { return names(pdp_as_policy(pdp)); }

std::size_t subpolicy_total(const Policy& p) {
  if (p.is_rule()) return 0;
  std::size_t n = 0;
  for (const auto& c : p.set().policies) n += 1 + subpolicy_total(c);
  return n;
}

Policy pdp_as_policy(const Pdp& pdp) {
  if (const auto* single = std::get_if<Policy>(&pdp.form)) return *single;
  const auto& c = std::get<Pdp::Combined>(pdp.form);
  PolicySet s;
  s.alg = c.alg;
  s.strategy = c.strategy;
  s.policies = c.policies;
  return s;
}

}  // namespace facpl
