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

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "facpl/value.hpp"

namespace facpl {

struct AttributeName {
  std::string category;
  std::string attribute;

  std::string to_string() const { return category + "/" + attribute; }
  // Splits `cat/attr`; nullopt when either part is empty.
  static std::optional<AttributeName> parse(std::string_view text);

  friend auto operator<=>(const AttributeName&, const AttributeName&) = default;
};

using NameSet = std::set<AttributeName>;

enum class ExprOp : std::uint8_t {
  And,
  Or,
  Equal,
  In,
  GreaterThan,
  Add,
  Subtract,
  Divide,
  Multiply,
};

std::string_view expr_op_name(ExprOp op);
std::optional<ExprOp> expr_op_from_name(std::string_view name);

// Immutable expression tree with shared subterms.
class Expr {
 public:
  enum class Kind : std::uint8_t { Name, Literal, Not, Binary };

  static Expr name(AttributeName n);
  static Expr literal(Value v);
  static Expr negation(Expr e);
  static Expr binary(ExprOp op, Expr lhs, Expr rhs);

  Kind kind() const;
  const AttributeName& attribute() const;
  const Value& value() const;
  ExprOp op() const;
  const Expr& operand() const;  // Not
  const Expr& lhs() const;
  const Expr& rhs() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Convenience builders used by tests and the generator.
Expr ename(std::string_view qualified);
Expr elit(Value v);
Expr enot(Expr e);
Expr eand(Expr a, Expr b);
Expr eor(Expr a, Expr b);
Expr eequal(Expr a, Expr b);
Expr ein(Expr a, Expr b);
Expr egreater(Expr a, Expr b);
Expr eadd(Expr a, Expr b);
Expr esub(Expr a, Expr b);
Expr emul(Expr a, Expr b);
Expr ediv(Expr a, Expr b);

enum class ObType : std::uint8_t { Mandatory, Optional };

struct Obligation {
  ObType type = ObType::Mandatory;
  std::string action;
  std::vector<Expr> args;

  friend bool operator==(const Obligation&, const Obligation&) = default;
};

enum class Effect : std::uint8_t { Permit, Deny };

enum class AlgId : std::uint8_t {
  POver,
  DOver,
  DUnlessP,
  PUnlessD,
  FirstApp,
  OneApp,
  WeakCon,
  StrongCon,
};

inline constexpr std::array<AlgId, 8> kAllAlgorithms = {
    AlgId::POver,    AlgId::DOver,  AlgId::DUnlessP, AlgId::PUnlessD,
    AlgId::FirstApp, AlgId::OneApp, AlgId::WeakCon,  AlgId::StrongCon};

std::string_view alg_name(AlgId a);
std::optional<AlgId> alg_from_name(std::string_view name);

enum class Strategy : std::uint8_t { All, Greedy };

std::string_view strategy_name(Strategy s);

struct Policy;

struct Rule {
  Effect effect = Effect::Permit;
  Expr target = Expr::literal(true);
  std::vector<Obligation> obligations;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct PolicySet {
  AlgId alg = AlgId::POver;
  Strategy strategy = Strategy::All;
  Expr target = Expr::literal(true);
  std::vector<Policy> policies;
  std::vector<Obligation> obl_permit;
  std::vector<Obligation> obl_deny;

  friend bool operator==(const PolicySet&, const PolicySet&);
};

struct Policy {
  std::variant<Rule, PolicySet> node;

  Policy(Rule r) : node(std::move(r)) {}  // NOLINT
  Policy(PolicySet s) : node(std::move(s)) {}  // NOLINT

  bool is_rule() const { return node.index() == 0; }
  const Rule& rule() const { return std::get<Rule>(node); }
  const PolicySet& set() const { return std::get<PolicySet>(node); }

  friend bool operator==(const Policy&, const Policy&) = default;
};

// The decision point: either a single policy or an algorithm over several.
struct Pdp {
  struct Combined {
    AlgId alg = AlgId::POver;
    Strategy strategy = Strategy::All;
    std::vector<Policy> policies;
    friend bool operator==(const Combined&, const Combined&) = default;
  };
  std::variant<Policy, Combined> form = Policy(Rule{});

  friend bool operator==(const Pdp&, const Pdp&) = default;
};

enum class EnfAlg : std::uint8_t { Base, DenyBiased, PermitBiased };

std::string_view enf_alg_name(EnfAlg e);

struct Pas {
  EnfAlg enf = EnfAlg::Base;
  Pdp pdp;

  friend bool operator==(const Pas&, const Pas&) = default;
};

struct RequestAttribute {
  AttributeName name;
  Value value;
  friend bool operator==(const RequestAttribute&,
                         const RequestAttribute&) = default;
};

using SyntacticRequest = std::vector<RequestAttribute>;

enum class Decision : std::uint8_t { Permit, Deny, NotApp, Indet };

inline constexpr std::array<Decision, 4> kAllDecisions = {
    Decision::Permit, Decision::Deny, Decision::NotApp, Decision::Indet};

std::string_view decision_name(Decision d);
std::optional<Decision> decision_from_name(std::string_view name);

struct InstantiatedObligation {
  ObType type = ObType::Mandatory;
  std::string action;
  std::vector<ArgValue> args;

  std::string to_string() const;
  friend bool operator==(const InstantiatedObligation&,
                         const InstantiatedObligation&) = default;
};

struct PdpResponse {
  Decision decision = Decision::NotApp;
  std::vector<InstantiatedObligation> obligations;

  static PdpResponse not_app() { return {Decision::NotApp, {}}; }
  static PdpResponse indet() { return {Decision::Indet, {}}; }

  std::string to_string() const;
  friend bool operator==(const PdpResponse&, const PdpResponse&) = default;
};

// Nesting level: rules are 0, a policy set is one more than its deepest child.
std::size_t depth(const Policy& p);

NameSet names(const Expr& e);
NameSet names(const Obligation& o);
NameSet names(const Policy& p);
NameSet names(const Pdp& pdp);

// Number of policies strictly below p.
std::size_t subpolicy_total(const Policy& p);

// Wraps a PDP as the equivalent policy set (target true, no obligations).
Policy pdp_as_policy(const Pdp& pdp);

}  // namespace facpl
