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

#include "facpl/parser.hpp"

namespace facpl {

namespace {

// Precedence levels: 0 = any context, 1 = operand of `or`, 2 = operand of
// `and` (or the right operand of `or`), 3 = must be atomic.
void print_expr(const Expr& e, int ctx, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Name: out += e.attribute().to_string(); return;
    case Expr::Kind::Literal: out += e.value().to_string(); return;
    case Expr::Kind::Not:
      out += "not(";
      print_expr(e.operand(), 0, out);
      out += ")";
      return;
    case Expr::Kind::Binary: break;
  }
  if (e.op() == ExprOp::And || e.op() == ExprOp::Or) {
    const bool is_and = e.op() == ExprOp::And;
    const int level = is_and ? 2 : 1;
    const bool paren = ctx > level;
    if (paren) out += "(";
    print_expr(e.lhs(), level, out);
    out += is_and ? " and " : " or ";
    print_expr(e.rhs(), level + 1, out);
    if (paren) out += ")";
    return;
  }
  out += expr_op_name(e.op());
  out += "(";
  print_expr(e.lhs(), 0, out);
  out += ", ";
  print_expr(e.rhs(), 0, out);
  out += ")";
}

bool is_true_literal(const Expr& e) {
  return e.kind() == Expr::Kind::Literal && e.value() == Value(true);
}

void print_obligations(const std::vector<Obligation>& os, std::string& out) {
  for (std::size_t i = 0; i < os.size(); ++i) {
    if (i) out += " ";
    out += print(os[i]);
  }
}

void print_policy(const Policy& p, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  out += pad;
  if (p.is_rule()) {
    const Rule& r = p.rule();
    out += "(";
    out += r.effect == Effect::Permit ? "permit" : "deny";
    if (!is_true_literal(r.target)) {
      out += " target: ";
      print_expr(r.target, 0, out);
    }
    if (!r.obligations.empty()) {
      out += " obl: ";
      print_obligations(r.obligations, out);
    }
    out += ")";
    return;
  }
  const PolicySet& s = p.set();
  out += "{ ";
  out += alg_name(s.alg);
  out += "_";
  out += strategy_name(s.strategy);
  if (!is_true_literal(s.target)) {
    out += "\n" + pad + "  target: ";
    print_expr(s.target, 0, out);
  }
  out += "\n" + pad + "  policies:\n";
  for (const auto& c : s.policies) {
    print_policy(c, indent + 4, out);
    out += "\n";
  }
  if (!s.obl_permit.empty()) {
    out += pad + "  obl-p: ";
    print_obligations(s.obl_permit, out);
    out += "\n";
  }
  if (!s.obl_deny.empty()) {
    out += pad + "  obl-d: ";
    print_obligations(s.obl_deny, out);
    out += "\n";
  }
  out += pad + "}";
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

std::string print(const Obligation& o) {
  std::string out = "[";
  out += o.type == ObType::Mandatory ? "m " : "o ";
  out += o.action + "(";
  for (std::size_t i = 0; i < o.args.size(); ++i) {
    if (i) out += ", ";
    print_expr(o.args[i], 0, out);
  }
  return out + ")]";
}

std::string print(const Policy& p) {
  std::string out;
  print_policy(p, 0, out);
  return out + "\n";
}

std::string print(const Pdp& pdp) {
  if (const auto* single = std::get_if<Policy>(&pdp.form)) return print(*single);
  const auto& c = std::get<Pdp::Combined>(pdp.form);
  std::string out = "{ ";
  out += alg_name(c.alg);
  out += "_";
  out += strategy_name(c.strategy);
  out += "\n  policies:\n";
  for (const auto& p : c.policies) {
    print_policy(p, 4, out);
    out += "\n";
  }
  return out + "}\n";
}

std::string print(const Pas& pas) {
  std::string out = "{ pep: ";
  out += enf_alg_name(pas.enf);
  out += "\n  pdp:\n";
  out += print(pas.pdp);
  return out + "}\n";
}

std::string print(const SyntacticRequest& r) {
  std::string out;
  for (const auto& a : r) {
    out += "(" + a.name.to_string() + ", " + a.value.to_string() + ")\n";
  }
  return out;
}

std::string print(const PolicyDocument& doc) {
  if (const auto* pas = std::get_if<Pas>(&doc)) return print(*pas);
  return print(std::get<Policy>(doc));
}

}  // namespace facpl
