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

#include "facpl/constraint.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "facpl/operators.hpp"

namespace facpl {

struct Constraint::Node {
  Kind kind;
  CBinOp op = CBinOp::And;
  Value value;
  AttributeName name;
  std::vector<Constraint> children;
};

std::string_view cbin_op_symbol(CBinOp op) {
  switch (op) {
    case CBinOp::And: return "∧";
    case CBinOp::Or: return "∨";
    case CBinOp::FAnd: return "∧̇";
    case CBinOp::FOr: return "∨̇";
    case CBinOp::Eq: return "=";
    case CBinOp::Gt: return ">";
    case CBinOp::In: return "∈";
    case CBinOp::Add: return "+";
    case CBinOp::Sub: return "−";
    case CBinOp::Mul: return "∗";
    case CBinOp::Div: return "/";
  }
  return "?";
}

Constraint Constraint::literal(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = std::move(v);
  return Constraint(std::move(n));
}

Constraint Constraint::name(AttributeName a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Name;
  n->name = std::move(a);
  return Constraint(std::move(n));
}

Constraint Constraint::unary(Kind k, Constraint c) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->children.push_back(std::move(c));
  return Constraint(std::move(n));
}

Constraint Constraint::binary(CBinOp op, Constraint a, Constraint b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->children.push_back(std::move(a));
  n->children.push_back(std::move(b));
  return Constraint(std::move(n));
}

Constraint::Kind Constraint::kind() const { return node_->kind; }
const Value& Constraint::value() const { return node_->value; }
const AttributeName& Constraint::attribute() const { return node_->name; }
CBinOp Constraint::op() const { return node_->op; }
const Constraint& Constraint::operand() const { return node_->children[0]; }
const Constraint& Constraint::lhs() const { return node_->children[0]; }
const Constraint& Constraint::rhs() const { return node_->children[1]; }

namespace {

bool structurally_equal(const Constraint& a, const Constraint& b,
                        std::unordered_set<std::uint64_t>& seen) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind()) return false;
  // Pairs already proven equal (DAGs would otherwise be re-walked).
  const auto key = reinterpret_cast<std::uintptr_t>(a.id()) * 1000003u ^
                   reinterpret_cast<std::uintptr_t>(b.id());
  if (seen.count(key)) return true;
  bool eq = false;
  switch (a.kind()) {
    case Constraint::Kind::Literal: eq = a.value() == b.value(); break;
    case Constraint::Kind::Name: eq = a.attribute() == b.attribute(); break;
    case Constraint::Kind::Binary:
      eq = a.op() == b.op() && structurally_equal(a.lhs(), b.lhs(), seen) &&
           structurally_equal(a.rhs(), b.rhs(), seen);
      break;
    default: eq = structurally_equal(a.operand(), b.operand(), seen); break;
  }
  if (eq) seen.insert(key);
  return eq;
}

}  // namespace

bool operator==(const Constraint& a, const Constraint& b) {
  std::unordered_set<std::uint64_t> seen;
  return structurally_equal(a, b, seen);
}

Constraint c_true() { return Constraint::literal(true); }
Constraint c_false() { return Constraint::literal(false); }
Constraint c_lit(Value v) { return Constraint::literal(std::move(v)); }
Constraint c_name(AttributeName n) { return Constraint::name(std::move(n)); }
Constraint c_not(Constraint c) {
  return Constraint::unary(Constraint::Kind::Not, std::move(c));
}
Constraint c_and(Constraint a, Constraint b) {
  return Constraint::binary(CBinOp::And, std::move(a), std::move(b));
}
Constraint c_or(Constraint a, Constraint b) {
  return Constraint::binary(CBinOp::Or, std::move(a), std::move(b));
}
Constraint c_is_bot(Constraint c) {
  return Constraint::unary(Constraint::Kind::IsBot, std::move(c));
}
Constraint c_is_err(Constraint c) {
  return Constraint::unary(Constraint::Kind::IsErr, std::move(c));
}
Constraint c_is_bool(Constraint c) {
  return Constraint::unary(Constraint::Kind::IsBool, std::move(c));
}
Constraint c_fnot(Constraint c) {
  return Constraint::unary(Constraint::Kind::FourNot, std::move(c));
}
Constraint c_bin(CBinOp op, Constraint a, Constraint b) {
  return Constraint::binary(op, std::move(a), std::move(b));
}

Constraint c_conj(const std::vector<Constraint>& cs) {
  if (cs.empty()) return c_true();
  Constraint acc = cs[0];
  for (std::size_t i = 1; i < cs.size(); ++i) acc = c_and(acc, cs[i]);
  return acc;
}

Constraint c_disj(const std::vector<Constraint>& cs) {
  if (cs.empty()) return c_false();
  Constraint acc = cs[0];
  for (std::size_t i = 1; i < cs.size(); ++i) acc = c_or(acc, cs[i]);
  return acc;
}

const Constraint& ConstraintTuple::at(Decision d) const {
  switch (d) {
    case Decision::Permit: return permit;
    case Decision::Deny: return deny;
    case Decision::NotApp: return not_app;
    case Decision::Indet: return indet;
  }
  return indet;
}

namespace {

template <typename Visit>
void postorder(const std::vector<Constraint>& roots, Visit visit) {
  std::unordered_set<const void*> done;
  // Explicit stack: deep left-nested folds would overflow recursion.
  std::vector<std::pair<const Constraint*, bool>> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it)
    stack.emplace_back(&*it, false);
  while (!stack.empty()) {
    auto [c, expanded] = stack.back();
    stack.pop_back();
    if (done.count(c->id())) continue;
    if (expanded) {
      done.insert(c->id());
      visit(*c);
      continue;
    }
    stack.emplace_back(c, true);
    switch (c->kind()) {
      case Constraint::Kind::Literal:
      case Constraint::Kind::Name: break;
      case Constraint::Kind::Binary:
        if (!done.count(c->rhs().id())) stack.emplace_back(&c->rhs(), false);
        if (!done.count(c->lhs().id())) stack.emplace_back(&c->lhs(), false);
        break;
      default:
        if (!done.count(c->operand().id()))
          stack.emplace_back(&c->operand(), false);
        break;
    }
  }
}

}  // namespace

void visit_postorder(const std::vector<Constraint>& roots,
                     const std::function<void(const Constraint&)>& visit) {
  postorder(roots, visit);
}

std::size_t dag_size(const std::vector<Constraint>& roots) {
  std::size_t n = 0;
  postorder(roots, [&](const Constraint&) { ++n; });
  return n;
}

ConstraintProgram::ConstraintProgram(const std::vector<Constraint>& roots) {
  std::unordered_map<const void*, std::uint32_t> slot;
  std::map<AttributeName, std::uint32_t> name_index;
  postorder(roots, [&](const Constraint& c) {
    Instr in;
    in.kind = c.kind();
    switch (c.kind()) {
      case Constraint::Kind::Literal: in.literal = c.value(); break;
      case Constraint::Kind::Name: {
        auto [it, fresh] = name_index.emplace(
            c.attribute(), static_cast<std::uint32_t>(names_.size()));
        if (fresh) names_.push_back(c.attribute());
        in.name = it->second;
        break;
      }
      case Constraint::Kind::Binary:
        in.op = c.op();
        in.a = slot.at(c.lhs().id());
        in.b = slot.at(c.rhs().id());
        break;
      default: in.a = slot.at(c.operand().id()); break;
    }
    slot.emplace(c.id(), static_cast<std::uint32_t>(code_.size()));
    code_.push_back(std::move(in));
  });
  for (const auto& r : roots) roots_.push_back(slot.at(r.id()));
}

ConstraintProgram::ConstraintProgram(const ConstraintTuple& t)
    : ConstraintProgram(
          std::vector<Constraint>{t.permit, t.deny, t.not_app, t.indet}) {}

void ConstraintProgram::evaluate(const SemanticRequest& r,
                                 std::vector<ExtendedValue>& s) const {
  std::vector<ExtendedValue> names;
  names.reserve(names_.size());
  for (const auto& n : names_) names.push_back(r.lookup(n));
  s.resize(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    switch (in.kind) {
      case Constraint::Kind::Literal: s[i] = in.literal; break;
      case Constraint::Kind::Name: s[i] = names[in.name]; break;
      case Constraint::Kind::IsBot: s[i] = Value(s[in.a].is_bottom()); break;
      case Constraint::Kind::IsErr: s[i] = Value(s[in.a].is_error()); break;
      case Constraint::Kind::IsBool: s[i] = Value(s[in.a].is_bool()); break;
      case Constraint::Kind::Not:
        s[i] = Value(s[in.a].is_false() || s[in.a].is_bottom());
        break;
      case Constraint::Kind::FourNot: s[i] = ops::four_not(s[in.a]); break;
      case Constraint::Kind::Binary: {
        const ExtendedValue& a = s[in.a];
        const ExtendedValue& b = s[in.b];
        switch (in.op) {
          case CBinOp::And: s[i] = Value(a.is_true() && b.is_true()); break;
          case CBinOp::Or: s[i] = Value(a.is_true() || b.is_true()); break;
          case CBinOp::FAnd: s[i] = ops::four_and(a, b); break;
          case CBinOp::FOr: s[i] = ops::four_or(a, b); break;
          case CBinOp::Eq: s[i] = ops::equal(a, b); break;
          case CBinOp::Gt: s[i] = ops::greater(a, b); break;
          case CBinOp::In: s[i] = ops::member(a, b); break;
          case CBinOp::Add: s[i] = ops::add(a, b); break;
          case CBinOp::Sub: s[i] = ops::subtract(a, b); break;
          case CBinOp::Mul: s[i] = ops::multiply(a, b); break;
          case CBinOp::Div: s[i] = ops::divide(a, b); break;
        }
        break;
      }
    }
  }
}

std::vector<ExtendedValue> ConstraintProgram::run(
    const SemanticRequest& r) const {
  std::vector<ExtendedValue> slots;
  evaluate(r, slots);
  std::vector<ExtendedValue> out;
  out.reserve(roots_.size());
  for (auto i : roots_) out.push_back(slots[i]);
  return out;
}

std::vector<bool> ConstraintProgram::satisfied(const SemanticRequest& r) const {
  std::vector<ExtendedValue> slots;
  evaluate(r, slots);
  std::vector<bool> out;
  out.reserve(roots_.size());
  for (auto i : roots_) out.push_back(slots[i].is_true());
  return out;
}

ExtendedValue eval_constraint(const Constraint& c, const SemanticRequest& r) {
  return ConstraintProgram(std::vector<Constraint>{c}).run(r)[0];
}

bool satisfied(const Constraint& c, const SemanticRequest& r) {
  return eval_constraint(c, r).is_true();
}

namespace {

std::string_view unary_label(Constraint::Kind k) {
  switch (k) {
    case Constraint::Kind::IsBot: return "isBot";
    case Constraint::Kind::IsErr: return "isErr";
    case Constraint::Kind::IsBool: return "isBool";
    case Constraint::Kind::Not: return "¬";
    case Constraint::Kind::FourNot: return "¬̇";
    default: return "?";
  }
}

class Printer {
 public:
  explicit Printer(std::unordered_map<const void*, std::string> names)
      : names_(std::move(names)) {}

  void print(const Constraint& c, std::string& out, bool top) const {
    if (!top) {
      auto it = names_.find(c.id());
      if (it != names_.end()) {
        out += it->second;
        return;
      }
    }
    switch (c.kind()) {
      case Constraint::Kind::Literal:
        out += c.value().to_string();
        return;
      case Constraint::Kind::Name: out += c.attribute().to_string(); return;
      case Constraint::Kind::Binary:
        out += "(";
        print(c.lhs(), out, false);
        out += " ";
        out += cbin_op_symbol(c.op());
        out += " ";
        print(c.rhs(), out, false);
        out += ")";
        return;
      case Constraint::Kind::Not:
      case Constraint::Kind::FourNot:
        out += unary_label(c.kind());
        print(c.operand(), out, false);
        return;
      default:
        out += unary_label(c.kind());
        out += "(";
        print(c.operand(), out, false);
        out += ")";
        return;
    }
  }

 private:
  std::unordered_map<const void*, std::string> names_;
};

}  // namespace

std::string print_constraint(const Constraint& c) {
  std::string out;
  Printer({}).print(c, out, true);
  return out;
}

std::string print_tuple(const ConstraintTuple& t, std::size_t inline_limit) {
  const std::vector<Constraint> roots{t.permit, t.deny, t.not_app, t.indet};
  // Expanded (tree) size per node, saturating at the limit.
  std::unordered_map<const void*, std::size_t> size;
  std::unordered_map<const void*, std::size_t> parents;
  std::vector<Constraint> order;
  postorder(roots, [&](const Constraint& c) {
    std::size_t s = 1;
    auto add = [&](const Constraint& k) {
      s = std::min(inline_limit + 1, s + size.at(k.id()));
      ++parents[k.id()];
    };
    if (c.kind() == Constraint::Kind::Binary) {
      add(c.lhs());
      add(c.rhs());
    } else if (c.kind() != Constraint::Kind::Literal &&
               c.kind() != Constraint::Kind::Name) {
      add(c.operand());
    }
    size[c.id()] = s;
    order.push_back(c);
  });
  std::size_t total = 0;
  for (const auto& r : roots) total += size.at(r.id());

  std::unordered_map<const void*, std::string> names;
  std::vector<Constraint> defs;
  if (total > inline_limit) {
    for (const auto& c : order) {
      if (parents[c.id()] > 1 && c.kind() != Constraint::Kind::Literal &&
          c.kind() != Constraint::Kind::Name) {
        names.emplace(c.id(), "c" + std::to_string(defs.size() + 1));
        defs.push_back(c);
      }
    }
  }
  Printer printer(names);
  std::string out;
  for (const auto& d : defs) {
    out += names.at(d.id()) + " ≜ ";
    printer.print(d, out, true);
    out += "\n";
  }
  const char* labels[] = {"permit", "deny", "not-app", "indet"};
  out += "⟨";
  for (std::size_t i = 0; i < 4; ++i) {
    out += i ? ",\n " : "";
    out += labels[i];
    out += " : ";
    printer.print(roots[i], out, false);
  }
  out += "⟩\n";
  return out;
}

namespace {

bool is_bool_literal(const Constraint& c, bool v) {
  return c.kind() == Constraint::Kind::Literal && c.value().is_bool() &&
         c.value().as_bool() == v;
}

// Terms whose value is always a boolean.
bool is_classical(const Constraint& c) {
  switch (c.kind()) {
    case Constraint::Kind::Literal: return c.value().is_bool();
    case Constraint::Kind::IsBot:
    case Constraint::Kind::IsErr:
    case Constraint::Kind::IsBool:
    case Constraint::Kind::Not: return true;
    case Constraint::Kind::Binary:
      return c.op() == CBinOp::And || c.op() == CBinOp::Or;
    default: return false;
  }
}

Constraint fold(const Constraint& c,
                std::unordered_map<const void*, Constraint>& memo) {
  auto it = memo.find(c.id());
  if (it != memo.end()) return it->second;
  Constraint out = c;
  switch (c.kind()) {
    case Constraint::Kind::Literal:
    case Constraint::Kind::Name: break;
    case Constraint::Kind::Not: {
      Constraint a = fold(c.operand(), memo);
      if (is_bool_literal(a, true)) {
        out = c_false();
      } else if (is_bool_literal(a, false)) {
        out = c_true();
      } else if (a.id() != c.operand().id()) {
        out = c_not(a);
      }
      break;
    }
    case Constraint::Kind::Binary: {
      Constraint a = fold(c.lhs(), memo);
      Constraint b = fold(c.rhs(), memo);
      if (c.op() == CBinOp::And) {
        if (is_bool_literal(a, false) || is_bool_literal(b, false)) {
          out = c_false();
          break;
        }
        if (is_bool_literal(a, true) && is_classical(b)) {
          out = b;
          break;
        }
        if (is_bool_literal(b, true) && is_classical(a)) {
          out = a;
          break;
        }
      } else if (c.op() == CBinOp::Or) {
        if (is_bool_literal(a, true) || is_bool_literal(b, true)) {
          out = c_true();
          break;
        }
        if (is_bool_literal(a, false) && is_classical(b)) {
          out = b;
          break;
        }
        if (is_bool_literal(b, false) && is_classical(a)) {
          out = a;
          break;
        }
      }
      if (a.id() != c.lhs().id() || b.id() != c.rhs().id())
        out = c_bin(c.op(), a, b);
      break;
    }
    default: {
      Constraint a = fold(c.operand(), memo);
      if (a.id() != c.operand().id()) out = Constraint::unary(c.kind(), a);
      break;
    }
  }
  memo.emplace(c.id(), out);
  return out;
}

}  // namespace

Constraint simplify(const Constraint& c) {
  std::unordered_map<const void*, Constraint> memo;
  return fold(c, memo);
}

ConstraintTuple simplify(const ConstraintTuple& t) {
  std::unordered_map<const void*, Constraint> memo;
  return {fold(t.permit, memo), fold(t.deny, memo), fold(t.not_app, memo),
          fold(t.indet, memo)};
}

}  // namespace facpl
