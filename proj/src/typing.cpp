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

#include "facpl/typing.hpp"

#include <unordered_map>

namespace facpl {

TypeTerm TypeTerm::set_of(TypeTerm elem) {
  TypeTerm t(Kind::Set);
  t.elem_ = std::make_shared<const TypeTerm>(std::move(elem));
  return t;
}

TypeTerm TypeTerm::var(int id) {
  TypeTerm t(Kind::Var);
  t.var_ = id;
  return t;
}

TypeTerm TypeTerm::of(ValueType t) {
  switch (t) {
    case ValueType::Bool: return boolean();
    case ValueType::Double: return dbl();
    case ValueType::String: return string();
    case ValueType::Date: return date();
  }
  return string();
}

bool TypeTerm::is_ground() const {
  if (kind_ == Kind::Var) return false;
  if (kind_ == Kind::Set) return elem_->is_ground();
  return true;
}

ValueType TypeTerm::base_type() const {
  switch (kind_) {
    case Kind::Bool: return ValueType::Bool;
    case Kind::Double: return ValueType::Double;
    case Kind::Date: return ValueType::Date;
    case Kind::Set: return elem_->base_type();
    default: return ValueType::String;
  }
}

std::string TypeTerm::to_string() const {
  switch (kind_) {
    case Kind::Bool: return "Bool";
    case Kind::Double: return "Double";
    case Kind::String: return "String";
    case Kind::Date: return "Date";
    case Kind::Set: return "Set(" + elem_->to_string() + ")";
    case Kind::Var: return "X" + std::to_string(var_);
  }
  return "?";
}

bool operator==(const TypeTerm& a, const TypeTerm& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == TypeTerm::Kind::Var) return a.var_ == b.var_;
  if (a.kind_ == TypeTerm::Kind::Set) return *a.elem_ == *b.elem_;
  return true;
}

void TypingConstraint::append(const TypingConstraint& other) {
  equations.insert(equations.end(), other.equations.begin(),
                   other.equations.end());
  ordered.insert(ordered.end(), other.ordered.begin(), other.ordered.end());
}

TypeTerm TypeEnv::lookup(const AttributeName& n) {
  auto it = vars_.find(n);
  if (it != vars_.end()) return TypeTerm::var(it->second);
  int id = next_++;
  vars_.emplace(n, id);
  return TypeTerm::var(id);
}

TypeTerm TypeEnv::fresh() { return TypeTerm::var(next_++); }

Inferred infer(const Expr& e, TypeEnv& env) {
  switch (e.kind()) {
    case Expr::Kind::Name: return {env.lookup(e.attribute()), {}};
    case Expr::Kind::Literal: return {TypeTerm::of(e.value().type()), {}};
    case Expr::Kind::Not: {
      Inferred a = infer(e.operand(), env);
      a.constraint.equations.push_back({a.type, TypeTerm::boolean()});
      return {TypeTerm::boolean(), std::move(a.constraint)};
    }
    case Expr::Kind::Binary: break;
  }
  Inferred a = infer(e.lhs(), env);
  Inferred b = infer(e.rhs(), env);
  TypingConstraint c = std::move(a.constraint);
  c.append(b.constraint);
  switch (e.op()) {
    case ExprOp::And:
    case ExprOp::Or:
      c.equations.push_back({a.type, TypeTerm::boolean()});
      c.equations.push_back({b.type, TypeTerm::boolean()});
      return {TypeTerm::boolean(), std::move(c)};
    case ExprOp::Equal:
      c.equations.push_back({a.type, b.type});
      return {TypeTerm::boolean(), std::move(c)};
    case ExprOp::In: {
      TypeTerm elem = env.fresh();
      c.equations.push_back({b.type, TypeTerm::set_of(elem)});
      c.equations.push_back({a.type, elem});
      return {TypeTerm::boolean(), std::move(c)};
    }
    case ExprOp::GreaterThan:
      c.equations.push_back({a.type, b.type});
      c.ordered.push_back(a.type);
      return {TypeTerm::boolean(), std::move(c)};
    case ExprOp::Add:
    case ExprOp::Subtract:
    case ExprOp::Multiply:
    case ExprOp::Divide:
      c.equations.push_back({a.type, TypeTerm::dbl()});
      c.equations.push_back({b.type, TypeTerm::dbl()});
      return {TypeTerm::dbl(), std::move(c)};
  }
  return {TypeTerm::boolean(), std::move(c)};
}

namespace {

class Unifier {
 public:
  TypeTerm resolve(const TypeTerm& t) const {
    if (t.kind() == TypeTerm::Kind::Var) {
      auto it = subst_.find(t.var_id());
      if (it != subst_.end()) return resolve(it->second);
      return t;
    }
    if (t.kind() == TypeTerm::Kind::Set)
      return TypeTerm::set_of(resolve(t.element()));
    return t;
  }

  bool occurs(int var, const TypeTerm& t) const {
    TypeTerm r = resolve(t);
    if (r.kind() == TypeTerm::Kind::Var) return r.var_id() == var;
    if (r.kind() == TypeTerm::Kind::Set) return occurs(var, r.element());
    return false;
  }

  // Empty string on success, otherwise a description of the clash.
  std::string unify(const TypeTerm& x, const TypeTerm& y) {
    TypeTerm a = resolve(x), b = resolve(y);
    if (a == b) return {};
    if (a.kind() == TypeTerm::Kind::Var) return bind(a.var_id(), b);
    if (b.kind() == TypeTerm::Kind::Var) return bind(b.var_id(), a);
    if (a.kind() == TypeTerm::Kind::Set && b.kind() == TypeTerm::Kind::Set)
      return unify(a.element(), b.element());
    return clash(a, b);
  }

  void bind_default(int var, TypeTerm t) { subst_.emplace(var, std::move(t)); }

 private:
  static std::string clash(const TypeTerm& a, const TypeTerm& b) {
    return a.to_string() + " = " + b.to_string();
  }

  std::string bind(int var, const TypeTerm& t) {
    if (occurs(var, t)) return clash(TypeTerm::var(var), t) + " (occurs check)";
    subst_.emplace(var, t);
    return {};
  }

  std::unordered_map<int, TypeTerm> subst_;
};

TypeTerm ground(const TypeTerm& t, Unifier& u, const TypeTerm& fallback) {
  TypeTerm r = u.resolve(t);
  if (r.kind() == TypeTerm::Kind::Var) {
    u.bind_default(r.var_id(), fallback);
    return fallback;
  }
  if (r.kind() == TypeTerm::Kind::Set)
    return TypeTerm::set_of(ground(r.element(), u, TypeTerm::string()));
  return r;
}

}  // namespace

SolveResult solve(const TypingConstraint& c, const TypeEnv& env) {
  Unifier u;
  for (const auto& eq : c.equations) {
    std::string err = u.unify(eq.lhs, eq.rhs);
    if (!err.empty()) {
      std::string msg = "type constraint unsatisfiable: " +
                        eq.lhs.to_string() + " = " + eq.rhs.to_string() +
                        " conflicts (" + err + ")";
      for (const auto& [name, id] : env.vars())
        msg += "; X" + std::to_string(id) + " is " + name.to_string();
      return Unsat{msg};
    }
  }
  // greater-than is overloaded on Double and Date; unresolved means Double.
  for (const auto& t : c.ordered) {
    TypeTerm g = ground(t, u, TypeTerm::dbl());
    if (g.kind() != TypeTerm::Kind::Double && g.kind() != TypeTerm::Kind::Date)
      return Unsat{"type constraint unsatisfiable: greater-than operand " +
                   g.to_string() + " is neither Double nor Date"};
  }
  TypeAssignment out;
  for (const auto& [name, id] : env.vars()) {
    TypeTerm g = ground(TypeTerm::var(id), u, TypeTerm::string());
    if (g.is_set() && g.element().is_set())
      return Unsat{"type constraint unsatisfiable: " + name.to_string() +
                   " would be a set of sets"};
    out.emplace(name, g);
  }
  return out;
}

namespace {

void gather(const Expr& e, TypeEnv& env, TypingConstraint& c) {
  c.append(infer(e, env).constraint);
}

// Targets must be boolean.
void target(const Expr& e, TypeEnv& env, TypingConstraint& c) {
  Inferred t = infer(e, env);
  c.append(t.constraint);
  c.equations.push_back({t.type, TypeTerm::boolean()});
}

void gather(const std::vector<Obligation>& os, TypeEnv& env,
            TypingConstraint& c) {
  for (const auto& o : os)
    for (const auto& a : o.args) gather(a, env, c);
}

void gather(const Policy& p, TypeEnv& env, TypingConstraint& c) {
  if (p.is_rule()) {
    target(p.rule().target, env, c);
    gather(p.rule().obligations, env, c);
    return;
  }
  const auto& s = p.set();
  target(s.target, env, c);
  for (const auto& child : s.policies) gather(child, env, c);
  gather(s.obl_permit, env, c);
  gather(s.obl_deny, env, c);
}

}  // namespace

SolveResult welltyped(const Policy& p) {
  TypeEnv env;
  TypingConstraint c;
  gather(p, env, c);
  return solve(c, env);
}

SolveResult welltyped(const Pdp& pdp) { return welltyped(pdp_as_policy(pdp)); }

}  // namespace facpl
