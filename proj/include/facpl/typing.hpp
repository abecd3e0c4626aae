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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "facpl/ast.hpp"

namespace facpl {

class TypeTerm {
 public:
  enum class Kind : std::uint8_t { Bool, Double, String, Date, Set, Var };

  static TypeTerm boolean() { return TypeTerm(Kind::Bool); }
  static TypeTerm dbl() { return TypeTerm(Kind::Double); }
  static TypeTerm string() { return TypeTerm(Kind::String); }
  static TypeTerm date() { return TypeTerm(Kind::Date); }
  static TypeTerm set_of(TypeTerm elem);
  static TypeTerm var(int id);
  static TypeTerm of(ValueType t);

  Kind kind() const { return kind_; }
  int var_id() const { return var_; }
  const TypeTerm& element() const { return *elem_; }
  bool is_ground() const;
  // Scalar type of a ground scalar or the element type of a ground set.
  ValueType base_type() const;
  bool is_set() const { return kind_ == Kind::Set; }

  std::string to_string() const;

  friend bool operator==(const TypeTerm& a, const TypeTerm& b);

 private:
  explicit TypeTerm(Kind k) : kind_(k) {}
  Kind kind_;
  int var_ = -1;
  std::shared_ptr<const TypeTerm> elem_;
};

struct TypeEquation {
  TypeTerm lhs;
  TypeTerm rhs;
};

// Conjunction of equalities, plus the operand types of greater-than, which
// must resolve to Double or Date.
struct TypingConstraint {
  std::vector<TypeEquation> equations;
  std::vector<TypeTerm> ordered;

  void append(const TypingConstraint& other);
};

// Γ: one type variable per attribute name.
class TypeEnv {
 public:
  TypeTerm lookup(const AttributeName& n);
  TypeTerm fresh();
  const std::map<AttributeName, int>& vars() const { return vars_; }

 private:
  std::map<AttributeName, int> vars_;
  int next_ = 0;
};

struct Inferred {
  TypeTerm type;
  TypingConstraint constraint;
};

Inferred infer(const Expr& e, TypeEnv& env);

using TypeAssignment = std::map<AttributeName, TypeTerm>;

struct Unsat {
  std::string message;  // names the first conflicting pair
};

using SolveResult = std::variant<TypeAssignment, Unsat>;

// Syntactic unification; unresolved variables default to String (Double
// for greater-than operands).
SolveResult solve(const TypingConstraint& c, const TypeEnv& env);

SolveResult welltyped(const Policy& p);
SolveResult welltyped(const Pdp& pdp);

}  // namespace facpl
