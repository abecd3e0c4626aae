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
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/evaluator.hpp"
#include "facpl/value.hpp"

namespace facpl {

enum class CBinOp : std::uint8_t {
  And,   // classical ∧
  Or,    // classical ∨
  FAnd,  // 4-valued ∧̇
  FOr,   // 4-valued ∨̇
  Eq,
  Gt,
  In,
  Add,
  Sub,
  Mul,
  Div,
};

std::string_view cbin_op_symbol(CBinOp op);

// Immutable constraint term. Subterms are shared, so a constraint is a DAG;
// node identity (`id()`) is stable for the lifetime of the term.
class Constraint {
 public:
  enum class Kind : std::uint8_t {
    Literal,
    Name,
    IsBot,
    IsErr,
    IsBool,
    Not,      // classical ¬
    FourNot,  // 4-valued ¬̇
    Binary,
  };

  static Constraint literal(Value v);
  static Constraint name(AttributeName n);
  static Constraint unary(Kind k, Constraint c);
  static Constraint binary(CBinOp op, Constraint a, Constraint b);

  Kind kind() const;
  const Value& value() const;
  const AttributeName& attribute() const;
  CBinOp op() const;
  const Constraint& operand() const;
  const Constraint& lhs() const;
  const Constraint& rhs() const;
  const void* id() const { return node_.get(); }

  // Structural equality (not identity).
  friend bool operator==(const Constraint& a, const Constraint& b);

 private:
  struct Node;
  explicit Constraint(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Constraint c_true();
Constraint c_false();
Constraint c_lit(Value v);
Constraint c_name(AttributeName n);
Constraint c_not(Constraint c);
Constraint c_and(Constraint a, Constraint b);
Constraint c_or(Constraint a, Constraint b);
Constraint c_is_bot(Constraint c);
Constraint c_is_err(Constraint c);
Constraint c_is_bool(Constraint c);
Constraint c_fnot(Constraint c);
Constraint c_bin(CBinOp op, Constraint a, Constraint b);
// Left-nested conjunction/disjunction; empty input gives true/false.
Constraint c_conj(const std::vector<Constraint>& cs);
Constraint c_disj(const std::vector<Constraint>& cs);

struct ConstraintTuple {
  Constraint permit = c_false();
  Constraint deny = c_false();
  Constraint not_app = c_false();
  Constraint indet = c_false();

  const Constraint& at(Decision d) const;
};

ExtendedValue eval_constraint(const Constraint& c, const SemanticRequest& r);

// True iff the constraint evaluates to exactly the boolean true.
bool satisfied(const Constraint& c, const SemanticRequest& r);

// Visits every distinct node reachable from the roots, children first.
void visit_postorder(const std::vector<Constraint>& roots,
                     const std::function<void(const Constraint&)>& visit);

// Number of distinct DAG nodes reachable from the roots.
std::size_t dag_size(const std::vector<Constraint>& roots);

// A constraint DAG flattened into topological order so that evaluation is
// linear in the number of distinct nodes.
class ConstraintProgram {
 public:
  explicit ConstraintProgram(const std::vector<Constraint>& roots);
  explicit ConstraintProgram(const ConstraintTuple& t);

  // Values of the roots, in the order given at construction.
  std::vector<ExtendedValue> run(const SemanticRequest& r) const;
  // Which roots evaluate to exactly true.
  std::vector<bool> satisfied(const SemanticRequest& r) const;
  std::size_t size() const { return code_.size(); }

 private:
  struct Instr {
    Constraint::Kind kind;
    CBinOp op = CBinOp::And;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t name = 0;  // index into names_
    ExtendedValue literal;
  };
  void evaluate(const SemanticRequest& r,
                std::vector<ExtendedValue>& slots) const;

  std::vector<Instr> code_;
  std::vector<AttributeName> names_;
  std::vector<std::uint32_t> roots_;
};

// Pretty form using the logical symbols (∧, ∨, ¬, ∧̇, ∨̇, ¬̇, ∈, isBot, ...).
// Shared subterms whose expansion would exceed `inline_limit` nodes are
// printed once as named definitions.
std::string print_constraint(const Constraint& c);
std::string print_tuple(const ConstraintTuple& t,
                        std::size_t inline_limit = 200000);

// Constant folding of classical ∧/∨/¬ over literal true/false.
Constraint simplify(const Constraint& c);
ConstraintTuple simplify(const ConstraintTuple& t);

}  // namespace facpl
