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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/constraint.hpp"

namespace facpl {

// Raised when a policy uses the greedy strategy anywhere.
class GreedyNotTranslatable : public std::runtime_error {
 public:
  GreedyNotTranslatable()
      : std::runtime_error("greedy strategy not translatable") {}
};

Constraint translate_expr(const Expr& e);
Constraint translate_obls(const std::vector<Obligation>& os);

ConstraintTuple combine_tuple_pair(AlgId alg, const ConstraintTuple& a,
                                   const ConstraintTuple& b);
ConstraintTuple combine_tuple_single(AlgId alg, const ConstraintTuple& a);
// Left fold of the binary combinator; a single tuple uses the unary rule.
ConstraintTuple combine_tuples(AlgId alg,
                               const std::vector<ConstraintTuple>& tuples);

ConstraintTuple translate_policy(const Policy& p);
ConstraintTuple translate_pdp(const Pdp& pdp);

// Translation that also reports each policy's target constraint, labelled
// `Rule<k>` / `PolicySet<k>` in preorder.
struct LabelledTranslation {
  ConstraintTuple tuple;
  std::vector<std::pair<std::string, Constraint>> targets;
};

LabelledTranslation translate_policy_labelled(const Policy& p);

}  // namespace facpl
