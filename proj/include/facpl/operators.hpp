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

#include "facpl/ast.hpp"
#include "facpl/value.hpp"

// Value-level semantics of the expression operators over
// Value ∪ 2^Value ∪ {⊥, error}. Expressions and constraints share them.
namespace facpl::ops {

ExtendedValue four_and(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue four_or(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue four_not(const ExtendedValue& a);
ExtendedValue equal(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue member(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue greater(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue add(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue subtract(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue multiply(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue divide(const ExtendedValue& a, const ExtendedValue& b);

ExtendedValue apply(ExprOp op, const ExtendedValue& a, const ExtendedValue& b);

}  // namespace facpl::ops
