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

#include "facpl/operators.hpp"

namespace facpl::ops {

namespace {

// ⊥ when one side is missing and the other is not an error.
bool bottom_case(const ExtendedValue& a, const ExtendedValue& b) {
  return (a.is_bottom() && !b.is_error()) || (b.is_bottom() && !a.is_error());
}

ExtendedValue strict(const ExtendedValue& a, const ExtendedValue& b) {
  return bottom_case(a, b) ? ExtendedValue::bottom() : ExtendedValue::error();
}

bool both_doubles(const ExtendedValue& a, const ExtendedValue& b) {
  return a.is_value() && b.is_value() && a.value().is_double() &&
         b.value().is_double();
}

bool set_of(const ValueSet& s, ValueType t) {
  for (const auto& v : s.elements())
    if (v.type() != t) return false;
  return true;
}

template <typename F>
ExtendedValue arith(const ExtendedValue& a, const ExtendedValue& b, F f) {
  if (both_doubles(a, b)) return Value(f(a.value().as_double(),
                                         b.value().as_double()));
  return strict(a, b);
}

}  // namespace

ExtendedValue four_and(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_true() && b.is_true()) return Value(true);
  if (a.is_false() || b.is_false()) return Value(false);
  const auto tb = [](const ExtendedValue& x) {
    return x.is_true() || x.is_bottom();
  };
  if ((a.is_bottom() && tb(b)) || (b.is_bottom() && tb(a)))
    return ExtendedValue::bottom();
  return ExtendedValue::error();
}

ExtendedValue four_or(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_true() || b.is_true()) return Value(true);
  if (a.is_false() && b.is_false()) return Value(false);
  const auto fb = [](const ExtendedValue& x) {
    return x.is_false() || x.is_bottom();
  };
  if ((a.is_bottom() && fb(b)) || (b.is_bottom() && fb(a)))
    return ExtendedValue::bottom();
  return ExtendedValue::error();
}

ExtendedValue four_not(const ExtendedValue& a) {
  if (a.is_true()) return Value(false);
  if (a.is_false()) return Value(true);
  if (a.is_bottom()) return ExtendedValue::bottom();
  return ExtendedValue::error();
}

ExtendedValue equal(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_value() && b.is_value() && a.value().type() == b.value().type())
    return Value(a.value() == b.value());
  if (a.is_set() && b.is_set()) return Value(a.set() == b.set());
  return strict(a, b);
}

ExtendedValue member(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_value() && b.is_set() && set_of(b.set(), a.value().type()))
    return Value(b.set().contains(a.value()));
  return strict(a, b);
}

ExtendedValue greater(const ExtendedValue& a, const ExtendedValue& b) {
  if (both_doubles(a, b))
    return Value(a.value().as_double() > b.value().as_double());
  if (a.is_value() && b.is_value() && a.value().is_date() &&
      b.value().is_date())
    return Value(a.value().as_date() > b.value().as_date());
  return strict(a, b);
}

ExtendedValue add(const ExtendedValue& a, const ExtendedValue& b) {
  return arith(a, b, [](double x, double y) { return x + y; });
}

ExtendedValue subtract(const ExtendedValue& a, const ExtendedValue& b) {
  return arith(a, b, [](double x, double y) { return x - y; });
}

ExtendedValue multiply(const ExtendedValue& a, const ExtendedValue& b) {
  return arith(a, b, [](double x, double y) { return x * y; });
}

ExtendedValue divide(const ExtendedValue& a, const ExtendedValue& b) {
  if (both_doubles(a, b)) {
    if (b.value().as_double() == 0.0) return ExtendedValue::error();
    return Value(a.value().as_double() / b.value().as_double());
  }
  return strict(a, b);
}

ExtendedValue apply(ExprOp op, const ExtendedValue& a, const ExtendedValue& b) {
  switch (op) {
    case ExprOp::And: return four_and(a, b);
    case ExprOp::Or: return four_or(a, b);
    case ExprOp::Equal: return equal(a, b);
    case ExprOp::In: return member(a, b);
    case ExprOp::GreaterThan: return greater(a, b);
    case ExprOp::Add: return add(a, b);
    case ExprOp::Subtract: return subtract(a, b);
    case ExprOp::Divide: return divide(a, b);
    case ExprOp::Multiply: return multiply(a, b);
  }
  return ExtendedValue::error();
}

}  // namespace facpl::ops
