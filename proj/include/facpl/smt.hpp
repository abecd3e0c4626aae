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
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "facpl/ast.hpp"
#include "facpl/constraint.hpp"
#include "facpl/typing.hpp"

namespace facpl {

// Ill-typed input, a name without a type, or a request value whose type
// conflicts with the policy's type assignment.
class SmtError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SMT-LIB encoding of constraints over TValue records. One context holds the
// type assignment and the string enumeration shared by every definition in a
// script.
class SmtContext {
 public:
  SmtContext(TypeAssignment ta, const std::set<std::string>& strings);

  // Datatypes, per-name constants with their mutual-exclusion assertions,
  // and the operator functions.
  std::string prelude() const;

  using Named = std::vector<std::pair<std::string, Constraint>>;

  // One Bool define-fun per root, true iff the constraint is exactly true.
  // Labelled nodes are defined under their label with their own sort;
  // other shared subterms are hoisted into `<prefix>aux_<k>`.
  std::string define(const Named& roots, const Named& labels,
                     const std::string& prefix);

  // `(assert ...)` lines binding a name to a concrete value (not missing,
  // not erroneous), or asserting that it is missing.
  std::string assert_value(const AttributeName& n, const ExtendedValue& v) const;
  std::string assert_missing(const AttributeName& n) const;

  std::string sort_of(const TypeTerm& t) const;
  // Literal term of sort `t` for a value or set.
  std::string term(const ExtendedValue& v, const TypeTerm& t) const;
  static std::string name_symbol(const AttributeName& n);

  const TypeAssignment& types() const { return ta_; }
  const std::vector<std::string>& strings() const { return strings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct Info {
    TypeTerm type = TypeTerm::boolean();
    bool formula = false;    // classical node: a plain SMT Bool
    bool has_name = false;   // some attribute name occurs below
    std::string term;        // natural form, or the defining symbol
  };
  void build(const Constraint& c);
  const Info& info(const Constraint& c) const;
  std::string record(const Constraint& c) const;  // as (TValue T)
  std::string truth(const Constraint& c) const;   // exactly true
  std::string binary(const Constraint& c, Info& out);
  std::string string_constructor(const std::string& s) const;

  TypeAssignment ta_;
  std::vector<std::string> strings_;
  std::map<std::string, std::string> str_symbols_;
  std::vector<std::string> warnings_;

  std::unordered_map<const void*, Info> info_;
  std::vector<Constraint> keep_;  // pins the nodes info_ is keyed on
  int aux_ = 0;
};

// A property to verify, one solver call each.
struct PropertyQuery {
  enum class Kind { EvaluateTo, MayEvaluateTo, MustEvaluateTo, Complete,
                    Disjoint, Cover };
  Kind kind = Kind::Complete;
  SyntacticRequest request;
  Decision decision = Decision::Permit;
  std::optional<Policy> other;
  std::string other_name;

  static PropertyQuery evaluate_to(SyntacticRequest r, Decision d);
  static PropertyQuery may_evaluate_to(SyntacticRequest r, Decision d);
  static PropertyQuery must_evaluate_to(SyntacticRequest r, Decision d);
  static PropertyQuery complete();
  static PropertyQuery disjoint(Policy other, std::string name = "other");
  static PropertyQuery cover(Policy other, std::string name = "other");

  // sat means the property holds (EvaluateTo, May); otherwise unsat does.
  bool holds_on_sat() const;
  std::string kind_name() const;
  std::string describe() const;
};

struct EmittedScript {
  std::string text;
  std::vector<std::string> strings;
  std::vector<std::string> warnings;
};

// The policy's declarations and its four decision constraints plus one
// definition per target, without any query or check-sat.
EmittedScript emit_policy(const Policy& p);

// A complete script for one query ending in a single check-sat.
EmittedScript emit_query(const Policy& p, const PropertyQuery& q);

// parse_properties reads one query per line:
//   evaluate-to <decision> (<name>, <literal>) ...
//   may-evaluate-to <decision> (<name>, <literal>) ...
//   must-evaluate-to <decision> (<name>, <literal>) ...
//   complete
//   disjoint <policy file>
//   cover <policy file>
// Blank lines and `//` comments are skipped; policy paths are relative to
// `base_dir`.
struct PropertyFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
std::vector<PropertyQuery> parse_properties(const std::string& text,
                                            const std::string& base_dir);

}  // namespace facpl
