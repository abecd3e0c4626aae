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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "facpl/evaluator.hpp"
#include "facpl/parser.hpp"
#include "facpl/smt.hpp"
#include "facpl/translator.hpp"

namespace facpl {

namespace {

constexpr const char* kErr = "false true";   // miss, err fields of an error
constexpr const char* kMiss = "true false";  // ... of a missing value
constexpr const char* kOk = "false false";

std::string suffix(const TypeTerm& t) {
  switch (t.kind()) {
    case TypeTerm::Kind::Bool: return "Bool";
    case TypeTerm::Kind::Double: return "Real";
    case TypeTerm::Kind::Date: return "Date";
    case TypeTerm::Kind::Set: return "Set" + suffix(t.element());
    default: return "Str";
  }
}

std::string real_literal(double d) {
  if (!std::isfinite(d)) throw SmtError("non-finite number in constraint");
  const bool neg = d < 0;
  if (neg) d = -d;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d,
                           std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  // sci is d.ddde[+-]XX: shift the decimal point by hand.
  const auto epos = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, epos))
    if (c != '.') digits += c;
  int exp = std::stoi(sci.substr(epos + 1)) + 1;  // digits before the point
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(-exp, '0') + digits;
  } else if (static_cast<std::size_t>(exp) >= digits.size()) {
    out = digits + std::string(exp - digits.size(), '0') + ".0";
  } else {
    out = digits.substr(0, exp) + "." + digits.substr(exp);
  }
  return neg ? "(- " + out + ")" : out;
}

std::string int_literal(std::int64_t v) {
  return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9');
    out += ok ? c : '_';
    if (out.size() == 24) break;
  }
  return out;
}

void strings_of(const Constraint& root, std::set<std::string>& out) {
  visit_postorder({root}, [&](const Constraint& c) {
    if (c.kind() == Constraint::Kind::Literal && c.value().is_string())
      out.insert(c.value().as_string());
  });
}

void strings_of(const ConstraintTuple& t, std::set<std::string>& out) {
  for (auto d : kAllDecisions) strings_of(t.at(d), out);
}

}  // namespace

SmtContext::SmtContext(TypeAssignment ta, const std::set<std::string>& strings)
    : ta_(std::move(ta)), strings_(strings.begin(), strings.end()) {
  for (std::size_t i = 0; i < strings_.size(); ++i)
    str_symbols_[strings_[i]] =
        "str_" + std::to_string(i) + "_" + sanitize(strings_[i]);
}

std::string SmtContext::name_symbol(const AttributeName& n) {
  return "n_" + n.to_string();
}

std::string SmtContext::sort_of(const TypeTerm& t) const {
  switch (t.kind()) {
    case TypeTerm::Kind::Bool: return "Bool";
    case TypeTerm::Kind::Double: return "Real";
    case TypeTerm::Kind::Date: return "Int";
    case TypeTerm::Kind::Set: return "(Array Int " + sort_of(t.element()) + ")";
    case TypeTerm::Kind::String: return "Str";
    case TypeTerm::Kind::Var: break;
  }
  throw SmtError("unresolved type variable " + t.to_string());
}

std::string SmtContext::string_constructor(const std::string& s) const {
  auto it = str_symbols_.find(s);
  if (it == str_symbols_.end())
    throw SmtError("string " + quote_string(s) + " missing from Str");
  return it->second;
}

namespace {

std::string scalar_term(const Value& v, const TypeTerm& t,
                        const std::function<std::string(const std::string&)>&
                            str) {
  const auto mismatch = [&] {
    return SmtError("typed-request error: " + v.to_string() +
                    " is not of type " + t.to_string());
  };
  switch (t.kind()) {
    case TypeTerm::Kind::Bool:
      if (!v.is_bool()) throw mismatch();
      return v.as_bool() ? "true" : "false";
    case TypeTerm::Kind::Double:
      if (!v.is_double()) throw mismatch();
      return real_literal(v.as_double());
    case TypeTerm::Kind::Date:
      if (!v.is_date()) throw mismatch();
      return int_literal(v.as_date().seconds);
    case TypeTerm::Kind::String:
      if (!v.is_string()) throw mismatch();
      return str(v.as_string());
    default:
      throw mismatch();
  }
}

}  // namespace

std::string SmtContext::term(const ExtendedValue& v, const TypeTerm& t) const {
  const auto str = [this](const std::string& s) {
    return string_constructor(s);
  };
  if (v.is_value()) return scalar_term(v.value(), t, str);
  if (v.is_set()) {
    if (!t.is_set())
      throw SmtError("typed-request error: " + v.to_string() +
                     " is not of type " + t.to_string());
    const auto& elems = v.set().elements();
    std::string out = "((as const (Array Int " + sort_of(t.element()) +
                      ")) " + scalar_term(elems[0], t.element(), str) + ")";
    for (std::size_t i = 1; i < elems.size(); ++i)
      out = "(store " + out + " " + std::to_string(i) + " " +
            scalar_term(elems[i], t.element(), str) + ")";
    return out;
  }
  throw SmtError("only values and sets have SMT terms");
}

std::string SmtContext::prelude() const {
  std::ostringstream o;
  o << "(set-logic ALL)\n"
    << "(declare-datatypes ((TValue 1)) ((par (T) ((mk-val (val T) "
       "(miss Bool) (err Bool))))))\n"
    ;
  o << "(declare-datatypes ((Str 0)) ((";
  for (const auto& s : strings_) o << "(" << str_symbols_.at(s) << ") ";
  o << "(str_other))))\n";

  for (const auto& [name, type] : ta_) {
    const std::string n = name_symbol(name);
    o << "(declare-const " << n << " (TValue " << sort_of(type) << "))\n"
      << "(assert (not (and (miss " << n << ") (err " << n << "))))\n";
  }

  o << "(define-fun isTrue ((x (TValue Bool))) Bool\n"
       "  (and (val x) (not (miss x)) (not (err x))))\n"
       "(define-fun isFalse ((x (TValue Bool))) Bool\n"
       "  (and (not (val x)) (not (miss x)) (not (err x))))\n"
       "(define-fun FAnd ((x (TValue Bool)) (y (TValue Bool))) (TValue Bool)\n"
       "  (ite (and (isTrue x) (isTrue y)) (mk-val true false false)\n"
       "  (ite (or (isFalse x) (isFalse y)) (mk-val false false false)\n"
       "  (ite (or (err x) (err y)) (mk-val false false true)\n"
       "  (mk-val false true false)))))\n"
       "(define-fun FOr ((x (TValue Bool)) (y (TValue Bool))) (TValue Bool)\n"
       "  (ite (or (isTrue x) (isTrue y)) (mk-val true false false)\n"
       "  (ite (and (isFalse x) (isFalse y)) (mk-val false false false)\n"
       "  (ite (or (err x) (err y)) (mk-val false false true)\n"
       "  (mk-val false true false)))))\n"
       "(define-fun FNot ((x (TValue Bool))) (TValue Bool)\n"
       "  (ite (isTrue x) (mk-val false false false)\n"
       "  (ite (isFalse x) (mk-val true false false)\n"
       "  (ite (err x) (mk-val false false true)\n"
       "  (mk-val false true false)))))\n";

  // Strict binary operator: error first, then missing, then `body`. The
  // flags xn/yn mark operands that are attribute names, whose err field
  // means "wrongly typed"; that ranks below a missing operand.
  const auto strict = [&](const std::string& name, const std::string& xs,
                          const std::string& ys, const std::string& rs,
                          const std::string& rdef, const std::string& body) {
    o << "(define-fun " << name << " ((x (TValue " << xs << ")) (y (TValue "
      << ys << ")) (xn Bool) (yn Bool)) (TValue " << rs << ")\n"
      << "  (ite (or (and (err x) (not xn)) (and (err y) (not yn))) (mk-val "
      << rdef << " " << kErr << ")\n"
      << "  (ite (or (miss x) (miss y)) (mk-val " << rdef << " " << kMiss
      << ")\n"
      << "  (ite (or (err x) (err y)) (mk-val " << rdef << " " << kErr
      << ")\n  " << body << "))))\n";
  };
  const std::vector<TypeTerm> scalars = {TypeTerm::boolean(), TypeTerm::dbl(),
                                         TypeTerm::date(), TypeTerm::string()};
  for (const auto& t : scalars) {
    const std::string s = sort_of(t), sx = suffix(t);
    const std::string set = "(Array Int " + s + ")";
    strict("equal" + sx, s, s, "Bool", "false",
           std::string("(mk-val (= (val x) (val y)) ") + kOk + ")");
    strict("equalSet" + sx, set, set, "Bool", "false",
           std::string("(mk-val (and (forall ((i Int)) (exists ((j Int)) (= "
                       "(select (val x) i) (select (val y) j)))) (forall ((j "
                       "Int)) (exists ((i Int)) (= (select (val y) j) (select "
                       "(val x) i))))) ") +
               kOk + ")");
    strict("in" + sx, s, set, "Bool", "false",
           std::string("(ite (exists ((i Int)) (= (val x) (select (val y) i)))"
                       " (mk-val true ") +
               kOk + ") (mk-val false " + kOk + "))");
  }
  for (const auto& t : {TypeTerm::dbl(), TypeTerm::date()}) {
    const std::string s = sort_of(t);
    strict("greater" + suffix(t), s, s, "Bool", "false",
           std::string("(mk-val (> (val x) (val y)) ") + kOk + ")");
  }
  const std::vector<std::pair<std::string, std::string>> arith = {
      {"addReal", "+"}, {"subtractReal", "-"}, {"multiplyReal", "*"}};
  for (const auto& [name, op] : arith)
    strict(name, "Real", "Real", "Real", "0.0",
           "(mk-val (" + op + " (val x) (val y)) " + kOk + ")");
  strict("divideReal", "Real", "Real", "Real", "0.0",
         std::string("(ite (= (val y) 0.0) (mk-val 0.0 ") + kErr +
             ") (mk-val (/ (val x) (val y)) " + kOk + "))");
  return o.str();
}

const SmtContext::Info& SmtContext::info(const Constraint& c) const {
  return info_.at(c.id());
}

std::string SmtContext::record(const Constraint& c) const {
  const Info& i = info(c);
  if (!i.formula) return i.term;
  return "(mk-val " + i.term + " " + kOk + ")";
}

std::string SmtContext::truth(const Constraint& c) const {
  const Info& i = info(c);
  if (i.formula) return i.term;
  if (c.kind() == Constraint::Kind::Literal && c.value().is_bool())
    return c.value().as_bool() ? "true" : "false";
  if (i.type.kind() != TypeTerm::Kind::Bool) return "false";
  return "(isTrue " + i.term + ")";
}

std::string SmtContext::binary(const Constraint& c, Info& out) {
  const Info& a = info(c.lhs());
  const Info& b = info(c.rhs());
  out.has_name = a.has_name || b.has_name;
  const auto same = [&](const char* what) {
    if (!(a.type == b.type))
      throw SmtError(std::string("ill-typed ") + what + ": " +
                     a.type.to_string() + " vs " + b.type.to_string());
  };
  const auto need = [&](const Info& i, const TypeTerm& t, const char* what) {
    if (!(i.type == t))
      throw SmtError(std::string("ill-typed ") + what + " operand " +
                     i.type.to_string());
  };
  const std::string x = record(c.lhs()), y = record(c.rhs());
  const auto app = [&](const std::string& f) {
    return "(" + f + " " + x + " " + y + ")";
  };
  const auto flag = [](const Constraint& k) {
    return k.kind() == Constraint::Kind::Name ? " true" : " false";
  };
  const auto strict_app = [&](const std::string& f) {
    return "(" + f + " " + x + " " + y + flag(c.lhs()) + flag(c.rhs()) + ")";
  };
  switch (c.op()) {
    case CBinOp::And:
      out.formula = true;
      return "(and " + truth(c.lhs()) + " " + truth(c.rhs()) + ")";
    case CBinOp::Or:
      out.formula = true;
      return "(or " + truth(c.lhs()) + " " + truth(c.rhs()) + ")";
    case CBinOp::FAnd:
    case CBinOp::FOr:
      need(a, TypeTerm::boolean(), "boolean");
      need(b, TypeTerm::boolean(), "boolean");
      return app(c.op() == CBinOp::FAnd ? "FAnd" : "FOr");
    case CBinOp::Eq:
      same("equal");
      if (a.type.is_set())
        return strict_app("equalSet" + suffix(a.type.element()));
      return strict_app("equal" + suffix(a.type));
    case CBinOp::In:
      if (!b.type.is_set() || !(b.type.element() == a.type))
        throw SmtError("ill-typed in: " + a.type.to_string() + " in " +
                       b.type.to_string());
      if (a.has_name && b.has_name)
        warnings_.push_back(
            "in with attribute names in both arguments: the membership "
            "quantifier is unbounded");
      return strict_app("in" + suffix(a.type));
    case CBinOp::Gt:
      same("greater-than");
      if (a.type.kind() != TypeTerm::Kind::Double &&
          a.type.kind() != TypeTerm::Kind::Date)
        throw SmtError("ill-typed greater-than operand " +
                       a.type.to_string());
      return strict_app("greater" + suffix(a.type));
    case CBinOp::Add:
    case CBinOp::Sub:
    case CBinOp::Mul:
    case CBinOp::Div: {
      need(a, TypeTerm::dbl(), "arithmetic");
      need(b, TypeTerm::dbl(), "arithmetic");
      out.type = TypeTerm::dbl();
      const char* f = c.op() == CBinOp::Add   ? "addReal"
                      : c.op() == CBinOp::Sub ? "subtractReal"
                      : c.op() == CBinOp::Mul ? "multiplyReal"
                                              : "divideReal";
      return strict_app(f);
    }
  }
  return "false";
}

void SmtContext::build(const Constraint& c) {
  Info out;
  switch (c.kind()) {
    case Constraint::Kind::Literal: {
      const Value& v = c.value();
      out.type = TypeTerm::of(v.type());
      out.term = "(mk-val " + term(v, out.type) + " " + kOk + ")";
      break;
    }
    case Constraint::Kind::Name: {
      auto it = ta_.find(c.attribute());
      if (it == ta_.end())
        throw SmtError("name " + c.attribute().to_string() +
                       " missing from the type assignment");
      out.type = it->second;
      out.has_name = true;
      out.term = name_symbol(c.attribute());
      break;
    }
    case Constraint::Kind::IsBot:
    case Constraint::Kind::IsErr:
    case Constraint::Kind::IsBool:
    case Constraint::Kind::Not: {
      const Info& a = info(c.operand());
      const Constraint& arg = c.operand();
      const bool is_name = arg.kind() == Constraint::Kind::Name;
      const bool boolean = a.type.kind() == TypeTerm::Kind::Bool;
      out.formula = true;
      out.has_name = a.has_name;
      if (c.kind() == Constraint::Kind::IsBot) {
        out.term = a.formula ? "false" : "(miss " + a.term + ")";
      } else if (c.kind() == Constraint::Kind::IsErr) {
        // A name always denotes a value, a set or ⊥; err on a name record
        // marks a value of unexpected type, which is not an error.
        out.term = a.formula || is_name ? "false" : "(err " + a.term + ")";
      } else if (c.kind() == Constraint::Kind::IsBool) {
        if (a.formula) {
          out.term = "true";
        } else if (boolean) {
          out.term = "(and (not (miss " + a.term + ")) (not (err " + a.term +
                     ")))";
        } else {
          out.term = "false";
        }
      } else {
        // Classical negation: true on false and on ⊥.
        if (a.formula) {
          out.term = "(not " + a.term + ")";
        } else if (boolean) {
          out.term = "(or (isFalse " + a.term + ") (miss " + a.term + "))";
        } else {
          out.term = "(miss " + a.term + ")";
        }
      }
      break;
    }
    case Constraint::Kind::FourNot: {
      const Info& a = info(c.operand());
      if (!(a.type == TypeTerm::boolean()))
        throw SmtError("ill-typed not operand " + a.type.to_string());
      out.has_name = a.has_name;
      out.term = "(FNot " + record(c.operand()) + ")";
      break;
    }
    case Constraint::Kind::Binary:
      out.term = binary(c, out);
      break;
  }
  info_[c.id()] = std::move(out);
}

std::string SmtContext::define(const Named& roots, const Named& labels,
                               const std::string& prefix) {
  std::vector<Constraint> all;
  for (const auto& [n, c] : roots) all.push_back(c);
  for (const auto& [n, c] : labels) all.push_back(c);
  keep_.insert(keep_.end(), all.begin(), all.end());

  std::unordered_map<const void*, int> uses;
  visit_postorder(all, [&](const Constraint& c) {
    switch (c.kind()) {
      case Constraint::Kind::Literal:
      case Constraint::Kind::Name: break;
      case Constraint::Kind::Binary:
        ++uses[c.lhs().id()];
        ++uses[c.rhs().id()];
        break;
      default: ++uses[c.operand().id()]; break;
    }
  });
  std::unordered_map<const void*, std::string> label_of;
  for (const auto& [n, c] : labels) label_of.emplace(c.id(), n);

  std::ostringstream o;
  const auto def = [&](const std::string& sym, const Info& i) {
    const std::string sort =
        i.formula ? "Bool" : "(TValue " + sort_of(i.type) + ")";
    o << "(define-fun " << sym << " () " << sort << "\n  " << i.term << ")\n";
  };
  visit_postorder(all, [&](const Constraint& c) {
    if (info_.count(c.id())) return;  // defined by an earlier call
    build(c);
    Info& i = info_.at(c.id());
    auto lab = label_of.find(c.id());
    std::string sym;
    if (lab != label_of.end()) {
      sym = lab->second;
    } else if (uses[c.id()] > 1 && c.kind() != Constraint::Kind::Literal &&
               c.kind() != Constraint::Kind::Name) {
      sym = prefix + "aux_" + std::to_string(aux_++);
    }
    if (sym.empty()) return;
    def(sym, i);
    i.term = sym;
  });
  // Labels whose node was already defined under another symbol.
  for (const auto& [n, c] : labels) {
    const Info& i = info(c);
    if (i.term != n) def(n, i);
  }
  for (const auto& [n, c] : roots)
    o << "(define-fun " << n << " () Bool\n  " << truth(c) << ")\n";
  return o.str();
}

std::string SmtContext::assert_value(const AttributeName& n,
                                     const ExtendedValue& v) const {
  auto it = ta_.find(n);
  if (it == ta_.end())
    throw SmtError("name " + n.to_string() + " missing from the type "
                   "assignment");
  const std::string sym = name_symbol(n);
  std::string t;
  try {
    t = term(v, it->second);
  } catch (const SmtError& e) {
    throw SmtError(std::string(e.what()) + " (attribute " + n.to_string() +
                   ")");
  }
  return "(assert (= (val " + sym + ") " + t + "))\n(assert (and (not (miss " +
         sym + ")) (not (err " + sym + "))))\n";
}

std::string SmtContext::assert_missing(const AttributeName& n) const {
  return "(assert (miss " + name_symbol(n) + "))\n";
}

PropertyQuery PropertyQuery::evaluate_to(SyntacticRequest r, Decision d) {
  PropertyQuery q;
  q.kind = Kind::EvaluateTo;
  q.request = std::move(r);
  q.decision = d;
  return q;
}

PropertyQuery PropertyQuery::may_evaluate_to(SyntacticRequest r, Decision d) {
  PropertyQuery q = evaluate_to(std::move(r), d);
  q.kind = Kind::MayEvaluateTo;
  return q;
}

PropertyQuery PropertyQuery::must_evaluate_to(SyntacticRequest r, Decision d) {
  PropertyQuery q = evaluate_to(std::move(r), d);
  q.kind = Kind::MustEvaluateTo;
  return q;
}

PropertyQuery PropertyQuery::complete() { return {}; }

PropertyQuery PropertyQuery::disjoint(Policy other, std::string name) {
  PropertyQuery q;
  q.kind = Kind::Disjoint;
  q.other = std::move(other);
  q.other_name = std::move(name);
  return q;
}

PropertyQuery PropertyQuery::cover(Policy other, std::string name) {
  PropertyQuery q = disjoint(std::move(other), std::move(name));
  q.kind = Kind::Cover;
  return q;
}

bool PropertyQuery::holds_on_sat() const {
  return kind == Kind::EvaluateTo || kind == Kind::MayEvaluateTo;
}

std::string PropertyQuery::kind_name() const {
  switch (kind) {
    case Kind::EvaluateTo: return "evaluate-to";
    case Kind::MayEvaluateTo: return "may-evaluate-to";
    case Kind::MustEvaluateTo: return "must-evaluate-to";
    case Kind::Complete: return "complete";
    case Kind::Disjoint: return "disjoint";
    case Kind::Cover: return "cover";
  }
  return "?";
}

std::string PropertyQuery::describe() const {
  std::string s = kind_name();
  switch (kind) {
    case Kind::EvaluateTo:
    case Kind::MayEvaluateTo:
    case Kind::MustEvaluateTo:
      s += " " + std::string(decision_name(decision));
      for (const auto& a : request)
        s += " (" + a.name.to_string() + ", " + a.value.to_string() + ")";
      break;
    case Kind::Disjoint:
    case Kind::Cover:
      s += " " + other_name;
      break;
    case Kind::Complete:
      break;
  }
  return s;
}

namespace {

SmtContext::Named decision_roots(const std::string& prefix,
                                 const ConstraintTuple& t) {
  return {{prefix + "permit", t.permit},
          {prefix + "deny", t.deny},
          {prefix + "notapp", t.not_app},
          {prefix + "indet", t.indet}};
}

SmtContext::Named target_labels(const std::string& prefix,
                                const LabelledTranslation& lt) {
  SmtContext::Named out;
  for (const auto& [label, c] : lt.targets)
    out.emplace_back(prefix + "target_" + label, c);
  return out;
}

TypeAssignment typed_or_throw(const Policy& p) {
  SolveResult r = welltyped(p);
  if (auto* u = std::get_if<Unsat>(&r)) throw SmtError(u->message);
  return std::get<TypeAssignment>(std::move(r));
}

std::string decision_suffix(Decision d) {
  switch (d) {
    case Decision::Permit: return "permit";
    case Decision::Deny: return "deny";
    case Decision::NotApp: return "notapp";
    case Decision::Indet: return "indet";
  }
  return "indet";
}

}  // namespace

EmittedScript emit_policy(const Policy& p) {
  const TypeAssignment ta = typed_or_throw(p);
  const LabelledTranslation lt = translate_policy_labelled(p);
  std::set<std::string> strings;
  strings_of(lt.tuple, strings);
  SmtContext ctx(ta, strings);
  std::string defs = ctx.define(decision_roots("cns_", lt.tuple),
                                target_labels("cns_", lt), "cns_");
  return {ctx.prelude() + defs, ctx.strings(), ctx.warnings()};
}

EmittedScript emit_query(const Policy& p, const PropertyQuery& q) {
  using K = PropertyQuery::Kind;
  const bool binary = q.kind == K::Disjoint || q.kind == K::Cover;
  if (binary && !q.other) throw SmtError("query needs a second policy");

  TypeAssignment ta;
  if (binary) {
    PolicySet both;
    both.policies = {p, *q.other};
    ta = typed_or_throw(both);
  } else {
    ta = typed_or_throw(p);
  }
  const LabelledTranslation lt = translate_policy_labelled(p);
  std::optional<LabelledTranslation> lt2;
  if (binary) lt2 = translate_policy_labelled(*q.other);

  std::set<std::string> strings;
  strings_of(lt.tuple, strings);
  if (lt2) strings_of(lt2->tuple, strings);
  const SemanticRequest req = build_request(q.request);
  for (const auto& [n, v] : req.bindings()) {
    if (v.is_value() && v.value().is_string()) strings.insert(v.value().as_string());
    if (v.is_set())
      for (const auto& e : v.set().elements())
        if (e.is_string()) strings.insert(e.as_string());
  }

  SmtContext ctx(ta, strings);
  std::string body = ctx.define(decision_roots("cns_", lt.tuple),
                                target_labels("cns_", lt), "cns_");
  if (lt2)
    body += ctx.define(decision_roots("cns_other_", lt2->tuple),
                       target_labels("cns_other_", *lt2), "cns_other_");

  std::string asserts;
  std::vector<std::string> warnings;
  if (!binary && q.kind != K::Complete) {
    for (const auto& [n, v] : req.bindings()) {
      if (!ta.count(n)) {
        warnings.push_back("request attribute " + n.to_string() +
                           " does not occur in the policy and is ignored");
        continue;
      }
      asserts += ctx.assert_value(n, v);
    }
    if (q.kind == K::EvaluateTo)
      for (const auto& n : names(p))
        if (!req.bindings().count(n)) asserts += ctx.assert_missing(n);
  }
  const std::string d = "cns_" + decision_suffix(q.decision);
  switch (q.kind) {
    case K::EvaluateTo:
    case K::MayEvaluateTo: asserts += "(assert " + d + ")\n"; break;
    case K::MustEvaluateTo: asserts += "(assert (not " + d + "))\n"; break;
    case K::Complete: asserts += "(assert cns_notapp)\n"; break;
    case K::Disjoint:
      asserts +=
          "(assert (or (and cns_permit cns_other_permit) (and cns_permit "
          "cns_other_deny) (and cns_deny cns_other_permit) (and cns_deny "
          "cns_other_deny)))\n";
      break;
    case K::Cover:
      asserts +=
          "(assert (or (and (not cns_permit) cns_other_permit) (and (not "
          "cns_deny) cns_other_deny)))\n";
      break;
  }
  for (const auto& w : ctx.warnings()) warnings.push_back(w);
  return {ctx.prelude() + body + asserts + "(check-sat)\n", ctx.strings(),
          warnings};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PropertyFileError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

std::vector<PropertyQuery> parse_properties(const std::string& text,
                                            const std::string& base_dir) {
  std::vector<PropertyQuery> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find("//"); c != std::string::npos) line.resize(c);
    line = trim(line);
    if (line.empty()) continue;
    const auto fail = [&](const std::string& msg) {
      return PropertyFileError("line " + std::to_string(lineno) + ": " + msg);
    };
    const auto sp = line.find_first_of(" \t");
    const std::string kw = line.substr(0, sp);
    const std::string rest =
        sp == std::string::npos ? std::string() : trim(line.substr(sp));
    if (kw == "complete") {
      if (!rest.empty()) throw fail("complete takes no arguments");
      out.push_back(PropertyQuery::complete());
    } else if (kw == "disjoint" || kw == "cover") {
      if (rest.empty()) throw fail(kw + " needs a policy file");
      const std::string path =
          !rest.empty() && rest[0] == '/' ? rest : base_dir + "/" + rest;
      auto doc = parse_document(read_file(path), path);
      if (!doc.ok()) throw fail(doc.error_text());
      Policy other = pdp_as_policy(document_pdp(*doc.value));
      if (auto* pol = std::get_if<Policy>(&*doc.value)) other = *pol;
      out.push_back(kw == "disjoint"
                        ? PropertyQuery::disjoint(std::move(other), stem(rest))
                        : PropertyQuery::cover(std::move(other), stem(rest)));
    } else if (kw == "evaluate-to" || kw == "may-evaluate-to" ||
               kw == "must-evaluate-to") {
      const auto sp2 = rest.find_first_of(" \t");
      const std::string dec = rest.substr(0, sp2);
      const auto d = decision_from_name(dec);
      if (!d) throw fail("unknown decision '" + dec + "'");
      const std::string req =
          sp2 == std::string::npos ? std::string() : rest.substr(sp2);
      SyntacticRequest r;
      if (!trim(req).empty()) {
        auto pr = parse_request(req, "line " + std::to_string(lineno));
        if (!pr.ok()) throw fail(pr.error_text());
        r = *pr.value;
      }
      if (kw == "evaluate-to") {
        out.push_back(PropertyQuery::evaluate_to(std::move(r), *d));
      } else if (kw == "may-evaluate-to") {
        out.push_back(PropertyQuery::may_evaluate_to(std::move(r), *d));
      } else {
        out.push_back(PropertyQuery::must_evaluate_to(std::move(r), *d));
      }
    } else {
      throw fail("unknown property '" + kw + "'");
    }
  }
  return out;
}

}  // namespace facpl
