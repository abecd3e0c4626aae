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

#include "facpl/translator.hpp"

namespace facpl {

namespace {

CBinOp cop(ExprOp op) {
  switch (op) {
    case ExprOp::And: return CBinOp::FAnd;
    case ExprOp::Or: return CBinOp::FOr;
    case ExprOp::Equal: return CBinOp::Eq;
    case ExprOp::In: return CBinOp::In;
    case ExprOp::GreaterThan: return CBinOp::Gt;
    case ExprOp::Add: return CBinOp::Add;
    case ExprOp::Subtract: return CBinOp::Sub;
    case ExprOp::Multiply: return CBinOp::Mul;
    case ExprOp::Divide: return CBinOp::Div;
  }
  return CBinOp::FAnd;
}

Constraint or3(Constraint a, Constraint b, Constraint c) {
  return c_or(c_or(std::move(a), std::move(b)), std::move(c));
}

}  // namespace

Constraint translate_expr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Name: return c_name(e.attribute());
    case Expr::Kind::Literal: return c_lit(e.value());
    case Expr::Kind::Not: return c_fnot(translate_expr(e.operand()));
    case Expr::Kind::Binary:
      return c_bin(cop(e.op()), translate_expr(e.lhs()),
                   translate_expr(e.rhs()));
  }
  return c_false();
}

Constraint translate_obls(const std::vector<Obligation>& os) {
  std::vector<Constraint> per_obligation;
  for (const auto& o : os) {
    std::vector<Constraint> parts;
    for (const auto& arg : o.args) {
      Constraint c = translate_expr(arg);
      parts.push_back(c_and(c_not(c_is_bot(c)), c_not(c_is_err(c))));
    }
    per_obligation.push_back(c_conj(parts));
  }
  return c_conj(per_obligation);
}

ConstraintTuple combine_tuple_pair(AlgId alg, const ConstraintTuple& A,
                                   const ConstraintTuple& B) {
  const Constraint &Ap = A.permit, &Ad = A.deny, &An = A.not_app,
                   &Ai = A.indet;
  const Constraint &Bp = B.permit, &Bd = B.deny, &Bn = B.not_app,
                   &Bi = B.indet;
  switch (alg) {
    case AlgId::POver:
      return {c_or(Ap, Bp),
              or3(c_and(Ad, Bd), c_and(Ad, Bn), c_and(An, Bd)),
              c_and(An, Bn),
              c_or(c_and(Ai, c_not(Bp)), c_and(c_not(Ap), Bi))};
    case AlgId::DOver:
      return {or3(c_and(Ap, Bp), c_and(Ap, Bn), c_and(An, Bp)),
              c_or(Ad, Bd),
              c_and(An, Bn),
              c_or(c_and(Ai, c_not(Bd)), c_and(c_not(Ad), Bi))};
    case AlgId::DUnlessP:
      return {c_or(Ap, Bp),
              c_and(c_and(c_and(c_not(Ap), c_not(Bp)), or3(Ad, An, Ai)),
                    or3(Bd, Bn, Bi)),
              c_false(), c_false()};
    case AlgId::PUnlessD:
      return {c_and(c_and(c_and(c_not(Ad), c_not(Bd)), or3(Ap, An, Ai)),
                    or3(Bp, Bn, Bi)),
              c_or(Ad, Bd), c_false(), c_false()};
    case AlgId::FirstApp:
      return {c_or(Ap, c_and(Bp, An)), c_or(Ad, c_and(Bd, An)),
              c_and(An, Bn), c_or(Ai, c_and(An, Bi))};
    case AlgId::OneApp:
      return {c_or(c_and(Ap, Bn), c_and(An, Bp)),
              c_or(c_and(Ad, Bn), c_and(An, Bd)), c_and(An, Bn),
              or3(Ai, Bi, c_and(c_or(Ap, Ad), c_or(Bp, Bd)))};
    case AlgId::WeakCon:
      // Permit/deny follow the combination matrix: a lone indet operand
      // yields indet, so it cannot also contribute to permit or deny.
      return {or3(c_and(Ap, Bp), c_and(Ap, Bn), c_and(An, Bp)),
              or3(c_and(Ad, Bd), c_and(Ad, Bn), c_and(An, Bd)),
              c_and(An, Bn),
              c_or(or3(c_and(Ap, Bd), c_and(Ad, Bp), Ai), Bi)};
    case AlgId::StrongCon:
      return {c_and(Ap, Bp), c_and(Ad, Bd), c_and(An, Bn),
              c_or(c_or(or3(Ai, Bi, c_and(An, c_not(Bn))),
                        c_and(c_not(An), Bn)),
                   c_or(c_and(Ap, Bd), c_and(Ad, Bp)))};
  }
  return A;
}

ConstraintTuple combine_tuple_single(AlgId alg, const ConstraintTuple& A) {
  if (alg == AlgId::PUnlessD)
    return {or3(A.permit, A.not_app, A.indet), A.deny, c_false(), c_false()};
  if (alg == AlgId::DUnlessP)
    return {A.permit, or3(A.deny, A.not_app, A.indet), c_false(), c_false()};
  return A;
}

ConstraintTuple combine_tuples(AlgId alg,
                               const std::vector<ConstraintTuple>& tuples) {
  if (tuples.size() == 1) return combine_tuple_single(alg, tuples[0]);
  ConstraintTuple acc = tuples.at(0);
  for (std::size_t i = 1; i < tuples.size(); ++i)
    acc = combine_tuple_pair(alg, acc, tuples[i]);
  return acc;
}

namespace {

class Translator {
 public:
  std::vector<std::pair<std::string, Constraint>> targets;

  ConstraintTuple policy(const Policy& p) {
    if (p.is_rule()) return rule(p.rule());
    return set(p.set());
  }

 private:
  Constraint target(const Expr& e, bool is_rule) {
    Constraint t = translate_expr(e);
    const std::string label =
        is_rule ? "Rule" + std::to_string(++rules_)
                : "PolicySet" + std::to_string(++sets_);
    targets.emplace_back(label, t);
    return t;
  }

  static Constraint undecided(const Constraint& t) {
    return c_not(c_or(c_is_bool(t), c_is_bot(t)));
  }

  ConstraintTuple rule(const Rule& r) {
    Constraint t = target(r.target, true);
    Constraint ob = translate_obls(r.obligations);
    Constraint effect = c_and(t, ob);
    ConstraintTuple out;
    out.permit = r.effect == Effect::Permit ? effect : c_false();
    out.deny = r.effect == Effect::Deny ? effect : c_false();
    out.not_app = c_not(t);
    out.indet = c_or(undecided(t), c_and(t, c_not(ob)));
    return out;
  }

  ConstraintTuple set(const PolicySet& s) {
    if (s.strategy == Strategy::Greedy) throw GreedyNotTranslatable();
    Constraint t = target(s.target, false);
    std::vector<ConstraintTuple> children;
    children.reserve(s.policies.size());
    for (const auto& c : s.policies) children.push_back(policy(c));
    ConstraintTuple A = combine_tuples(s.alg, children);
    Constraint obp = translate_obls(s.obl_permit);
    Constraint obd = translate_obls(s.obl_deny);
    Constraint tp = c_and(t, A.permit);
    Constraint td = c_and(t, A.deny);
    ConstraintTuple out;
    out.permit = c_and(tp, obp);
    out.deny = c_and(td, obd);
    out.not_app = c_or(c_not(t), c_and(t, A.not_app));
    out.indet = c_or(c_or(c_or(undecided(t), c_and(t, A.indet)),
                          c_and(tp, c_not(obp))),
                     c_and(td, c_not(obd)));
    return out;
  }

  int rules_ = 0;
  int sets_ = 0;
};

}  // namespace

ConstraintTuple translate_policy(const Policy& p) {
  Translator t;
  return t.policy(p);
}

LabelledTranslation translate_policy_labelled(const Policy& p) {
  Translator t;
  ConstraintTuple tuple = t.policy(p);
  return {std::move(tuple), std::move(t.targets)};
}

ConstraintTuple translate_pdp(const Pdp& pdp) {
  return translate_policy(pdp_as_policy(pdp));
}

}  // namespace facpl
