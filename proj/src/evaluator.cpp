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

#include "facpl/evaluator.hpp"

#include <chrono>

#include "facpl/operators.hpp"

namespace facpl {

namespace {

const AttributeName kSystemTime{"system", "time"};

}  // namespace

ContextProvider time_provider(Date now) {
  return [now](const AttributeName& n) -> std::optional<ExtendedValue> {
    if (n == kSystemTime) return ExtendedValue(Value(now));
    return std::nullopt;
  };
}

ContextProvider wall_clock_provider() {
  return [](const AttributeName& n) -> std::optional<ExtendedValue> {
    if (!(n == kSystemTime)) return std::nullopt;
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();
    return ExtendedValue(Value(Date{secs}));
  };
}

SemanticRequest::SemanticRequest(std::map<AttributeName, ExtendedValue> b,
                                 ContextProvider provider)
    : bindings_(std::move(b)), provider_(std::move(provider)) {
  if (provider_) memo_ = std::make_unique<Memo>();
}

SemanticRequest::SemanticRequest(const SemanticRequest& other)
    : bindings_(other.bindings_), provider_(other.provider_) {
  if (other.memo_) {
    memo_ = std::make_unique<Memo>();
    std::lock_guard lock(other.memo_->mu);
    memo_->values = other.memo_->values;
  }
}

SemanticRequest& SemanticRequest::operator=(const SemanticRequest& other) {
  if (this != &other) {
    SemanticRequest copy(other);
    *this = std::move(copy);
  }
  return *this;
}

ExtendedValue SemanticRequest::lookup(const AttributeName& n) const {
  auto it = bindings_.find(n);
  if (it != bindings_.end()) return it->second;
  if (!provider_) return ExtendedValue::bottom();
  std::lock_guard lock(memo_->mu);
  auto m = memo_->values.find(n);
  if (m != memo_->values.end()) return m->second;
  auto v = provider_(n);
  ExtendedValue out = v ? *v : ExtendedValue::bottom();
  memo_->values.emplace(n, out);
  return out;
}

void SemanticRequest::bind(const AttributeName& n, ExtendedValue v) {
  bindings_[n] = std::move(v);
}

SemanticRequest build_request(const SyntacticRequest& sr,
                              ContextProvider provider) {
  std::map<AttributeName, ExtendedValue> b;
  for (const auto& [name, value] : sr) {
    auto it = b.find(name);
    if (it == b.end()) {
      b.emplace(name, ExtendedValue(value));
    } else if (it->second.is_set()) {
      it->second = it->second.set().with(value);
    } else {
      it->second = ValueSet({it->second.value(), value});
    }
  }
  return SemanticRequest(std::move(b), std::move(provider));
}

ExtendedValue eval_expr(const Expr& e, const SemanticRequest& r) {
  switch (e.kind()) {
    case Expr::Kind::Name: return r.lookup(e.attribute());
    case Expr::Kind::Literal: return e.value();
    case Expr::Kind::Not: return ops::four_not(eval_expr(e.operand(), r));
    case Expr::Kind::Binary:
      return ops::apply(e.op(), eval_expr(e.lhs(), r), eval_expr(e.rhs(), r));
  }
  return ExtendedValue::error();
}

std::optional<std::vector<ArgValue>> eval_expr_seq(const std::vector<Expr>& es,
                                                   const SemanticRequest& r) {
  std::vector<ArgValue> out;
  out.reserve(es.size());
  for (const auto& e : es) {
    ExtendedValue v = eval_expr(e, r);
    if (v.is_value()) {
      out.emplace_back(v.value());
    } else if (v.is_set()) {
      out.emplace_back(v.set());
    } else {
      return std::nullopt;
    }
  }
  return out;
}

std::optional<std::vector<InstantiatedObligation>> instantiate_obligations(
    const std::vector<Obligation>& os, const SemanticRequest& r) {
  std::vector<InstantiatedObligation> out;
  out.reserve(os.size());
  for (const auto& o : os) {
    auto args = eval_expr_seq(o.args, r);
    if (!args) return std::nullopt;
    out.push_back({o.type, o.action, std::move(*args)});
  }
  return out;
}

namespace {

Decision effect_decision(Effect e) {
  return e == Effect::Permit ? Decision::Permit : Decision::Deny;
}

std::vector<InstantiatedObligation> concat(
    std::vector<InstantiatedObligation> a,
    const std::vector<InstantiatedObligation>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

PdpResponse eval_rule(const Rule& rule, const SemanticRequest& r) {
  ExtendedValue t = eval_expr(rule.target, r);
  if (t.is_true()) {
    auto io = instantiate_obligations(rule.obligations, r);
    if (io) return {effect_decision(rule.effect), std::move(*io)};
    return PdpResponse::indet();
  }
  if (t.is_false() || t.is_bottom()) return PdpResponse::not_app();
  return PdpResponse::indet();
}

PdpResponse eval_set(const PolicySet& s, const SemanticRequest& r) {
  ExtendedValue t = eval_expr(s.target, r);
  if (t.is_false() || t.is_bottom()) return PdpResponse::not_app();
  if (!t.is_true()) return PdpResponse::indet();
  PdpResponse res = combine(s.alg, s.strategy, s.policies, r);
  if (res.decision == Decision::Permit || res.decision == Decision::Deny) {
    const auto& os =
        res.decision == Decision::Permit ? s.obl_permit : s.obl_deny;
    auto io = instantiate_obligations(os, r);
    if (!io) return PdpResponse::indet();
    return {res.decision, concat(std::move(res.obligations), *io)};
  }
  return res;
}

// Decision-level rules of the binary combining operators; the obligations
// of the responses whose decision matches the result are concatenated.
PdpResponse pick(Decision d, const PdpResponse& a, const PdpResponse& b,
                 bool take_a, bool take_b) {
  PdpResponse out{d, {}};
  if (take_a) out.obligations = a.obligations;
  if (take_b)
    out.obligations.insert(out.obligations.end(), b.obligations.begin(),
                           b.obligations.end());
  return out;
}

PdpResponse overrides(Decision strong, const PdpResponse& a,
                      const PdpResponse& b) {
  const Decision weak =
      strong == Decision::Permit ? Decision::Deny : Decision::Permit;
  const Decision da = a.decision, db = b.decision;
  if (da == strong || db == strong)
    return pick(strong, a, b, da == strong, db == strong);
  if (da == Decision::Indet || db == Decision::Indet)
    return PdpResponse::indet();
  if (da == weak || db == weak) return pick(weak, a, b, da == weak, db == weak);
  return PdpResponse::not_app();
}

PdpResponse unless(Decision strong, const PdpResponse& a,
                   const PdpResponse& b) {
  const Decision fallback =
      strong == Decision::Permit ? Decision::Deny : Decision::Permit;
  const Decision da = a.decision, db = b.decision;
  if (da == strong || db == strong)
    return pick(strong, a, b, da == strong, db == strong);
  return pick(fallback, a, b, da == fallback, db == fallback);
}

PdpResponse consensus(bool strong, const PdpResponse& a, const PdpResponse& b) {
  const Decision da = a.decision, db = b.decision;
  if (da == Decision::Indet || db == Decision::Indet)
    return PdpResponse::indet();
  if (da == Decision::NotApp && db == Decision::NotApp)
    return PdpResponse::not_app();
  if (da == Decision::NotApp || db == Decision::NotApp) {
    if (strong) return PdpResponse::indet();
    return da == Decision::NotApp ? b : a;
  }
  if (da == db) return pick(da, a, b, true, true);
  return PdpResponse::indet();
}

}  // namespace

PdpResponse eval_policy(const Policy& p, const SemanticRequest& r) {
  if (p.is_rule()) return eval_rule(p.rule(), r);
  return eval_set(p.set(), r);
}

PdpResponse combine_binary(AlgId alg, const PdpResponse& a,
                           const PdpResponse& b) {
  switch (alg) {
    case AlgId::POver: return overrides(Decision::Permit, a, b);
    case AlgId::DOver: return overrides(Decision::Deny, a, b);
    case AlgId::DUnlessP: return unless(Decision::Permit, a, b);
    case AlgId::PUnlessD: return unless(Decision::Deny, a, b);
    case AlgId::FirstApp: return a.decision != Decision::NotApp ? a : b;
    case AlgId::OneApp:
      if (a.decision == Decision::NotApp) return b;
      if (b.decision == Decision::NotApp) return a;
      return PdpResponse::indet();
    case AlgId::WeakCon: return consensus(false, a, b);
    case AlgId::StrongCon: return consensus(true, a, b);
  }
  return PdpResponse::indet();
}

bool is_final(AlgId alg, const PdpResponse& res) {
  switch (alg) {
    case AlgId::POver: return res.decision == Decision::Permit;
    case AlgId::DOver: return res.decision == Decision::Deny;
    case AlgId::DUnlessP: return res.decision == Decision::Permit;
    case AlgId::PUnlessD: return res.decision == Decision::Deny;
    case AlgId::FirstApp: return res.decision != Decision::NotApp;
    case AlgId::OneApp:
    case AlgId::WeakCon:
    case AlgId::StrongCon: return res.decision == Decision::Indet;
  }
  return false;
}

PdpResponse combine_single(AlgId alg, PdpResponse res) {
  const bool inapplicable =
      res.decision == Decision::NotApp || res.decision == Decision::Indet;
  if (inapplicable && alg == AlgId::PUnlessD) return {Decision::Permit, {}};
  if (inapplicable && alg == AlgId::DUnlessP) return {Decision::Deny, {}};
  return res;
}

PdpResponse combine_responses(
    AlgId alg, Strategy strategy, std::size_t count,
    const std::function<PdpResponse(std::size_t)>& response_at) {
  if (count == 0) return PdpResponse::indet();
  if (count == 1) return combine_single(alg, response_at(0));
  PdpResponse acc = response_at(0);
  for (std::size_t i = 1; i < count; ++i) {
    if (strategy == Strategy::Greedy && is_final(alg, acc)) break;
    acc = combine_binary(alg, acc, response_at(i));
  }
  return acc;
}

PdpResponse combine(AlgId alg, Strategy strategy,
                    const std::vector<Policy>& ps, const SemanticRequest& r) {
  return combine_responses(alg, strategy, ps.size(), [&](std::size_t i) {
    return eval_policy(ps[i], r);
  });
}

PdpResponse eval_pdp(const Pdp& pdp, const SemanticRequest& r) {
  if (const auto* single = std::get_if<Policy>(&pdp.form))
    return eval_policy(*single, r);
  const auto& c = std::get<Pdp::Combined>(pdp.form);
  return combine(c.alg, c.strategy, c.policies, r);
}

}  // namespace facpl
