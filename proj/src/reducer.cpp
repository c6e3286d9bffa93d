#include "hott/reducer.hpp"

#include <vector>

namespace hott {

Term apply_solution(const Term& solution, std::span<const Term> args) {
  Term r = solution;
  std::size_t i = 0;
  while (i < args.size() && r.is(Tag::Lam)) r = instantiate1(r[1], args[i++]);
  for (; i < args.size(); ++i) r = mk::app(r, args[i]);
  return r;
}

namespace {

// Index of the child an eliminator inspects, or -1.
int scrutinee_of(Tag t) {
  switch (t) {
    case Tag::SumElim: return 3;
    case Tag::UnitElim: return 2;
    case Tag::NatElim: return 3;
    case Tag::J: return 4;
    case Tag::Transport: return 1;
    case Tag::ApD: return 1;
    case Tag::IntervalInd: return 4;
    case Tag::CircleInd: return 3;
    case Tag::SuspInd: return 4;
    case Tag::CoeqInd: return 3;
    case Tag::TruncInd: return 3;
    default: return -1;
  }
}

// ι-step of eliminator `t` given its scrutinee in whnf; nullopt when stuck.
std::optional<Term> iota(const Term& t, const Term& s) {
  switch (t.tag()) {
    case Tag::SumElim:
      if (s.is(Tag::Inl)) return mk::app(t[1], s[0]);
      if (s.is(Tag::Inr)) return mk::app(t[2], s[0]);
      break;
    case Tag::UnitElim:
      if (s.is(Tag::Star)) return t[1];
      break;
    case Tag::NatElim:
      if (s.is(Tag::Zero)) return t[1];
      if (s.is(Tag::Succ)) {
        Term rec = mk::nat_elim(t[0], t[1], t[2], s[0]);
        Term args[] = {s[0], rec};
        return instantiate(t[2], args);
      }
      break;
    case Tag::J:
      if (s.is(Tag::Refl)) return t[2];
      break;
    case Tag::Transport:
      if (s.is(Tag::Refl)) return t[2];
      break;
    case Tag::ApD:
      if (s.is(Tag::Refl)) {
        Term a = s[1];
        return mk::refl(instantiate1(t[2], a), mk::app(t[0], a));
      }
      break;
    case Tag::IntervalInd:
      if (s.is(Tag::IZero)) return t[1];
      if (s.is(Tag::IOne)) return t[2];
      break;
    case Tag::CircleInd:
      if (s.is(Tag::Base)) return t[1];
      break;
    case Tag::SuspInd:
      if (s.is(Tag::North)) return t[1];
      if (s.is(Tag::South)) return t[2];
      break;
    case Tag::CoeqInd:
      if (s.is(Tag::CoeqPoint)) return mk::app(t[1], s[1]);
      break;
    case Tag::TruncInd:
      if (s.is(Tag::Tr)) return mk::app(t[2], s[0]);
      break;
    default: break;
  }
  return std::nullopt;
}

}  // namespace

Term Reducer::whnf_core(const Term& t0) const {
  Term t = t0;
  for (;;) {
    switch (t.tag()) {
      case Tag::App: {
        std::vector<Term> args;
        Term h = spine(t, args);
        Term hw = whnf_core(h);
        if (hw.is(Tag::Lam)) {
          Term b = hw;
          std::size_t i = 0;
          while (i < args.size() && b.is(Tag::Lam)) b = instantiate1(b[1], args[i++]);
          t = mk::apps(b, std::span<const Term>(args).subspan(i));
          continue;
        }
        if (hw.same_node(h)) return t;
        t = mk::apps(hw, args);
        if (hw.is(Tag::App)) continue;
        return t;
      }
      case Tag::Meta: {
        const Term* sol = metas_ ? metas_->solution(t->index) : nullptr;
        if (!sol) return t;
        t = *sol;
        continue;
      }
      case Tag::Proj1:
      case Tag::Proj2: {
        Term p = whnf(t[0]);
        if (!p.is(Tag::Pair)) return t;
        t = p[t.is(Tag::Proj1) ? 0 : 1];
        continue;
      }
      default: {
        int si = scrutinee_of(t.tag());
        if (si < 0) return t;
        auto next = iota(t, whnf(t[si]));
        if (!next) return t;
        t = *next;
        continue;
      }
    }
  }
}

const Definition* Reducer::unfoldable_head(const Term& t) const {
  const Term* h = &t;
  while (h->is(Tag::App)) h = &(*h)[0];
  if (!h->is(Tag::Const)) return nullptr;
  const Definition* d = env_.find((*h)->name);
  return d && d->unfoldable() ? d : nullptr;
}

std::optional<Term> Reducer::unfold(const Term& t) const {
  const Definition* d = unfoldable_head(t);
  if (!d) return std::nullopt;
  std::vector<Term> args;
  Term h = spine(t, args);
  Term body = instantiate_levels(*d->body, h->levels);
  return mk::apps(body, args);
}

Term Reducer::whnf(const Term& t0) const {
  Term t = t0;
  for (;;) {
    t = whnf_core(t);
    auto u = unfold(t);
    if (!u) return t;
    t = *u;
  }
}

Term Reducer::normalize(const Term& t) const {
  Term n = whnf(t);
  if (n.arity() == 0) return n;
  std::vector<Term> kids;
  kids.reserve(n.arity());
  for (const Term& k : n->kids) kids.push_back(normalize(k));
  return rebuild(n, std::move(kids));
}

bool PureLevels::level_le(const Level& a, const Level& b) {
  return tit_ || g_.entails({a, Rel::Le, b});
}

bool PureLevels::level_eq(const Level& a, const Level& b) {
  return tit_ || a == b || (g_.entails({a, Rel::Le, b}) && g_.entails({b, Rel::Le, a}));
}

bool Converter::compare(const Term& a, const Term& b, bool sub) {
  if (syntactic_equal(a, b)) return true;
  Term x = r_.whnf_core(a);
  Term y = r_.whnf_core(b);
  if (auto f = hooks_.flex(x, y)) return *f;
  return lazy(std::move(x), std::move(y), sub);
}

bool Converter::levels_eq(const Term& a, const Term& b) {
  if (a->levels.size() != b->levels.size()) return false;
  for (std::size_t i = 0; i < a->levels.size(); ++i)
    if (!hooks_.level_eq(a->levels[i], b->levels[i])) return false;
  return true;
}

bool Converter::same_const_spine(const Term& a, const Term& b) {
  std::vector<Term> as, bs;
  Term ha = spine(a, as);
  Term hb = spine(b, bs);
  if (as.size() != bs.size() || !levels_eq(ha, hb)) return false;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!compare(as[i], bs[i], false)) return false;
  return true;
}

bool Converter::lazy(Term a, Term b, bool sub) {
  for (;;) {
    if (syntactic_equal(a, b)) return true;
    const Definition* da = r_.unfoldable_head(a);
    const Definition* db = r_.unfoldable_head(b);
    if (!da && !db) return structural(a, b, sub);
    if (da && da == db) {
      auto cp = hooks_.checkpoint();
      if (same_const_spine(a, b)) return true;
      hooks_.rollback(cp);
    }
    bool step_a = da && (!db || da->order >= db->order);
    bool step_b = db && (!da || db->order >= da->order);
    if (step_a) a = r_.whnf_core(*r_.unfold(a));
    if (step_b) b = r_.whnf_core(*r_.unfold(b));
    if (auto f = hooks_.flex(a, b)) return *f;
  }
}

bool Converter::structural(const Term& a, const Term& b, bool sub) {
  if (a.is(Tag::Lam) && b.is(Tag::Lam)) return compare(a[1], b[1], false);
  if (a.is(Tag::Lam)) return compare(a[1], mk::app(shift(b, 1), mk::var(0)), false);
  if (b.is(Tag::Lam)) return compare(mk::app(shift(a, 1), mk::var(0)), b[1], false);
  if (a.is(Tag::Pair) && b.is(Tag::Pair)) return compare(a[0], b[0], false) && compare(a[1], b[1], false);
  if (r_.sigma_eta()) {
    if (a.is(Tag::Pair)) return compare(a[0], mk::proj1(b), false) && compare(a[1], mk::proj2(b), false);
    if (b.is(Tag::Pair)) return compare(mk::proj1(a), b[0], false) && compare(mk::proj2(a), b[1], false);
  }
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Tag::Sort: return sub ? hooks_.level_le(a->level, b->level) : hooks_.level_eq(a->level, b->level);
    case Tag::Var:
    case Tag::Meta: return a->index == b->index;
    case Tag::Const: return a->name == b->name && levels_eq(a, b);
    case Tag::Pi: return compare(a[0], b[0], false) && compare(a[1], b[1], sub);
    case Tag::Sigma: return compare(a[0], b[0], sub) && compare(a[1], b[1], sub);
    default: {
      const std::uint8_t skip = info(a.tag()).annotations;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (skip & (1u << i)) continue;
        if (!compare(a[i], b[i], false)) return false;
      }
      return true;
    }
  }
}

bool conv(const Environment& env, const Term& a, const Term& b, const ConstraintGraph& g) {
  Reducer r(env);
  PureLevels h(g, env.options().type_in_type);
  return Converter(r, h).conv(a, b);
}

bool subtype(const Environment& env, const Term& a, const Term& b, const ConstraintGraph& g) {
  Reducer r(env);
  PureLevels h(g, env.options().type_in_type);
  return Converter(r, h).subtype(a, b);
}

Term whnf(const Environment& env, const Term& t) { return Reducer(env).whnf(t); }
Term normalize(const Environment& env, const Term& t) { return Reducer(env).normalize(t); }

}  // namespace hott
