#include "hott/checker.hpp"

#include <algorithm>

#include "hott/print.hpp"

namespace hott {

bool RecordingLevels::require(const Constraint& c) {
  if (tit_) return true;
  if (g_.entails(c)) return true;
  try {
    g_.add(c);
    return true;
  } catch (const UniverseInconsistency& e) {
    failure = e;
    return false;
  }
}

bool RecordingLevels::level_le(const Level& a, const Level& b) { return require({a, Rel::Le, b}); }

bool RecordingLevels::level_eq(const Level& a, const Level& b) { return a == b || require({a, Rel::Eq, b}); }

std::size_t RecordingLevels::checkpoint() {
  marks_.push_back(g_.checkpoint());
  return marks_.size() - 1;
}

void RecordingLevels::rollback(std::size_t mark) {
  g_.rollback(marks_[mark]);
  marks_.resize(mark);
}

namespace {

Level lmax(const Level& a, const Level& b) {
  if (a == b) return a;
  return from_normal(normalize(Level::max(a, b)));
}

std::vector<std::string> names_of(const Telescope& ctx) {
  std::vector<std::string> out;
  for (const auto& e : ctx.entries()) out.push_back(e.name);
  return out;
}

struct Scope {
  Telescope& ctx;
  int n = 0;
  Scope(Telescope& c) : ctx(c) {}
  void push(std::string name, Term ty) {
    ctx.push(std::move(name), std::move(ty));
    ++n;
  }
  ~Scope() {
    while (n-- > 0) ctx.pop();
  }
};

Term ap1(const Term& f, const Term& a) { return mk::app(f, a); }

// The family `fun x => P x` as a Transport-style binder body.
Term family_of(const Term& motive) { return mk::app(shift(motive, 1), mk::var(0)); }

}  // namespace

TypeChecker::TypeChecker(const Environment& env, ConstraintGraph& g, std::vector<std::string> level_names)
    : env_(env), g_(g), level_names_(std::move(level_names)), red_(env), hooks_(g, env.options().type_in_type) {}

std::string TypeChecker::show(const Telescope& ctx, const Term& t) const {
  return print_term(t, names_of(ctx), level_names_);
}

bool TypeChecker::conv(const Term& a, const Term& b) { return Converter(red_, hooks_).conv(a, b); }
bool TypeChecker::subtype(const Term& a, const Term& b) { return Converter(red_, hooks_).subtype(a, b); }

void TypeChecker::require_subtype(Telescope& ctx, const Term& got, const Term& expected, const Term& at) {
  hooks_.failure.reset();
  if (subtype(got, expected)) return;
  if (hooks_.failure) {
    HottError e(ErrorKind::UniverseInconsistency,
                "universe inconsistency: " + hooks_.failure->cycle_text(level_names_));
    for (const Constraint& c : hooks_.failure->cycle()) e.cycle.push_back(to_string(c, level_names_));
    e.expected = show(ctx, expected);
    e.got = show(ctx, got);
    throw e;
  }
  HottError e(ErrorKind::TypeMismatch, "type mismatch in " + show(ctx, at));
  e.expected = show(ctx, expected);
  e.got = show(ctx, got);
  throw e;
}

Term TypeChecker::expect_tag(Telescope& ctx, const Term& of, const Term& type, Tag tag, ErrorKind kind,
                             const char* what) {
  Term w = whnf(type);
  if (w.is(tag)) return w;
  HottError e(kind, std::string("expected ") + what + " for " + show(ctx, of));
  e.expected = what;
  e.got = show(ctx, type);
  throw e;
}

Term TypeChecker::expect_pi(Telescope& ctx, const Term& fn_term, const Term& type) {
  return expect_tag(ctx, fn_term, type, Tag::Pi, ErrorKind::NotAFunction, "a function type");
}

Level TypeChecker::infer_sort(Telescope& ctx, const Term& t) {
  Term s = infer(ctx, t);
  return expect_tag(ctx, t, s, Tag::Sort, ErrorKind::NotAType, "a universe")->level;
}

void TypeChecker::check_motive(Telescope& ctx, const Term& motive, const Term& domain) {
  Term mt = expect_pi(ctx, motive, infer(ctx, motive));
  hooks_.failure.reset();
  if (!conv(mt[0], domain)) {
    HottError e(ErrorKind::TypeMismatch, "motive " + show(ctx, motive) + " has the wrong domain");
    e.expected = show(ctx, domain);
    e.got = show(ctx, mt[0]);
    throw e;
  }
  Scope sc(ctx);
  sc.push(mt->name, mt[0]);
  Term cod = whnf(mt[1]);
  if (!cod.is(Tag::Sort)) {
    HottError e(ErrorKind::NotAType, "motive " + show(ctx, motive) + " does not return a type");
    throw e;
  }
}

Term TypeChecker::infer_const(const Term& t) {
  const Definition* d = env_.find(t->name);
  if (!d) throw HottError(ErrorKind::UnknownName, "unknown constant '" + t->name + "'");
  if (t->levels.size() != d->level_params.size())
    throw HottError(ErrorKind::IllFormed, "constant '" + t->name + "' expects " +
                                              std::to_string(d->level_params.size()) + " universe levels");
  if (!env_.options().type_in_type) {
    for (const Constraint& c : d->constraints) {
      Constraint ci = instantiate_params(c, t->levels);
      hooks_.failure.reset();
      if (!hooks_.require(ci)) {
        HottError e(ErrorKind::UniverseInconsistency, "universe inconsistency instantiating '" + t->name +
                                                          "': " + hooks_.failure->cycle_text(level_names_));
        for (const Constraint& c2 : hooks_.failure->cycle()) e.cycle.push_back(to_string(c2, level_names_));
        throw e;
      }
    }
  }
  return instantiate_levels(d->type, t->levels);
}

void TypeChecker::check(Telescope& ctx, const Term& t, const Term& expected) {
  if (t.is(Tag::Lam)) {
    Term w = whnf(expected);
    if (w.is(Tag::Pi)) {
      infer_sort(ctx, t[0]);
      hooks_.failure.reset();
      if (!conv(t[0], w[0])) {
        HottError e(ErrorKind::TypeMismatch, "binder type mismatch in " + show(ctx, t));
        e.expected = show(ctx, w[0]);
        e.got = show(ctx, t[0]);
        throw e;
      }
      Scope sc(ctx);
      sc.push(t->name, t[0]);
      check(ctx, t[1], w[1]);
      return;
    }
  }
  Term got = infer(ctx, t);
  require_subtype(ctx, got, expected, t);
}

Term TypeChecker::infer(Telescope& ctx, const Term& t) {
  switch (t.tag()) {
    case Tag::Var: {
      if (t->index >= ctx.size()) throw HottError(ErrorKind::UnboundVariable, "unbound variable #" + std::to_string(t->index));
      return ctx.type_of(t->index);
    }
    case Tag::Sort: return mk::sort(Level::succ(t->level));
    case Tag::Pi:
    case Tag::Sigma: {
      Level i = infer_sort(ctx, t[0]);
      Scope sc(ctx);
      sc.push(t->name, t[0]);
      Level j = infer_sort(ctx, t[1]);
      return mk::sort(lmax(i, j));
    }
    case Tag::Lam: {
      infer_sort(ctx, t[0]);
      Scope sc(ctx);
      sc.push(t->name, t[0]);
      Term body = infer(ctx, t[1]);
      return mk::pi(t->name, t[0], body, t->implicit);
    }
    case Tag::App: {
      Term ft = expect_pi(ctx, t[0], infer(ctx, t[0]));
      check(ctx, t[1], ft[0]);
      return instantiate1(ft[1], t[1]);
    }
    case Tag::Pair: {
      infer_sort(ctx, t[2]);
      Term s = expect_tag(ctx, t, t[2], Tag::Sigma, ErrorKind::NotASigma, "a Sigma type");
      check(ctx, t[0], s[0]);
      check(ctx, t[1], instantiate1(s[1], t[0]));
      return t[2];
    }
    case Tag::Proj1:
    case Tag::Proj2: {
      Term s = expect_tag(ctx, t[0], infer(ctx, t[0]), Tag::Sigma, ErrorKind::NotASigma, "a Sigma type");
      if (t.is(Tag::Proj1)) return s[0];
      return instantiate1(s[1], mk::proj1(t[0]));
    }
    case Tag::Sum: return mk::sort(lmax(infer_sort(ctx, t[0]), infer_sort(ctx, t[1])));
    case Tag::Inl:
    case Tag::Inr: {
      infer_sort(ctx, t[1]);
      Term s = expect_tag(ctx, t, t[1], Tag::Sum, ErrorKind::TypeMismatch, "a sum type");
      check(ctx, t[0], s[t.is(Tag::Inl) ? 0 : 1]);
      return t[1];
    }
    case Tag::SumElim: {
      Term st = infer(ctx, t[3]);
      Term s = expect_tag(ctx, t[3], st, Tag::Sum, ErrorKind::TypeMismatch, "a sum type");
      Term sum = mk::sum(s[0], s[1]);
      check_motive(ctx, t[0], sum);
      Term ssum = shift(sum, 1);
      Term lt = mk::pi("a", s[0], ap1(shift(t[0], 1), mk::inl(mk::var(0), ssum)));
      Term rt = mk::pi("b", s[1], ap1(shift(t[0], 1), mk::inr(mk::var(0), ssum)));
      check(ctx, t[1], lt);
      check(ctx, t[2], rt);
      return ap1(t[0], t[3]);
    }
    case Tag::Unit:
    case Tag::Empty:
    case Tag::Nat:
    case Tag::Interval:
    case Tag::Circle: return mk::sort(Level::zero());
    case Tag::Star: return mk::unit();
    case Tag::UnitElim: {
      check(ctx, t[2], mk::unit());
      check_motive(ctx, t[0], mk::unit());
      check(ctx, t[1], ap1(t[0], mk::star()));
      return ap1(t[0], t[2]);
    }
    case Tag::EmptyElim: {
      check(ctx, t[1], mk::empty());
      check_motive(ctx, t[0], mk::empty());
      return ap1(t[0], t[1]);
    }
    case Tag::Zero: return mk::nat();
    case Tag::Succ: {
      check(ctx, t[0], mk::nat());
      return mk::nat();
    }
    case Tag::NatElim: {
      check(ctx, t[3], mk::nat());
      check_motive(ctx, t[0], mk::nat());
      check(ctx, t[1], ap1(t[0], mk::zero()));
      Scope sc(ctx);
      sc.push("n", mk::nat());
      sc.push("ih", ap1(shift(t[0], 1), mk::var(0)));
      check(ctx, t[2], ap1(shift(t[0], 2), mk::succ(mk::var(1))));
      return ap1(t[0], t[3]);
    }
    case Tag::Id: {
      Level i = infer_sort(ctx, t[0]);
      check(ctx, t[1], t[0]);
      check(ctx, t[2], t[0]);
      if (on_id) on_id(ctx, t);
      return mk::sort(i);
    }
    case Tag::Refl: {
      infer_sort(ctx, t[0]);
      check(ctx, t[1], t[0]);
      return mk::id(t[0], t[1], t[1]);
    }
    case Tag::J: {
      const Term& base = t[0];
      Term a = infer(ctx, base);
      check(ctx, t[3], a);
      check(ctx, t[4], mk::id(a, base, t[3]));
      {
        Scope sc(ctx);
        sc.push("y", a);
        sc.push("p", mk::id(shift(a, 1), shift(base, 1), mk::var(0)));
        infer_sort(ctx, t[1]);
      }
      Term at_refl[] = {base, mk::refl(a, base)};
      check(ctx, t[2], instantiate(t[1], at_refl));
      Term at_end[] = {t[3], t[4]};
      return instantiate(t[1], at_end);
    }
    case Tag::Transport: {
      Term p = expect_tag(ctx, t[1], infer(ctx, t[1]), Tag::Id, ErrorKind::TypeMismatch, "a path");
      {
        Scope sc(ctx);
        sc.push("x", p[0]);
        infer_sort(ctx, t[0]);
      }
      check(ctx, t[2], instantiate1(t[0], p[1]));
      return instantiate1(t[0], p[2]);
    }
    case Tag::ApD: {
      Term p = expect_tag(ctx, t[1], infer(ctx, t[1]), Tag::Id, ErrorKind::TypeMismatch, "a path");
      {
        Scope sc(ctx);
        sc.push("x", p[0]);
        infer_sort(ctx, t[2]);
      }
      check(ctx, t[0], mk::pi("x", p[0], t[2]));
      return mk::id(instantiate1(t[2], p[2]), mk::transport(t[2], t[1], ap1(t[0], p[1])), ap1(t[0], p[2]));
    }
    case Tag::IZero:
    case Tag::IOne: return mk::interval();
    case Tag::Seg: return mk::id(mk::interval(), mk::izero(), mk::ione());
    case Tag::IntervalInd: {
      check(ctx, t[4], mk::interval());
      check_motive(ctx, t[0], mk::interval());
      check(ctx, t[1], ap1(t[0], mk::izero()));
      check(ctx, t[2], ap1(t[0], mk::ione()));
      check(ctx, t[3], mk::id(ap1(t[0], mk::ione()), mk::transport(family_of(t[0]), mk::seg(), t[1]), t[2]));
      return ap1(t[0], t[4]);
    }
    case Tag::Base: return mk::circle();
    case Tag::Loop: return mk::id(mk::circle(), mk::base(), mk::base());
    case Tag::CircleInd: {
      check(ctx, t[3], mk::circle());
      check_motive(ctx, t[0], mk::circle());
      Term pb = ap1(t[0], mk::base());
      check(ctx, t[1], pb);
      check(ctx, t[2], mk::id(pb, mk::transport(family_of(t[0]), mk::loop(), t[1]), t[1]));
      return ap1(t[0], t[3]);
    }
    case Tag::Susp:
    case Tag::Trunc: return mk::sort(infer_sort(ctx, t[0]));
    case Tag::North:
    case Tag::South: {
      infer_sort(ctx, t[0]);
      return mk::susp(t[0]);
    }
    case Tag::Merid: {
      Term a = infer(ctx, t[0]);
      return mk::id(mk::susp(a), mk::north(a), mk::south(a));
    }
    case Tag::SuspInd: {
      Term x = expect_tag(ctx, t[4], infer(ctx, t[4]), Tag::Susp, ErrorKind::TypeMismatch, "a suspension");
      Term a = x[0];
      check_motive(ctx, t[0], x);
      check(ctx, t[1], ap1(t[0], mk::north(a)));
      check(ctx, t[2], ap1(t[0], mk::south(a)));
      Term p1 = shift(t[0], 1);
      Term a1 = shift(a, 1);
      Term cell = mk::pi("a", a,
                         mk::id(ap1(p1, mk::south(a1)),
                                mk::transport(family_of(p1), mk::merid(mk::var(0)), shift(t[1], 1)), shift(t[2], 1)));
      check(ctx, t[3], cell);
      return ap1(t[0], t[4]);
    }
    case Tag::Coeq: {
      Term ft = expect_pi(ctx, t[0], infer(ctx, t[0]));
      if (has_free_var(ft[1], 0))
        throw HottError(ErrorKind::TypeMismatch, "coequalizer maps must be non-dependent");
      Term cod = shift(ft[1], -1);
      check(ctx, t[1], mk::pi("b", ft[0], ft[1]));
      return mk::sort(lmax(infer_sort(ctx, ft[0]), infer_sort(ctx, cod)));
    }
    case Tag::CoeqPoint:
    case Tag::CoeqGlue: {
      infer_sort(ctx, t[0]);
      Term c = expect_tag(ctx, t, t[0], Tag::Coeq, ErrorKind::TypeMismatch, "a coequalizer");
      Term ft = expect_pi(ctx, c[0], infer(ctx, c[0]));
      if (t.is(Tag::CoeqPoint)) {
        check(ctx, t[1], shift(ft[1], -1));
        return t[0];
      }
      check(ctx, t[1], ft[0]);
      return mk::id(t[0], mk::coeq_point(t[0], ap1(c[0], t[1])), mk::coeq_point(t[0], ap1(c[1], t[1])));
    }
    case Tag::CoeqInd: {
      Term xt = infer(ctx, t[3]);
      Term c = expect_tag(ctx, t[3], xt, Tag::Coeq, ErrorKind::TypeMismatch, "a coequalizer");
      Term ft = expect_pi(ctx, c[0], infer(ctx, c[0]));
      Term b = ft[0];
      Term a = shift(ft[1], -1);
      check_motive(ctx, t[0], c);
      Term c1 = shift(c, 1);
      Term p1 = shift(t[0], 1);
      check(ctx, t[1], mk::pi("a", a, ap1(p1, mk::coeq_point(c1, mk::var(0)))));
      Term pt = shift(t[1], 1);
      Term fb = ap1(shift(c[0], 1), mk::var(0));
      Term gb = ap1(shift(c[1], 1), mk::var(0));
      Term cell = mk::pi("b", b,
                         mk::id(ap1(p1, mk::coeq_point(c1, gb)),
                                mk::transport(family_of(p1), mk::coeq_glue(c1, mk::var(0)), ap1(pt, fb)), ap1(pt, gb)));
      check(ctx, t[2], cell);
      return ap1(t[0], t[3]);
    }
    case Tag::Tr: return mk::trunc(infer(ctx, t[0]));
    case Tag::TrPath: {
      Term xt = infer(ctx, t[0]);
      expect_tag(ctx, t[0], xt, Tag::Trunc, ErrorKind::TypeMismatch, "a truncation");
      check(ctx, t[1], xt);
      return mk::id(xt, t[0], t[1]);
    }
    case Tag::TruncInd: {
      Term wt = infer(ctx, t[3]);
      Term w = expect_tag(ctx, t[3], wt, Tag::Trunc, ErrorKind::TypeMismatch, "a truncation");
      check_motive(ctx, t[0], w);
      // hp : forall w, forall (x y : P w), x = y
      Term pw1 = ap1(shift(t[0], 1), mk::var(0));
      Term pw2 = ap1(shift(t[0], 2), mk::var(1));
      Term pw3 = ap1(shift(t[0], 3), mk::var(2));
      Term hp = mk::pi("w", w, mk::pi("x", pw1, mk::pi("y", pw2, mk::id(pw3, mk::var(1), mk::var(0)))));
      check(ctx, t[1], hp);
      check(ctx, t[2], mk::pi("a", w[0], ap1(shift(t[0], 1), mk::tr(mk::var(0)))));
      return ap1(t[0], t[3]);
    }
    case Tag::Const: return infer_const(t);
    case Tag::Meta: throw HottError(ErrorKind::UnsolvedHole, "unsolved hole ?m" + std::to_string(t->index));
  }
  throw HottError(ErrorKind::IllFormed, "ill-formed term");
}

}  // namespace hott
