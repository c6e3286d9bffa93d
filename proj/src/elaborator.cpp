#include "hott/elaborator.hpp"

#include <algorithm>
#include <map>

#include "hott/print.hpp"

namespace hott {

// ---------------------------------------------------------------- store

std::uint32_t ElabProblem::fresh(const Telescope& ctx, Term type, SourceSpan span) {
  metas_.push_back({ctx, std::move(type), std::nullopt, std::move(span)});
  return static_cast<std::uint32_t>(metas_.size() - 1);
}

Term ElabProblem::applied(std::uint32_t id) const {
  const auto n = static_cast<std::uint32_t>(metas_.at(id).ctx.size());
  std::vector<Term> args;
  args.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) args.push_back(mk::var(n - 1 - k));
  return mk::apps(mk::meta(id), args);
}

const Term* ElabProblem::solution(std::uint32_t id) const {
  if (id >= metas_.size() || !metas_[id].solution) return nullptr;
  return &*metas_[id].solution;
}

void ElabProblem::assign(std::uint32_t id, Term solution) {
  metas_.at(id).solution = std::move(solution);
  trail_.push_back(id);
}

void ElabProblem::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    metas_[trail_.back()].solution.reset();
    trail_.pop_back();
  }
}

Term ElabProblem::zonk(const Term& t) const {
  if (!t->has_meta) return t;
  if (t.is(Tag::App) || t.is(Tag::Meta)) {
    std::vector<Term> args;
    Term h = spine(t, args);
    if (h.is(Tag::Meta)) {
      for (Term& a : args) a = zonk(a);
      if (const Term* s = solution(h->index)) return zonk(apply_solution(*s, args));
      return mk::apps(h, args);
    }
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (const Term& k : t->kids) kids.push_back(zonk(k));
  return rebuild(t, std::move(kids));
}

// ---------------------------------------------------------------- unification

namespace {

std::optional<std::uint32_t> flex_head(const MetaLookup& p, const Term& t, std::vector<Term>& args) {
  Term h = spine(t, args);
  if (h.is(Tag::Meta) && !p.solution(h->index)) return h->index;
  return std::nullopt;
}

bool mentions_meta(const Term& t, std::uint32_t id) {
  if (!t->has_meta) return false;
  if (t.is(Tag::Meta)) return t->index == id;
  for (const Term& k : t->kids)
    if (mentions_meta(k, id)) return true;
  return false;
}

std::optional<Term> rename(const Term& t, const std::map<std::uint32_t, std::uint32_t>& pos, std::uint32_t m,
                           std::uint32_t depth) {
  if (t->loose <= depth) return t;
  if (t.is(Tag::Var)) {
    auto it = pos.find(t->index - depth);
    if (it == pos.end()) return std::nullopt;
    return mk::var(m - 1 - it->second + depth);
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto k = rename(t[i], pos, m, depth + binders_of(t.tag(), i));
    if (!k) return std::nullopt;
    kids.push_back(std::move(*k));
  }
  return rebuild(t, std::move(kids));
}

}  // namespace

bool UnifyHooks::solve(std::uint32_t id, const std::vector<Term>& args, const Term& rhs) {
  const MetaInfo& mi = p_.info(id);
  const std::size_t n = mi.ctx.size();
  if (args.size() < n) return false;
  std::map<std::uint32_t, std::uint32_t> pos;
  for (std::size_t i = 0; i < args.size(); ++i) {
    Term a = r_.whnf_core(args[i]);
    if (!a.is(Tag::Var) || pos.count(a->index)) return false;
    pos[a->index] = static_cast<std::uint32_t>(i);
  }
  Term r = p_.zonk(rhs);
  if (mentions_meta(r, id)) {
    occurs_failure = true;
    return false;
  }
  auto body = rename(r, pos, static_cast<std::uint32_t>(args.size()), 0);
  if (!body) return false;
  std::vector<std::pair<std::string, Term>> doms;
  for (std::size_t k = 0; k < n; ++k) doms.emplace_back(mi.ctx.at(k).name, mi.ctx.at(k).type);
  Term ty = mi.type;
  for (std::size_t i = n; i < args.size(); ++i) {
    Term w = r_.whnf(ty);
    if (!w.is(Tag::Pi)) return false;
    doms.emplace_back(w->name, w[0]);
    ty = w[1];
  }
  Term sol = *body;
  for (std::size_t k = doms.size(); k-- > 0;) sol = mk::lam(doms[k].first, doms[k].second, sol);
  p_.assign(id, sol);
  return true;
}

std::optional<bool> UnifyHooks::flex(const Term& a, const Term& b) {
  std::vector<Term> as, bs;
  auto fa = flex_head(p_, a, as);
  auto fb = flex_head(p_, b, bs);
  if (!fa && !fb) return std::nullopt;
  if (fa && fb && *fa == *fb) {
    if (as.size() != bs.size()) return false;
    Converter c(r_, *this);
    for (std::size_t i = 0; i < as.size(); ++i)
      if (!c.conv(as[i], bs[i])) return false;
    return true;
  }
  if (fa && fb) {
    if (*fa > *fb) return solve(*fa, as, b) || solve(*fb, bs, a);
    return solve(*fb, bs, a) || solve(*fa, as, b);
  }
  if (fa) return solve(*fa, as, b);
  return solve(*fb, bs, a);
}

bool unify(ElabProblem& p, const Environment& env, const Term& a, const Term& b) {
  Reducer r(env, &p);
  UnifyHooks h(p, r);
  return Converter(r, h).conv(a, b);
}

// ---------------------------------------------------------------- elaborator

namespace {

Level lmax(const Level& a, const Level& b) {
  if (a == b) return a;
  return from_normal(normalize(Level::max(a, b)));
}

Term bapp(const Term& f, const Term& a) {
  if (f.is(Tag::Lam)) return instantiate1(f[1], a);
  return mk::app(f, a);
}

std::vector<std::string> ctx_names(const Telescope& ctx) {
  std::vector<std::string> out;
  for (const auto& e : ctx.entries()) out.push_back(e.name);
  return out;
}

struct Scope {
  Telescope& ctx;
  int n = 0;
  explicit Scope(Telescope& c) : ctx(c) {}
  void push(std::string name, Term ty) {
    ctx.push(std::move(name), std::move(ty));
    ++n;
  }
  ~Scope() {
    while (n-- > 0) ctx.pop();
  }
};

HottError err(ErrorKind k, std::string msg, const SourceSpan& at) { return HottError(k, std::move(msg), at); }

// Eliminators whose last argument is the scrutinee, with the scrutinee type
// when it does not depend on the other arguments.
bool scrutinee_last(const std::string& kw, Term* domain) {
  static const std::map<std::string, int> fixed = {{"natrec", 0}, {"unitrec", 1}, {"emptyrec", 2}, {"Iind", 3},
                                                   {"S1ind", 4}};
  static const char* const generic[] = {"sumrec", "suspind", "coeqind", "truncind"};
  auto it = fixed.find(kw);
  if (it != fixed.end()) {
    switch (it->second) {
      case 0: *domain = mk::nat(); break;
      case 1: *domain = mk::unit(); break;
      case 2: *domain = mk::empty(); break;
      case 3: *domain = mk::interval(); break;
      default: *domain = mk::circle(); break;
    }
    return true;
  }
  for (const char* g : generic)
    if (kw == g) {
      *domain = Term();
      return true;
    }
  return false;
}

}  // namespace

Elaborator::Elaborator(const Environment& env, std::vector<std::string> level_params)
    : env_(env), level_params_(std::move(level_params)), red_(env, &problem_) {}

std::string Elaborator::show(const Telescope& ctx, const Term& t) const {
  return print_term(problem_.zonk(t), ctx_names(ctx), level_params_);
}

bool Elaborator::is_flex(const Term& t) const {
  std::vector<Term> args;
  return flex_head(problem_, t, args).has_value();
}

bool Elaborator::is_class_type(const Term& t) const {
  std::vector<Term> args;
  Term h = spine(problem_.zonk(t), args);
  if (!h.is(Tag::Const)) return false;
  const Definition* d = env_.find(h->name);
  return d && d->is_class;
}

void Elaborator::unify_or_throw(const Telescope& ctx, const Term& got, const Term& expected, const SourceSpan& at) {
  UnifyHooks h(problem_, red_);
  if (Converter(red_, h).conv(got, expected)) return;
  HottError e(h.occurs_failure ? ErrorKind::OccursCheck : ErrorKind::UnificationFailure,
              h.occurs_failure ? "occurs check failed" : "type mismatch", at);
  e.expected = show(ctx, expected);
  e.got = show(ctx, got);
  throw e;
}

Level Elaborator::elab_level(const SLevel& l, const SourceSpan& at) const {
  switch (l.kind) {
    case SLevel::Kind::Num: return Level::nat(l.num);
    case SLevel::Kind::Name: {
      auto it = std::find(level_params_.begin(), level_params_.end(), l.name);
      if (it == level_params_.end()) throw err(ErrorKind::UnknownName, "unknown universe level '" + l.name + "'", at);
      return Level::param(static_cast<std::uint32_t>(it - level_params_.begin()));
    }
    case SLevel::Kind::Succ: return Level::succ(elab_level(l.kids[0], at));
    case SLevel::Kind::Max: return Level::max(elab_level(l.kids[0], at), elab_level(l.kids[1], at));
  }
  return Level::zero();
}

Term Elaborator::new_type_meta(const Telescope& ctx, const SourceSpan& at) {
  return problem_.fresh_applied(ctx, mk::sort(Level::fresh_meta()), at);
}

Term Elaborator::expect_shape(const Telescope& ctx, const Term& type, Tag tag, const char* what,
                              const SourceSpan& at) {
  Term w = whnf(type);
  if (w.is(tag)) return w;
  HottError e(ErrorKind::TypeMismatch, std::string("expected ") + what, at);
  e.expected = what;
  e.got = show(ctx, type);
  throw e;
}

Term Elaborator::binder_body(const Term& fn, int k) const {
  Term b = problem_.zonk(fn);
  int stripped = 0;
  while (stripped < k && b.is(Tag::Lam)) {
    b = b[1];
    ++stripped;
  }
  const int rest = k - stripped;
  if (rest == 0) return b;
  b = shift(b, rest, static_cast<std::uint32_t>(0));
  for (int i = rest - 1; i >= 0; --i) b = mk::app(b, mk::var(static_cast<std::uint32_t>(i)));
  return b;
}

Term Elaborator::kernel_type(const Telescope& ctx, const Term& t, const SourceSpan& at) {
  Term z = problem_.zonk(t);
  std::vector<TelescopeEntry> entries;
  for (const auto& e : ctx.entries()) entries.push_back({e.name, problem_.zonk(e.type)});
  Telescope c(entries);
  ConstraintGraph scratch;
  try {
    TypeChecker tc(env_, scratch, level_params_);
    return tc.infer(c, z);
  } catch (const HottError& e) {
    throw err(ErrorKind::TypeMismatch, std::string("cannot determine the type here: ") + e.what(), at);
  }
}

Term Elaborator::implicit_arg(Telescope& ctx, const Term& domain, const SourceSpan& at) {
  Term m = problem_.fresh_applied(ctx, domain, at);
  if (is_class_type(domain)) {
    std::vector<Term> args;
    problem_.instance_goals.push_back({spine(m, args)->index, at});
  }
  return m;
}

Term Elaborator::insert_implicits(Telescope& ctx, Term fn, Term& type, const SourceSpan& at) {
  for (;;) {
    Term w = whnf(type);
    if (!w.is(Tag::Pi) || !w->implicit) return fn;
    Term m = implicit_arg(ctx, w[0], at);
    fn = mk::app(fn, m);
    type = instantiate1(w[1], m);
  }
}

Term Elaborator::elab_arg(Telescope& ctx, const Arg& a, const Term& expected) {
  if (a.kernel) {
    unify_or_throw(ctx, *a.ktype, expected, SourceSpan{});
    return *a.kernel;
  }
  return check(ctx, *a.surface, expected);
}

Term Elaborator::infer_arg(Telescope& ctx, const Arg& a, Term& type) {
  if (a.kernel) {
    type = *a.ktype;
    return *a.kernel;
  }
  return infer(ctx, *a.surface, type);
}

Term Elaborator::apply_args(Telescope& ctx, Term fn, Term& type, const std::vector<Arg>& args, std::size_t from,
                            const SourceSpan& at) {
  for (std::size_t i = from; i < args.size(); ++i) {
    const Arg& a = args[i];
    const SourceSpan& aspan = a.surface ? a.surface->span : at;
    for (;;) {
      Term w = whnf(type);
      if (w.is(Tag::Pi)) {
        if (w->implicit && !a.implicit) {
          Term m = implicit_arg(ctx, w[0], aspan);
          fn = mk::app(fn, m);
          type = instantiate1(w[1], m);
          continue;
        }
        if (!w->implicit && a.implicit) throw err(ErrorKind::IllFormed, "unexpected implicit argument", aspan);
        Term v = elab_arg(ctx, a, w[0]);
        fn = mk::app(fn, v);
        type = instantiate1(w[1], v);
        break;
      }
      if (is_flex(w)) {
        Term dom = new_type_meta(ctx, aspan);
        Term cod;
        {
          Scope sc(ctx);
          sc.push("x", dom);
          cod = new_type_meta(ctx, aspan);
        }
        unify_or_throw(ctx, w, mk::pi("x", dom, cod), aspan);
        continue;
      }
      HottError e(ErrorKind::NotAFunction, "too many arguments: not a function", aspan);
      e.expected = "a function type";
      e.got = show(ctx, type);
      throw e;
    }
  }
  return fn;
}

Term Elaborator::infer_head(Telescope& ctx, const SExpr& e, Term& type) {
  if (e.kind != SKind::Var) return infer(ctx, e, type);
  const auto n = static_cast<std::uint32_t>(ctx.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    if (ctx.name_of(i) == e.name) {
      if (!e.levels.empty()) throw err(ErrorKind::IllFormed, "local '" + e.name + "' takes no universe levels", e.span);
      type = ctx.type_of(i);
      return mk::var(i);
    }
  }
  const Definition* d = env_.find(e.name);
  if (!d) throw err(ErrorKind::UnboundVariable, "unbound identifier '" + e.name + "'", e.span);
  std::vector<Level> levels;
  if (!e.levels.empty()) {
    if (e.levels.size() != d->level_params.size())
      throw err(ErrorKind::IllFormed,
                "'" + d->name + "' expects " + std::to_string(d->level_params.size()) + " universe levels", e.span);
    for (const SLevel& l : e.levels) levels.push_back(elab_level(l, e.span));
  } else {
    for (std::size_t k = 0; k < d->level_params.size(); ++k) levels.push_back(Level::fresh_meta());
  }
  type = instantiate_levels(d->type, levels);
  return mk::constant(d->name, std::move(levels));
}

Term Elaborator::elab_type(Telescope& ctx, const SExpr& e, Level* level) {
  Term ty;
  Term t = infer(ctx, e, ty);
  Term w = whnf(ty);
  if (w.is(Tag::Sort)) {
    if (level) *level = w->level;
    return t;
  }
  if (is_flex(w)) {
    Level l = Level::fresh_meta();
    unify_or_throw(ctx, w, mk::sort(l), e.span);
    if (level) *level = l;
    return t;
  }
  HottError er(ErrorKind::NotAType, "expected a type", e.span);
  er.expected = "a type";
  er.got = show(ctx, ty);
  throw er;
}

Term Elaborator::elab_binders(Telescope& ctx, const SExpr& e, std::size_t from, Tag tag, Level& level) {
  if (from == e.binders.size()) return elab_type(ctx, *e.kids[0], &level);
  const SBinder& b = e.binders[from];
  Level l1 = Level::fresh_meta();
  Term dom = b.type ? elab_type(ctx, *b.type, &l1) : new_type_meta(ctx, b.span);
  Level l2;
  Term body;
  {
    Scope sc(ctx);
    sc.push(b.name, dom);
    body = elab_binders(ctx, e, from + 1, tag, l2);
  }
  level = lmax(l1, l2);
  return tag == Tag::Pi ? mk::pi(b.name, dom, body, b.implicit) : mk::sigma(b.name, dom, body);
}

Term Elaborator::infer_lambda(Telescope& ctx, const SExpr& e, std::size_t from, Term& type) {
  if (from == e.binders.size()) {
    Term body = infer(ctx, *e.kids[0], type);
    return body;
  }
  const SBinder& b = e.binders[from];
  Term dom = b.type ? elab_type(ctx, *b.type) : new_type_meta(ctx, b.span);
  Term body, bt;
  {
    Scope sc(ctx);
    sc.push(b.name, dom);
    body = infer_lambda(ctx, e, from + 1, bt);
  }
  type = mk::pi(b.name, dom, bt, b.implicit);
  return mk::lam(b.name, dom, body, b.implicit);
}

Term Elaborator::check_lambda(Telescope& ctx, const SExpr& e, std::size_t from, const Term& expected) {
  if (from == e.binders.size()) return check(ctx, *e.kids[0], expected);
  const SBinder& b = e.binders[from];
  Term w = whnf(expected);
  if (!w.is(Tag::Pi)) {
    Term ty;
    Term t = infer_lambda(ctx, e, from, ty);
    unify_or_throw(ctx, ty, expected, e.span);
    return t;
  }
  if (w->implicit && !b.implicit) {
    Term body;
    {
      Scope sc(ctx);
      sc.push(w->name, w[0]);
      body = check_lambda(ctx, e, from, w[1]);
    }
    return mk::lam(w->name, w[0], body, true);
  }
  Term dom = w[0];
  if (b.type) {
    dom = elab_type(ctx, *b.type);
    unify_or_throw(ctx, dom, w[0], b.span);
  }
  Term body;
  {
    Scope sc(ctx);
    sc.push(b.name, dom);
    body = check_lambda(ctx, e, from + 1, w[1]);
  }
  return mk::lam(b.name, dom, body, b.implicit);
}

namespace {

// Flatten an application spine into its head and arguments.
const SExpr* surface_spine(const SExpr& e, std::vector<std::pair<const SExpr*, bool>>& args) {
  const SExpr* cur = &e;
  while (cur->kind == SKind::App) {
    args.emplace_back(cur->kids[1].get(), cur->implicit_arg);
    cur = cur->kids[0].get();
  }
  std::reverse(args.begin(), args.end());
  return cur;
}

}  // namespace

Term Elaborator::infer(Telescope& ctx, const SExpr& e, Term& type) {
  switch (e.kind) {
    case SKind::Var:
    case SKind::Keyword:
    case SKind::App: {
      std::vector<std::pair<const SExpr*, bool>> sargs;
      const SExpr* head = surface_spine(e, sargs);
      std::vector<Arg> args;
      for (auto& [s, imp] : sargs) args.push_back({s, imp, std::nullopt, std::nullopt});
      if (head->kind == SKind::Keyword) return keyword(ctx, head->name, args, nullptr, type, e.span);
      Term fn = infer_head(ctx, *head, type);
      fn = apply_args(ctx, fn, type, args, 0, e.span);
      return insert_implicits(ctx, fn, type, e.span);
    }
    case SKind::Hole: {
      Term ty = new_type_meta(ctx, e.span);
      type = ty;
      return problem_.fresh_applied(ctx, ty, e.span);
    }
    case SKind::Type: {
      Level l = e.level ? elab_level(*e.level, e.span) : Level::fresh_meta();
      if (!e.level) open_levels_.insert(l.id());
      type = mk::sort(Level::succ(l));
      return mk::sort(l);
    }
    case SKind::Num: type = mk::nat(); return mk::numeral(e.num);
    case SKind::Pi:
    case SKind::Sigma: {
      Level l;
      Term t = elab_binders(ctx, e, 0, e.kind == SKind::Pi ? Tag::Pi : Tag::Sigma, l);
      type = mk::sort(l);
      return t;
    }
    case SKind::Lam: return infer_lambda(ctx, e, 0, type);
    case SKind::Arrow:
    case SKind::Prod:
    case SKind::Sum: {
      Level l1, l2;
      Term a = elab_type(ctx, *e.kids[0], &l1);
      Term b = elab_type(ctx, *e.kids[1], &l2);
      type = mk::sort(lmax(l1, l2));
      if (e.kind == SKind::Sum) return mk::sum(a, b);
      if (e.kind == SKind::Arrow) return mk::pi("_", a, shift(b, 1));
      return mk::sigma("_", a, shift(b, 1));
    }
    case SKind::Pair: {
      Term ta, tb;
      Term a = infer(ctx, *e.kids[0], ta);
      Term b = infer(ctx, *e.kids[1], tb);
      type = mk::sigma("_", ta, shift(tb, 1));
      return mk::pair(a, b, type);
    }
    case SKind::Proj: {
      Term tt;
      Term p = infer(ctx, *e.kids[0], tt);
      Term s = expect_shape(ctx, tt, Tag::Sigma, "a Sigma type", e.span);
      if (e.num == 1) {
        type = s[0];
        return mk::proj1(p);
      }
      type = instantiate1(s[1], mk::proj1(p));
      return mk::proj2(p);
    }
    case SKind::Id: {
      Term a, b, ty;
      Level l = Level::fresh_meta();
      if (e.kids.size() == 3) {
        ty = elab_type(ctx, *e.kids[2], &l);
        a = check(ctx, *e.kids[0], ty);
      } else {
        a = infer(ctx, *e.kids[0], ty);
      }
      b = check(ctx, *e.kids[1], ty);
      type = mk::sort(l);
      return mk::id(ty, a, b);
    }
    case SKind::Ann: {
      type = elab_type(ctx, *e.kids[1]);
      return check(ctx, *e.kids[0], type);
    }
  }
  throw err(ErrorKind::IllFormed, "cannot elaborate expression", e.span);
}

Term Elaborator::check(Telescope& ctx, const SExpr& e, const Term& expected) {
  switch (e.kind) {
    case SKind::Lam: return check_lambda(ctx, e, 0, expected);
    case SKind::Hole: return problem_.fresh_applied(ctx, expected, e.span);
    case SKind::Pair: {
      Term w = whnf(expected);
      if (w.is(Tag::Sigma)) {
        Term a = check(ctx, *e.kids[0], w[0]);
        Term b = check(ctx, *e.kids[1], instantiate1(w[1], a));
        return mk::pair(a, b, w);
      }
      break;
    }
    case SKind::Keyword:
    case SKind::App: {
      std::vector<std::pair<const SExpr*, bool>> sargs;
      const SExpr* head = surface_spine(e, sargs);
      if (head->kind != SKind::Keyword) break;
      std::vector<Arg> args;
      for (auto& [s, imp] : sargs) args.push_back({s, imp, std::nullopt, std::nullopt});
      Term ty;
      Term t = keyword(ctx, head->name, args, &expected, ty, e.span);
      unify_or_throw(ctx, ty, expected, e.span);
      resolve_instances(false);
      return t;
    }
    default: break;
  }
  Term ty;
  Term t = infer(ctx, e, ty);
  unify_or_throw(ctx, ty, expected, e.span);
  resolve_instances(false);
  return t;
}

Term Elaborator::motive(Telescope& ctx, const Arg& a, const Term& domain) {
  return elab_arg(ctx, a, mk::pi("x", domain, mk::sort(Level::fresh_meta())));
}

Term Elaborator::keyword(Telescope& ctx, const std::string& kw, const std::vector<Arg>& args, const Term* expected,
                         Term& type, const SourceSpan& at) {
  const KeywordInfo* ki = find_keyword(kw);
  if (!ki) throw err(ErrorKind::IllFormed, "unknown keyword '" + kw + "'", at);
  const auto arity = static_cast<std::size_t>(ki->arity);
  for (std::size_t i = 0; i < std::min(arity, args.size()); ++i)
    if (args[i].implicit) throw err(ErrorKind::IllFormed, "'" + kw + "' takes no implicit arguments", at);

  Term domain;
  if (args.size() + 1 == arity && scrutinee_last(kw, &domain)) {
    // Missing scrutinee: abstract over it.
    std::vector<Arg> full;
    if (!domain && expected) {
      Term w = whnf(*expected);
      if (w.is(Tag::Pi) && !is_flex(problem_.zonk(w[0]))) domain = w[0];
    }
    if (!domain) {
      Term pt;
      Term p = infer_arg(ctx, args[0], pt);
      domain = expect_shape(ctx, pt, Tag::Pi, "a motive", at)[0];
      full.push_back({nullptr, false, shift(p, 1), shift(pt, 1)});
    } else {
      full.push_back(args[0]);
    }
    for (std::size_t i = 1; i < args.size(); ++i) full.push_back(args[i]);
    Term body, bt;
    {
      Scope sc(ctx);
      sc.push("_", domain);
      full.push_back({nullptr, false, mk::var(0), shift(domain, 1)});
      body = keyword_core(ctx, kw, full, nullptr, bt, at);
    }
    type = mk::pi("_", domain, bt);
    return mk::lam("_", domain, body);
  }
  if (args.size() < arity)
    throw err(ErrorKind::IllFormed, "'" + kw + "' expects " + std::to_string(arity) + " arguments", at);
  std::vector<Arg> own(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(arity));
  Term t = keyword_core(ctx, kw, own, args.size() == arity ? expected : nullptr, type, at);
  if (args.size() == arity) return t;
  t = apply_args(ctx, t, type, args, arity, at);
  return insert_implicits(ctx, t, type, at);
}

Term Elaborator::keyword_core(Telescope& ctx, const std::string& kw, const std::vector<Arg>& a, const Term* expected,
                              Term& type, const SourceSpan& at) {
  auto expected_shape = [&](Tag tag) -> std::optional<Term> {
    if (!expected) return std::nullopt;
    Term w = whnf(*expected);
    if (w.is(tag)) return w;
    return std::nullopt;
  };
  if (kw == "Nat" || kw == "Unit" || kw == "Empty" || kw == "I" || kw == "S1") {
    type = mk::sort(Level::zero());
    if (kw == "Nat") return mk::nat();
    if (kw == "Unit") return mk::unit();
    if (kw == "Empty") return mk::empty();
    if (kw == "I") return mk::interval();
    return mk::circle();
  }
  if (kw == "zero") {
    type = mk::nat();
    return mk::zero();
  }
  if (kw == "tt") {
    type = mk::unit();
    return mk::star();
  }
  if (kw == "i0" || kw == "i1") {
    type = mk::interval();
    return kw == "i0" ? mk::izero() : mk::ione();
  }
  if (kw == "seg") {
    type = mk::id(mk::interval(), mk::izero(), mk::ione());
    return mk::seg();
  }
  if (kw == "base") {
    type = mk::circle();
    return mk::base();
  }
  if (kw == "loop") {
    type = mk::id(mk::circle(), mk::base(), mk::base());
    return mk::loop();
  }
  if (kw == "succ") {
    type = mk::nat();
    return mk::succ(elab_arg(ctx, a[0], mk::nat()));
  }
  if (kw == "inl" || kw == "inr") {
    const bool left = kw == "inl";
    if (auto s = expected_shape(Tag::Sum)) {
      Term v = elab_arg(ctx, a[0], (*s)[left ? 0 : 1]);
      type = *s;
      return left ? mk::inl(v, *s) : mk::inr(v, *s);
    }
    Term vt;
    Term v = infer_arg(ctx, a[0], vt);
    Term other = new_type_meta(ctx, at);
    type = left ? mk::sum(vt, other) : mk::sum(other, vt);
    return left ? mk::inl(v, type) : mk::inr(v, type);
  }
  if (kw == "refl") {
    if (auto w = expected_shape(Tag::Id)) {
      unify_or_throw(ctx, (*w)[1], (*w)[2], at);
      type = *w;
      return mk::refl((*w)[0], (*w)[1]);
    }
    Term ty = new_type_meta(ctx, at);
    Term x = problem_.fresh_applied(ctx, ty, at);
    type = mk::id(ty, x, x);
    return mk::refl(ty, x);
  }
  if (kw == "natrec") {
    Term p = motive(ctx, a[0], mk::nat());
    Term n = elab_arg(ctx, a[3], mk::nat());
    Term z = elab_arg(ctx, a[1], bapp(p, mk::zero()));
    Term st = mk::pi("n", mk::nat(),
                     mk::pi("ih", bapp(shift(p, 1), mk::var(0)), bapp(shift(p, 2), mk::succ(mk::var(1)))));
    Term s = elab_arg(ctx, a[2], st);
    type = bapp(p, n);
    return mk::nat_elim(p, z, binder_body(s, 2), n);
  }
  if (kw == "sumrec") {
    Term sty;
    Term s = infer_arg(ctx, a[3], sty);
    Term sum = expect_shape(ctx, sty, Tag::Sum, "a sum type", at);
    Term p = motive(ctx, a[0], sum);
    Term s1 = shift(sum, 1);
    Term l = elab_arg(ctx, a[1], mk::pi("a", sum[0], bapp(shift(p, 1), mk::inl(mk::var(0), s1))));
    Term r = elab_arg(ctx, a[2], mk::pi("b", sum[1], bapp(shift(p, 1), mk::inr(mk::var(0), s1))));
    type = bapp(p, s);
    return mk::sum_elim(p, l, r, s);
  }
  if (kw == "unitrec") {
    Term s = elab_arg(ctx, a[2], mk::unit());
    Term p = motive(ctx, a[0], mk::unit());
    Term c = elab_arg(ctx, a[1], bapp(p, mk::star()));
    type = bapp(p, s);
    return mk::unit_elim(p, c, s);
  }
  if (kw == "emptyrec") {
    Term s = elab_arg(ctx, a[1], mk::empty());
    Term p = motive(ctx, a[0], mk::empty());
    type = bapp(p, s);
    return mk::empty_elim(p, s);
  }
  if (kw == "J") {
    Term pty;
    Term path = infer_arg(ctx, a[2], pty);
    Term id = expect_shape(ctx, pty, Tag::Id, "a path", at);
    Term A = id[0], x = id[1], y = id[2];
    Term ct = mk::pi("y", A, mk::pi("p", mk::id(shift(A, 1), shift(x, 1), mk::var(0)), mk::sort(Level::fresh_meta())));
    Term c = binder_body(elab_arg(ctx, a[0], ct), 2);
    Term at_refl[] = {x, mk::refl(A, x)};
    Term d = elab_arg(ctx, a[1], instantiate(c, at_refl));
    Term at_end[] = {y, path};
    type = instantiate(c, at_end);
    return mk::j(x, c, d, y, path);
  }
  if (kw == "transport") {
    // The family usually fixes the path's type; fall back to the path when
    // its domain is still unknown.
    Term fty;
    Term fn = infer_arg(ctx, a[0], fty);
    Term pi = expect_shape(ctx, fty, Tag::Pi, "a type family", at);
    {
      Scope sc(ctx);
      sc.push(pi->name, pi[0]);
      unify_or_throw(ctx, pi[1], mk::sort(Level::fresh_meta()), at);
    }
    Term path, x, y;
    if (is_flex(problem_.zonk(pi[0]))) {
      Term pty;
      path = infer_arg(ctx, a[1], pty);
      Term id = expect_shape(ctx, pty, Tag::Id, "a path", at);
      unify_or_throw(ctx, id[0], pi[0], at);
      x = id[1];
      y = id[2];
    } else {
      x = problem_.fresh_applied(ctx, pi[0], at);
      y = problem_.fresh_applied(ctx, pi[0], at);
      path = elab_arg(ctx, a[1], mk::id(pi[0], x, y));
    }
    Term fam = binder_body(fn, 1);
    Term u = elab_arg(ctx, a[2], instantiate1(fam, x));
    type = instantiate1(fam, y);
    return mk::transport(fam, path, u);
  }
  if (kw == "apD") {
    Term fty;
    Term f = infer_arg(ctx, a[0], fty);
    Term pi = expect_shape(ctx, fty, Tag::Pi, "a dependent function", at);
    Term x = problem_.fresh_applied(ctx, pi[0], at);
    Term y = problem_.fresh_applied(ctx, pi[0], at);
    Term path = elab_arg(ctx, a[1], mk::id(pi[0], x, y));
    Term fam = pi[1];
    type = mk::id(instantiate1(fam, y), mk::transport(fam, path, mk::app(f, x)), mk::app(f, y));
    return mk::apd(f, path, fam);
  }
  if (kw == "Iind") {
    Term x = elab_arg(ctx, a[4], mk::interval());
    Term p = motive(ctx, a[0], mk::interval());
    Term pa = elab_arg(ctx, a[1], bapp(p, mk::izero()));
    Term pb = elab_arg(ctx, a[2], bapp(p, mk::ione()));
    Term cell = elab_arg(ctx, a[3], mk::id(bapp(p, mk::ione()), mk::transport(binder_body(p, 1), mk::seg(), pa), pb));
    type = bapp(p, x);
    return mk::interval_ind(p, pa, pb, cell, x);
  }
  if (kw == "S1ind") {
    Term x = elab_arg(ctx, a[3], mk::circle());
    Term p = motive(ctx, a[0], mk::circle());
    Term b = elab_arg(ctx, a[1], bapp(p, mk::base()));
    Term cell =
        elab_arg(ctx, a[2], mk::id(bapp(p, mk::base()), mk::transport(binder_body(p, 1), mk::loop(), b), b));
    type = bapp(p, x);
    return mk::circle_ind(p, b, cell, x);
  }
  if (kw == "susp" || kw == "trunc") {
    Level l;
    Term A = elab_type(ctx, *a[0].surface, &l);
    type = mk::sort(l);
    return kw == "susp" ? mk::susp(A) : mk::trunc(A);
  }
  if (kw == "north" || kw == "south") {
    Term A;
    if (auto s = expected_shape(Tag::Susp)) A = (*s)[0];
    else A = new_type_meta(ctx, at);
    type = mk::susp(A);
    return kw == "north" ? mk::north(A) : mk::south(A);
  }
  if (kw == "merid") {
    Term A;
    Term x = infer_arg(ctx, a[0], A);
    type = mk::id(mk::susp(A), mk::north(A), mk::south(A));
    return mk::merid(x);
  }
  if (kw == "suspind") {
    Term xt;
    Term x = infer_arg(ctx, a[4], xt);
    Term S = expect_shape(ctx, xt, Tag::Susp, "a suspension", at);
    Term A = S[0];
    Term p = motive(ctx, a[0], S);
    Term n = elab_arg(ctx, a[1], bapp(p, mk::north(A)));
    Term s = elab_arg(ctx, a[2], bapp(p, mk::south(A)));
    Term p1 = shift(p, 1);
    Term A1 = shift(A, 1);
    Term cell_t = mk::pi("a", A,
                         mk::id(bapp(p1, mk::south(A1)),
                                mk::transport(binder_body(p1, 1), mk::merid(mk::var(0)), shift(n, 1)), shift(s, 1)));
    Term m = elab_arg(ctx, a[3], cell_t);
    type = bapp(p, x);
    return mk::susp_ind(p, n, s, m, x);
  }
  if (kw == "coeq") {
    Term fty;
    Term f = infer_arg(ctx, a[0], fty);
    Term pi = expect_shape(ctx, fty, Tag::Pi, "a function", at);
    Term g = elab_arg(ctx, a[1], pi);
    type = mk::sort(Level::fresh_meta());
    return mk::coeq(f, g);
  }
  if (kw == "cp" || kw == "cglue") {
    Term C;
    if (kw == "cp") {
      if (auto s = expected_shape(Tag::Coeq)) C = *s;
    } else if (auto s = expected_shape(Tag::Id)) {
      Term w = whnf((*s)[0]);
      if (w.is(Tag::Coeq)) C = w;
    }
    if (!C) throw err(ErrorKind::TypeMismatch, "'" + kw + "' needs a known coequalizer type", at);
    Term fty = expect_shape(ctx, kernel_type(ctx, C[0], at), Tag::Pi, "a function", at);
    if (kw == "cp") {
      Term v = elab_arg(ctx, a[0], shift(fty[1], -1));
      type = C;
      return mk::coeq_point(C, v);
    }
    Term b = elab_arg(ctx, a[0], fty[0]);
    type = mk::id(C, mk::coeq_point(C, mk::app(C[0], b)), mk::coeq_point(C, mk::app(C[1], b)));
    return mk::coeq_glue(C, b);
  }
  if (kw == "coeqind") {
    Term xt;
    Term x = infer_arg(ctx, a[3], xt);
    Term C = expect_shape(ctx, xt, Tag::Coeq, "a coequalizer", at);
    Term fty = expect_shape(ctx, kernel_type(ctx, C[0], at), Tag::Pi, "a function", at);
    Term B = fty[0];
    Term A = shift(fty[1], -1);
    Term p = motive(ctx, a[0], C);
    Term C1 = shift(C, 1);
    Term p1 = shift(p, 1);
    Term c = elab_arg(ctx, a[1], mk::pi("a", A, bapp(p1, mk::coeq_point(C1, mk::var(0)))));
    Term c1 = shift(c, 1);
    Term fb = mk::app(shift(C[0], 1), mk::var(0));
    Term gb = mk::app(shift(C[1], 1), mk::var(0));
    Term cell_t = mk::pi("b", B,
                         mk::id(bapp(p1, mk::coeq_point(C1, gb)),
                                mk::transport(binder_body(p1, 1), mk::coeq_glue(C1, mk::var(0)), mk::app(c1, fb)),
                                mk::app(c1, gb)));
    Term g = elab_arg(ctx, a[2], cell_t);
    type = bapp(p, x);
    return mk::coeq_ind(p, c, g, x);
  }
  if (kw == "tr") {
    if (auto s = expected_shape(Tag::Trunc)) {
      Term v = elab_arg(ctx, a[0], (*s)[0]);
      type = *s;
      return mk::tr(v);
    }
    Term vt;
    Term v = infer_arg(ctx, a[0], vt);
    type = mk::trunc(vt);
    return mk::tr(v);
  }
  if (kw == "trpath") {
    Term xt;
    Term x = infer_arg(ctx, a[0], xt);
    Term T = expect_shape(ctx, xt, Tag::Trunc, "a truncation", at);
    Term y = elab_arg(ctx, a[1], T);
    type = mk::id(T, x, y);
    return mk::tr_path(x, y);
  }
  if (kw == "truncind") {
    Term wt;
    Term w = infer_arg(ctx, a[3], wt);
    Term T = expect_shape(ctx, wt, Tag::Trunc, "a truncation", at);
    Term p = motive(ctx, a[0], T);
    Term pw1 = bapp(shift(p, 1), mk::var(0));
    Term pw2 = bapp(shift(p, 2), mk::var(1));
    Term pw3 = bapp(shift(p, 3), mk::var(2));
    Term hp_t = mk::pi("w", T, mk::pi("x", pw1, mk::pi("y", pw2, mk::id(pw3, mk::var(1), mk::var(0)))));
    Term hp = elab_arg(ctx, a[1], hp_t);
    Term f = elab_arg(ctx, a[2], mk::pi("a", T[0], bapp(shift(p, 1), mk::tr(mk::var(0)))));
    type = bapp(p, w);
    return mk::trunc_ind(p, hp, f, w);
  }
  throw err(ErrorKind::IllFormed, "unsupported keyword '" + kw + "'", at);
}

// ---------------------------------------------------------------- instances

Term Elaborator::resolve_instance(const Telescope& ctx, const Term& goal, std::uint32_t depth, const SourceSpan& at) {
  Term g = problem_.zonk(goal);
  std::vector<Term> gargs;
  Term head = spine(g, gargs);
  const Definition* cls = head.is(Tag::Const) ? env_.find(head->name) : nullptr;
  if (!cls || !cls->is_class) {
    Term w = whnf(g);
    if (w.is(Tag::Pi)) {
      Telescope inner = ctx;
      inner.push(w->name, w[0]);
      Term body = resolve_instance(inner, w[1], depth, at);
      return mk::lam(w->name, w[0], body, w->implicit);
    }
    HottError e(ErrorKind::InstanceNotFound, "no instance for goal " + show(ctx, g), at);
    throw e;
  }
  if (depth == 0)
    throw HottError(ErrorKind::InstanceDepthExceeded,
                    "instance search depth exceeded while resolving '" + cls->name + "' (cyclic instances?)", at);

  // Local hypotheses first, innermost outwards.
  for (std::uint32_t i = 0; i < ctx.size(); ++i) {
    Term ht = ctx.type_of(i);
    if (!is_class_type(ht)) continue;
    const std::size_t mark = problem_.mark();
    if (unify(problem_, env_, ht, g)) return mk::var(i);
    problem_.undo(mark);
  }

  std::optional<HottError> depth_error;
  for (const auto& entry : env_.instances().candidates(cls->name)) {
    const std::size_t mark = problem_.mark();
    const Definition& d = env_.get(entry.name);
    std::vector<Level> levels;
    for (std::size_t k = 0; k < d.level_params.size(); ++k) levels.push_back(Level::fresh_meta());
    Term inst = mk::constant(d.name, levels);
    Term ty = instantiate_levels(d.type, levels);
    struct Premise {
      std::uint32_t meta;
      bool is_class;
    };
    std::vector<Premise> premises;
    while (ty.is(Tag::Pi)) {
      Term m = problem_.fresh_applied(ctx, ty[0], at);
      std::vector<Term> margs;
      premises.push_back({spine(m, margs)->index, is_class_type(ty[0])});
      inst = mk::app(inst, m);
      ty = instantiate1(ty[1], m);
    }
    bool ok = unify(problem_, env_, ty, g);
    try {
      for (std::size_t i = 0; ok && i < premises.size(); ++i) {
        const Premise& pr = premises[i];
        if (!pr.is_class || problem_.solution(pr.meta)) continue;
        Term sub = resolve_instance(ctx, problem_.info(pr.meta).type, depth - 1, at);
        ok = unify(problem_, env_, problem_.applied(pr.meta), sub);
      }
    } catch (const HottError& e) {
      if (e.kind() == ErrorKind::InstanceDepthExceeded) {
        if (!depth_error) depth_error = e;
      } else if (e.kind() != ErrorKind::InstanceNotFound) {
        throw;
      }
      ok = false;
    }
    for (std::size_t i = 0; ok && i < premises.size(); ++i) ok = problem_.solution(premises[i].meta) != nullptr;
    if (ok) return problem_.zonk(inst);
    problem_.undo(mark);
  }
  if (depth_error) throw *depth_error;
  throw HottError(ErrorKind::InstanceNotFound, "no instance of '" + cls->name + "' for " + show(ctx, g), at);
}

void Elaborator::resolve_instances(bool final) {
  auto pass = [&](bool attempt_all) {
    bool progress = true;
    while (progress) {
      progress = false;
      auto& goals = problem_.instance_goals;
      for (std::size_t i = 0; i < goals.size();) {
        const auto goal = goals[i];
        if (problem_.solution(goal.meta)) {
          goals.erase(goals.begin() + static_cast<std::ptrdiff_t>(i));
          continue;
        }
        const MetaInfo info = problem_.info(goal.meta);
        Term ty = problem_.zonk(info.type);
        if (ty->has_meta && !attempt_all) {
          ++i;
          continue;
        }
        Term r = resolve_instance(info.ctx, ty, env_.options().instance_depth, goal.span);
        if (!unify(problem_, env_, problem_.applied(goal.meta), r))
          throw HottError(ErrorKind::UnificationFailure, "instance does not fit its goal", goal.span);
        goals.erase(goals.begin() + static_cast<std::ptrdiff_t>(i));
        progress = true;
      }
    }
  };
  pass(false);
  if (final) pass(true);
}

Term Elaborator::finish(const Telescope& ctx, const Term& t, const SourceSpan& at) {
  Term z = problem_.zonk(t);
  if (!z->has_meta) return z;
  std::function<const Node*(const Term&)> find = [&](const Term& x) -> const Node* {
    if (!x->has_meta) return nullptr;
    if (x.is(Tag::Meta)) return x.get();
    for (const Term& k : x->kids)
      if (const Node* n = find(k)) return n;
    return nullptr;
  };
  const Node* m = find(z);
  const MetaInfo& info = problem_.info(m->index);
  HottError e(ErrorKind::UnsolvedHole, "unsolved hole of type " + show(info.ctx, info.type),
              info.span.known() ? info.span : at);
  e.expected = show(info.ctx, info.type);
  (void)ctx;
  throw e;
}

// ---------------------------------------------------------------- declarations

KernelDecl elaborate_decl(const Environment& env, const Decl& decl) {
  Elaborator el(env, decl.level_params);
  Telescope ctx;
  for (const SBinder& b : decl.telescope) {
    Term t = el.elab_type(ctx, *b.type);
    ctx.push(b.name, t);
  }
  Term type;
  std::optional<Term> body;
  if (decl.type) type = el.elab_type(ctx, *decl.type);
  if (decl.body) {
    if (decl.type) {
      body = el.check(ctx, *decl.body, type);
    } else {
      Term t;
      body = el.infer(ctx, *decl.body, t);
      type = t;
    }
  }
  if (!type) throw HottError(ErrorKind::IllFormed, "declaration '" + decl.name + "' needs a type", decl.span);
  el.resolve_instances(true);

  for (std::size_t k = decl.telescope.size(); k-- > 0;) {
    const SBinder& b = decl.telescope[k];
    Term dom = ctx.at(k).type;
    type = mk::pi(b.name, dom, type, b.implicit);
    if (body) body = mk::lam(b.name, dom, *body, b.implicit);
  }
  Telescope empty;
  KernelDecl kd;
  kd.name = decl.name;
  kd.level_params = decl.level_params;
  kd.type = el.finish(empty, type, decl.span);
  if (body) kd.body = el.finish(empty, *body, decl.span);
  kd.kind = decl.kind == DeclKind::Axiom ? DefKind::Axiom
            : decl.kind == DeclKind::Primitive ? DefKind::Primitive
                                               : DefKind::Definition;
  kd.opaque = decl.kind == DeclKind::OpaqueDef;
  kd.is_class = decl.has_attr(Attribute::Kind::Class);
  kd.instance_priority = decl.instance_priority();
  kd.monomorphic = decl.has_attr(Attribute::Kind::Monomorphic);
  kd.span = decl.span;
  kd.generic_levels = el.open_levels();
  return kd;
}

}  // namespace hott
