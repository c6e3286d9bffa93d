#include "hott/term.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace hott {

namespace {

constexpr std::array<TagInfo, static_cast<std::size_t>(Tag::Meta) + 1> kTags = {{
    {"Var", 0, {}, 0},
    {"Sort", 0, {}, 0},
    {"Pi", 2, {0, 1}, 0},
    {"Lam", 2, {0, 1}, 0b1},
    {"App", 2, {0, 0}, 0},
    {"Sigma", 2, {0, 1}, 0},
    {"Pair", 3, {0, 0, 0}, 0b100},
    {"Proj1", 1, {0}, 0},
    {"Proj2", 1, {0}, 0},
    {"Sum", 2, {0, 0}, 0},
    {"Inl", 2, {0, 0}, 0b10},
    {"Inr", 2, {0, 0}, 0b10},
    {"SumElim", 4, {0, 0, 0, 0}, 0},
    {"Unit", 0, {}, 0},
    {"Star", 0, {}, 0},
    {"UnitElim", 3, {0, 0, 0}, 0},
    {"Empty", 0, {}, 0},
    {"EmptyElim", 2, {0, 0}, 0},
    {"Nat", 0, {}, 0},
    {"Zero", 0, {}, 0},
    {"Succ", 1, {0}, 0},
    {"NatElim", 4, {0, 0, 2, 0}, 0},
    {"Id", 3, {0, 0, 0}, 0},
    {"Refl", 2, {0, 0}, 0b1},
    {"J", 5, {0, 2, 0, 0, 0}, 0b1},
    {"Transport", 3, {1, 0, 0}, 0},
    {"ApD", 3, {0, 0, 1}, 0b100},
    {"Interval", 0, {}, 0},
    {"IZero", 0, {}, 0},
    {"IOne", 0, {}, 0},
    {"Seg", 0, {}, 0},
    {"IntervalInd", 5, {0, 0, 0, 0, 0}, 0},
    {"Circle", 0, {}, 0},
    {"Base", 0, {}, 0},
    {"Loop", 0, {}, 0},
    {"CircleInd", 4, {0, 0, 0, 0}, 0},
    {"Susp", 1, {0}, 0},
    {"North", 1, {0}, 0b1},
    {"South", 1, {0}, 0b1},
    {"Merid", 1, {0}, 0},
    {"SuspInd", 5, {0, 0, 0, 0, 0}, 0},
    {"Coeq", 2, {0, 0}, 0},
    {"CoeqPoint", 2, {0, 0}, 0b1},
    {"CoeqGlue", 2, {0, 0}, 0b1},
    {"CoeqInd", 4, {0, 0, 0, 0}, 0},
    {"Trunc", 1, {0}, 0},
    {"Tr", 1, {0}, 0},
    {"TrPath", 2, {0, 0}, 0},
    {"TruncInd", 4, {0, 0, 0, 0}, 0},
    {"Const", 0, {}, 0},
    {"Meta", 0, {}, 0},
}};

bool level_has_vars(const Level& l) { return l.kind() != Level::Kind::Zero && !(normalize(l).offsets.empty()); }

void finish(Node& n) {
  std::uint32_t loose = 0;
  bool has_meta = n.tag == Tag::Meta;
  bool level_vars = false;
  if (n.tag == Tag::Var) loose = n.index + 1;
  if (n.tag == Tag::Sort) level_vars = level_has_vars(n.level);
  if (n.tag == Tag::Const)
    for (const Level& l : n.levels) level_vars = level_vars || level_has_vars(l);
  const TagInfo& ti = info(n.tag);
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    const Node& k = *n.kids[i];
    std::uint32_t b = ti.binders[i];
    if (k.loose > b) loose = std::max(loose, k.loose - b);
    has_meta = has_meta || k.has_meta;
    level_vars = level_vars || k.has_level_vars;
  }
  n.loose = loose;
  n.has_meta = has_meta;
  n.has_level_vars = level_vars;
}

Term leaf(Tag tag) {
  auto n = std::make_shared<Node>();
  n->tag = tag;
  finish(*n);
  return Term(std::move(n));
}

}  // namespace

const TagInfo& info(Tag t) { return kTags[static_cast<std::size_t>(t)]; }

Term make(Tag tag, std::vector<Term> kids) {
  if (kids.size() != info(tag).arity) throw std::logic_error(std::string("bad arity for ") + info(tag).name);
  for (const Term& k : kids)
    if (!k) throw std::logic_error(std::string("null child in ") + info(tag).name);
  auto n = std::make_shared<Node>();
  n->tag = tag;
  n->kids = std::move(kids);
  finish(*n);
  return Term(std::move(n));
}

Term rebuild(const Term& t, std::vector<Term> kids) {
  bool same = kids.size() == t.arity();
  for (std::size_t i = 0; same && i < kids.size(); ++i) same = kids[i].same_node(t[i]);
  if (same) return t;
  auto n = std::make_shared<Node>(*t);
  n->kids = std::move(kids);
  finish(*n);
  return Term(std::move(n));
}

namespace mk {

Term var(std::uint32_t i) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Var;
  n->index = i;
  finish(*n);
  return Term(std::move(n));
}

Term sort(Level l) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Sort;
  n->level = std::move(l);
  finish(*n);
  return Term(std::move(n));
}

namespace {
Term binder(Tag tag, std::string name, Term a, Term b, bool implicit) {
  auto n = std::make_shared<Node>();
  n->tag = tag;
  n->name = std::move(name);
  n->implicit = implicit;
  n->kids = {std::move(a), std::move(b)};
  finish(*n);
  return Term(std::move(n));
}
}  // namespace

Term pi(std::string name, Term dom, Term cod, bool implicit) {
  return binder(Tag::Pi, std::move(name), std::move(dom), std::move(cod), implicit);
}
Term lam(std::string name, Term dom, Term body, bool implicit) {
  return binder(Tag::Lam, std::move(name), std::move(dom), std::move(body), implicit);
}
Term app(Term f, Term a) { return make(Tag::App, {std::move(f), std::move(a)}); }
Term apps(Term f, std::initializer_list<Term> args) {
  for (const Term& a : args) f = app(std::move(f), a);
  return f;
}
Term apps(Term f, std::span<const Term> args) {
  for (const Term& a : args) f = app(std::move(f), a);
  return f;
}
Term sigma(std::string name, Term a, Term b) {
  return binder(Tag::Sigma, std::move(name), std::move(a), std::move(b), false);
}
Term pair(Term a, Term b, Term ann) { return make(Tag::Pair, {std::move(a), std::move(b), std::move(ann)}); }
Term proj1(Term p) { return make(Tag::Proj1, {std::move(p)}); }
Term proj2(Term p) { return make(Tag::Proj2, {std::move(p)}); }
Term sum(Term a, Term b) { return make(Tag::Sum, {std::move(a), std::move(b)}); }
Term inl(Term a, Term ann) { return make(Tag::Inl, {std::move(a), std::move(ann)}); }
Term inr(Term b, Term ann) { return make(Tag::Inr, {std::move(b), std::move(ann)}); }
Term sum_elim(Term m, Term l, Term r, Term s) {
  return make(Tag::SumElim, {std::move(m), std::move(l), std::move(r), std::move(s)});
}
Term unit() { return leaf(Tag::Unit); }
Term star() { return leaf(Tag::Star); }
Term unit_elim(Term m, Term c, Term s) { return make(Tag::UnitElim, {std::move(m), std::move(c), std::move(s)}); }
Term empty() { return leaf(Tag::Empty); }
Term empty_elim(Term m, Term s) { return make(Tag::EmptyElim, {std::move(m), std::move(s)}); }
Term nat() { return leaf(Tag::Nat); }
Term zero() { return leaf(Tag::Zero); }
Term succ(Term n) { return make(Tag::Succ, {std::move(n)}); }
Term numeral(std::uint32_t n) {
  Term t = zero();
  for (std::uint32_t i = 0; i < n; ++i) t = succ(t);
  return t;
}
Term nat_elim(Term m, Term z, Term s, Term n) {
  return make(Tag::NatElim, {std::move(m), std::move(z), std::move(s), std::move(n)});
}
Term id(Term ty, Term a, Term b) { return make(Tag::Id, {std::move(ty), std::move(a), std::move(b)}); }
Term refl(Term ty, Term a) { return make(Tag::Refl, {std::move(ty), std::move(a)}); }
Term j(Term base, Term motive, Term d, Term endpoint, Term path) {
  return make(Tag::J, {std::move(base), std::move(motive), std::move(d), std::move(endpoint), std::move(path)});
}
Term transport(Term family, Term path, Term payload) {
  return make(Tag::Transport, {std::move(family), std::move(path), std::move(payload)});
}
Term apd(Term f, Term path, Term family) { return make(Tag::ApD, {std::move(f), std::move(path), std::move(family)}); }
Term interval() { return leaf(Tag::Interval); }
Term izero() { return leaf(Tag::IZero); }
Term ione() { return leaf(Tag::IOne); }
Term seg() { return leaf(Tag::Seg); }
Term interval_ind(Term m, Term a, Term b, Term p, Term x) {
  return make(Tag::IntervalInd, {std::move(m), std::move(a), std::move(b), std::move(p), std::move(x)});
}
Term circle() { return leaf(Tag::Circle); }
Term base() { return leaf(Tag::Base); }
Term loop() { return leaf(Tag::Loop); }
Term circle_ind(Term m, Term b, Term l, Term x) {
  return make(Tag::CircleInd, {std::move(m), std::move(b), std::move(l), std::move(x)});
}
Term susp(Term a) { return make(Tag::Susp, {std::move(a)}); }
Term north(Term a) { return make(Tag::North, {std::move(a)}); }
Term south(Term a) { return make(Tag::South, {std::move(a)}); }
Term merid(Term a) { return make(Tag::Merid, {std::move(a)}); }
Term susp_ind(Term m, Term n, Term s, Term c, Term x) {
  return make(Tag::SuspInd, {std::move(m), std::move(n), std::move(s), std::move(c), std::move(x)});
}
Term coeq(Term f, Term g) { return make(Tag::Coeq, {std::move(f), std::move(g)}); }
Term coeq_point(Term ann, Term a) { return make(Tag::CoeqPoint, {std::move(ann), std::move(a)}); }
Term coeq_glue(Term ann, Term b) { return make(Tag::CoeqGlue, {std::move(ann), std::move(b)}); }
Term coeq_ind(Term m, Term c, Term g, Term x) {
  return make(Tag::CoeqInd, {std::move(m), std::move(c), std::move(g), std::move(x)});
}
Term trunc(Term a) { return make(Tag::Trunc, {std::move(a)}); }
Term tr(Term a) { return make(Tag::Tr, {std::move(a)}); }
Term tr_path(Term x, Term y) { return make(Tag::TrPath, {std::move(x), std::move(y)}); }
Term trunc_ind(Term m, Term hp, Term f, Term w) {
  return make(Tag::TruncInd, {std::move(m), std::move(hp), std::move(f), std::move(w)});
}

Term constant(std::string name, std::vector<Level> levels) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Const;
  n->name = std::move(name);
  n->levels = std::move(levels);
  finish(*n);
  return Term(std::move(n));
}

Term meta(std::uint32_t id) {
  auto n = std::make_shared<Node>();
  n->tag = Tag::Meta;
  n->index = id;
  finish(*n);
  return Term(std::move(n));
}

}  // namespace mk

namespace {

Term shift_rec(const Term& t, std::int64_t amount, std::uint32_t cutoff) {
  if (t->loose <= cutoff) return t;
  if (t.is(Tag::Var)) {
    std::int64_t idx = static_cast<std::int64_t>(t->index) + amount;
    if (idx < static_cast<std::int64_t>(cutoff)) throw ShiftUnderflow("negative shift captures a free variable");
    return mk::var(static_cast<std::uint32_t>(idx));
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) kids.push_back(shift_rec(t[i], amount, cutoff + binders_of(t.tag(), i)));
  return rebuild(t, std::move(kids));
}

Term subst_rec(const Term& t, std::uint32_t target, const Term& s, std::uint32_t depth) {
  // depth = binders crossed; the target is Var(target + depth) here.
  if (t->loose <= target + depth) return t;
  if (t.is(Tag::Var)) {
    std::uint32_t i = t->index;
    if (i == target + depth) return shift(s, static_cast<std::int64_t>(target + depth), 0);
    if (i > target + depth) return mk::var(i - 1);
    return t;
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) kids.push_back(subst_rec(t[i], target, s, depth + binders_of(t.tag(), i)));
  return rebuild(t, std::move(kids));
}

}  // namespace

Term shift(const Term& t, std::int64_t amount, std::uint32_t cutoff) {
  if (amount == 0) return t;
  return shift_rec(t, amount, cutoff);
}

Term subst(const Term& t, std::uint32_t target, const Term& replacement) {
  return subst_rec(t, target, replacement, 0);
}

Term instantiate(const Term& body, std::span<const Term> args) {
  Term out = body;
  const auto k = static_cast<std::uint32_t>(args.size());
  for (std::uint32_t i = 0; i < k; ++i) out = subst(out, k - 1 - i, args[i]);
  return out;
}

Term instantiate1(const Term& body, const Term& arg) { return subst(body, 0, arg); }

Term map_levels(const Term& t, const std::function<Level(const Level&)>& f) {
  if (!t->has_level_vars) return t;
  if (t.is(Tag::Sort)) return mk::sort(f(t->level));
  if (t.is(Tag::Const)) {
    std::vector<Level> ls;
    ls.reserve(t->levels.size());
    for (const Level& l : t->levels) ls.push_back(f(l));
    auto n = std::make_shared<Node>(*t);
    n->levels = std::move(ls);
    finish(*n);
    return Term(std::move(n));
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (const Term& k : t->kids) kids.push_back(map_levels(k, f));
  return rebuild(t, std::move(kids));
}

Term instantiate_levels(const Term& t, std::span<const Level> levels) {
  if (levels.empty()) return t;
  return map_levels(t, [&](const Level& l) { return instantiate_params(l, levels); });
}

void collect_level_atoms(const Term& t, std::vector<Atom>& out) {
  if (!t->has_level_vars) return;
  if (t.is(Tag::Sort)) collect_atoms(t->level, out);
  if (t.is(Tag::Const))
    for (const Level& l : t->levels) collect_atoms(l, out);
  for (const Term& k : t->kids) collect_level_atoms(k, out);
}

bool syntactic_equal(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.tag() != b.tag() || a.arity() != b.arity()) return false;
  switch (a.tag()) {
    case Tag::Var:
    case Tag::Meta:
      if (a->index != b->index) return false;
      break;
    case Tag::Sort:
      if (!(a->level == b->level)) return false;
      break;
    case Tag::Const:
      if (a->name != b->name || a->levels.size() != b->levels.size()) return false;
      for (std::size_t i = 0; i < a->levels.size(); ++i)
        if (!(a->levels[i] == b->levels[i])) return false;
      break;
    default: break;
  }
  if (a->loose != b->loose) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!syntactic_equal(a[i], b[i])) return false;
  return true;
}

bool well_scoped(const Term& t, std::uint32_t depth) { return t->loose <= depth; }

namespace {
bool has_var_rec(const Term& t, std::uint32_t idx) {
  if (t->loose <= idx) return false;
  if (t.is(Tag::Var)) return t->index == idx;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (has_var_rec(t[i], idx + binders_of(t.tag(), i))) return true;
  return false;
}
}  // namespace

bool has_free_var(const Term& t, std::uint32_t index) { return has_var_rec(t, index); }

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const Term& k : t->kids) n += term_size(k);
  return n;
}

Term spine(const Term& t, std::vector<Term>& args) {
  args.clear();
  const Term* cur = &t;
  while (cur->is(Tag::App)) {
    args.push_back((*cur)[1]);
    cur = &(*cur)[0];
  }
  std::reverse(args.begin(), args.end());
  return *cur;
}

Term Telescope::type_of(std::uint32_t i) const {
  if (i >= entries_.size()) throw std::out_of_range("unbound variable");
  const auto& e = entries_[entries_.size() - 1 - i];
  return shift(e.type, static_cast<std::int64_t>(i) + 1, 0);
}

const std::string& Telescope::name_of(std::uint32_t i) const { return entries_.at(entries_.size() - 1 - i).name; }

bool Telescope::well_scoped() const {
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (!hott::well_scoped(entries_[k].type, static_cast<std::uint32_t>(k))) return false;
  return true;
}

}  // namespace hott
