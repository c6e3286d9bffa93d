#include <algorithm>
#include <map>
#include <set>

#include "hott/checker.hpp"
#include "hott/elaborator.hpp"

namespace hott {

namespace {

std::set<Atom> meta_atoms(const Term& t) {
  std::vector<Atom> all;
  collect_level_atoms(t, all);
  std::set<Atom> out;
  for (Atom a : all)
    if (a.kind == AtomKind::Meta) out.insert(a);
  return out;
}

// Holes in Sort nodes of the declared type: the user wrote a universe there.
void sort_metas(const Term& t, std::set<Atom>& out) {
  if (!t->has_level_vars) return;
  if (t.is(Tag::Sort)) {
    std::vector<Atom> atoms;
    collect_atoms(t->level, atoms);
    for (Atom a : atoms)
      if (a.kind == AtomKind::Meta) out.insert(a);
  }
  for (const Term& k : t->kids) sort_metas(k, out);
}

std::string fresh_param_name(const std::vector<std::string>& taken, std::size_t& counter) {
  for (;;) {
    std::string n = "u" + std::to_string(++counter);
    if (std::find(taken.begin(), taken.end(), n) == taken.end()) return n;
  }
}

// Least value of `m` consistent with the graph, as a level over `keep`; nullopt
// when some kept atom bounds m from below with a negative offset.
std::optional<Level> least_solution(const ConstraintGraph& g, Atom m, const std::set<Atom>& keep) {
  std::optional<Level> out;
  auto join = [&](Level l) { out = out ? from_normal(normalize(Level::max(*out, l))) : l; };
  if (auto z = g.longest_path(Atom::zero(), m); z && *z > 0) join(Level::nat(static_cast<std::uint32_t>(*z)));
  for (Atom x : keep) {
    auto w = g.longest_path(x, m);
    if (!w) continue;
    if (*w < 0) return std::nullopt;
    Level l = Level::atom(x);
    for (std::int64_t i = 0; i < *w; ++i) l = Level::succ(l);
    join(l);
  }
  return out ? *out : Level::zero();
}

}  // namespace

const Definition& add_kernel_decl(Environment& env, KernelDecl kd) {
  ConstraintGraph g = env.graph();
  TypeChecker tc(env, g, kd.level_params);
  Telescope ctx;
  tc.infer_sort(ctx, kd.type);
  if (kd.body) tc.check(ctx, *kd.body, kd.type);

  // Universe holes written in the type generalise; every other hole (level
  // instances of constants, holes in the body) takes its least solution.
  std::set<Atom> type_metas;
  sort_metas(kd.type, type_metas);
  if (kd.generic_levels)
    std::erase_if(type_metas, [&](Atom a) { return !kd.generic_levels->count(a.id); });
  std::set<Atom> body_metas = meta_atoms(kd.type);
  if (kd.body)
    for (Atom a : meta_atoms(*kd.body)) body_metas.insert(a);
  for (Atom a : g.atoms())
    if (a.kind == AtomKind::Meta) body_metas.insert(a);
  for (Atom a : type_metas) body_metas.erase(a);

  std::set<Atom> keep;
  for (std::uint32_t i = 0; i < kd.level_params.size(); ++i) keep.insert(Atom::param(i));
  for (Atom a : type_metas) keep.insert(a);
  for (Atom a : g.atoms())
    if (a.kind == AtomKind::Global) keep.insert(a);

  // Instance holes of the type that no constraint mentions stay generic.
  const std::set<Atom> in_type = meta_atoms(kd.type);
  auto bounded = [&](Atom m) { return g.knows(m); };

  // Other holes take their least solution unless that would need a negative
  // offset; those are promoted to parameters.
  std::map<Atom, Level> solved;
  for (bool changed = true; changed;) {
    changed = false;
    solved.clear();
    for (Atom m : body_metas) {
      if (keep.count(m)) continue;
      if (in_type.count(m) && !bounded(m)) {
        keep.insert(m);
        changed = true;
        break;
      }
      if (auto l = least_solution(g, m, keep)) {
        solved[m] = *l;
      } else {
        keep.insert(m);
        changed = true;
        break;
      }
    }
  }

  std::vector<std::string> names = kd.level_params;
  std::map<Atom, Level> rename;
  std::size_t counter = 0;
  for (Atom a : keep) {
    if (a.kind != AtomKind::Meta) continue;
    std::string n = fresh_param_name(names, counter);
    rename[a] = kd.monomorphic ? Level::global(kd.name + "." + n) : Level::param(static_cast<std::uint32_t>(names.size()));
    names.push_back(n);
  }
  if (kd.monomorphic)
    for (std::uint32_t i = 0; i < kd.level_params.size(); ++i)
      rename[Atom::param(i)] = Level::global(kd.name + "." + kd.level_params[i]);

  auto subst_atom = [&](Atom a) -> Level {
    if (auto it = rename.find(a); it != rename.end()) return it->second;
    if (auto it = solved.find(a); it != solved.end())
      return map_atoms(it->second, [&](Atom b) {
        auto r = rename.find(b);
        return r != rename.end() ? r->second : Level::atom(b);
      });
    if (a.kind == AtomKind::Meta) return Level::zero();
    return Level::atom(a);
  };
  auto subst_level = [&](const Level& l) { return map_atoms(l, subst_atom); };

  std::vector<Constraint> stored;
  std::vector<Constraint> global;
  if (!env.options().type_in_type) {
    std::vector<Atom> kv(keep.begin(), keep.end());
    for (const Constraint& c : g.project(kv)) {
      Constraint m{subst_level(c.lhs), c.rel, subst_level(c.rhs)};
      if (m.lhs.has_param() || m.rhs.has_param())
        stored.push_back(m);
      else
        global.push_back(m);
    }
  }

  Definition d;
  d.name = kd.name;
  d.kind = kd.kind;
  d.opaque = kd.opaque;
  d.type = map_levels(kd.type, subst_level);
  if (kd.body) d.body = map_levels(*kd.body, subst_level);
  d.level_params = kd.monomorphic ? std::vector<std::string>{} : names;
  d.constraints = stored;
  d.is_class = kd.is_class;
  d.instance_priority = kd.instance_priority;
  d.monomorphic = kd.monomorphic;
  d.span = kd.span;
  d.axiom_deps = compute_axiom_deps(env, d.name, d.kind, d.type, d.body);
  if (env.contains(d.name)) throw HottError(ErrorKind::DuplicateName, "duplicate declaration '" + d.name + "'", kd.span);

  const auto mark = env.graph().checkpoint();
  try {
    for (const Constraint& c : global)
      if (!env.graph().entails(c)) env.graph().add(c);
  } catch (const UniverseInconsistency& u) {
    env.graph().rollback(mark);
    HottError e(ErrorKind::UniverseInconsistency, "universe inconsistency: " + u.cycle_text(), kd.span);
    for (const Constraint& c : u.cycle()) e.cycle.push_back(to_string(c));
    throw e;
  }
  try {
    return env.add(std::move(d));
  } catch (...) {
    env.graph().rollback(mark);
    throw;
  }
}

const Definition& check_declaration(Environment& env, const Decl& decl, const std::string& file) {
  try {
    return add_kernel_decl(env, elaborate_decl(env, decl));
  } catch (HottError& e) {
    e.at(decl.span);
    if (!file.empty() && e.span().file.empty()) {
      SourceSpan s = e.span();
      s.file = file;
      HottError copy(e.kind(), e.what(), s);
      copy.expected = e.expected;
      copy.got = e.got;
      copy.cycle = e.cycle;
      copy.expected_tokens = e.expected_tokens;
      throw copy;
    }
    throw;
  }
}

}  // namespace hott
