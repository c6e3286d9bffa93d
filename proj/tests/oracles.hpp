#pragma once

// Independent reference implementations used by the property tests and the
// acceptance binary. Nothing here calls into the kernel's decision
// procedures.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hott/level.hpp"
#include "hott/term.hpp"
#include "hott/universe.hpp"

namespace oracle {

// ---- universe levels -------------------------------------------------------

// Max-free constraints over at most four atoms. Atom index -1 is Zero. The
// generator keeps every edge weight within [-1, 1], so a satisfiable set has
// a solution with values <= 4, and a violating assignment for an unentailed
// query (weight <= 2) exists below 7. Searching 0..6 is therefore exact.
struct SimpleConstraint {
  int lhs = 0;
  int lhs_succ = 0;  // 0 or 1
  hott::Rel rel = hott::Rel::Le;
  int rhs = 0;
  int rhs_succ = 0;  // 0 or 1
};

inline hott::Level level_of(int atom, int succ) {
  hott::Level l = atom < 0 ? hott::Level::zero() : hott::Level::param(static_cast<std::uint32_t>(atom));
  return succ ? hott::Level::succ(l) : l;
}

inline hott::Constraint to_constraint(const SimpleConstraint& c) {
  return {level_of(c.lhs, c.lhs_succ), c.rel, level_of(c.rhs, c.rhs_succ)};
}

inline bool holds(const SimpleConstraint& c, const std::array<int, 4>& v) {
  const int a = (c.lhs < 0 ? 0 : v[c.lhs]) + c.lhs_succ;
  const int b = (c.rhs < 0 ? 0 : v[c.rhs]) + c.rhs_succ;
  switch (c.rel) {
    case hott::Rel::Le: return a <= b;
    case hott::Rel::Lt: return a < b;
    case hott::Rel::Eq: return a == b;
  }
  return false;
}

// Weight of the edge the constraint induces: Succ on the left or `<` adds
// one, Succ on the right subtracts one. `=` contributes both directions.
inline bool weight_ok(const SimpleConstraint& c) {
  const int lt = c.rel == hott::Rel::Lt ? 1 : 0;
  const int w = c.lhs_succ + lt - c.rhs_succ;
  if (w < -1 || w > 1) return false;
  if (c.rel == hott::Rel::Eq && c.lhs_succ != c.rhs_succ) return false;
  return true;
}

inline SimpleConstraint random_constraint(std::mt19937& rng, int atoms) {
  std::uniform_int_distribution<int> atom(-1, atoms - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> rel(0, 5);
  for (;;) {
    SimpleConstraint c;
    c.lhs = atom(rng);
    c.rhs = atom(rng);
    c.lhs_succ = coin(rng) && coin(rng);
    c.rhs_succ = coin(rng) && coin(rng);
    const int r = rel(rng);
    c.rel = r < 3 ? hott::Rel::Le : r < 5 ? hott::Rel::Lt : hott::Rel::Eq;
    if (weight_ok(c)) return c;
  }
}

template <class F>
void for_each_assignment(int atoms, F&& f) {
  std::array<int, 4> v{};
  const int total = [&] {
    int t = 1;
    for (int i = 0; i < atoms; ++i) t *= 7;
    return t;
  }();
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int i = 0; i < 4; ++i) {
      v[i] = i < atoms ? c % 7 : 0;
      if (i < atoms) c /= 7;
    }
    if (!f(v)) return;
  }
}

inline bool brute_consistent(const std::vector<SimpleConstraint>& cs, int atoms) {
  bool found = false;
  for_each_assignment(atoms, [&](const std::array<int, 4>& v) {
    for (const auto& c : cs)
      if (!holds(c, v)) return true;
    found = true;
    return false;
  });
  return found;
}

inline bool brute_entails(const std::vector<SimpleConstraint>& cs, const SimpleConstraint& q, int atoms) {
  bool entailed = true;
  for_each_assignment(atoms, [&](const std::array<int, 4>& v) {
    for (const auto& c : cs)
      if (!holds(c, v)) return true;
    if (!holds(q, v)) {
      entailed = false;
      return false;
    }
    return true;
  });
  return entailed;
}

struct UniverseTrial {
  int atoms = 0;
  std::vector<SimpleConstraint> constraints;
  SimpleConstraint query;
};

inline UniverseTrial random_trial(std::mt19937& rng) {
  UniverseTrial t;
  t.atoms = std::uniform_int_distribution<int>(1, 4)(rng);
  const int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int i = 0; i < n; ++i) t.constraints.push_back(random_constraint(rng, t.atoms));
  t.query = random_constraint(rng, t.atoms);
  return t;
}

// Runs the kernel on a trial and compares with brute force. Returns a
// description of the disagreement, if any.
inline std::optional<std::string> universe_disagreement(const UniverseTrial& t) {
  hott::ConstraintGraph g;
  bool consistent = true;
  for (const auto& c : t.constraints) {
    try {
      g.add(to_constraint(c));
    } catch (const hott::UniverseInconsistency&) {
      consistent = false;
      break;
    }
  }
  const bool expect_consistent = brute_consistent(t.constraints, t.atoms);
  std::string text;
  for (const auto& c : t.constraints) text += hott::to_string(to_constraint(c)) + "; ";
  if (consistent != expect_consistent)
    return "consistency differs on {" + text + "}: kernel " + (consistent ? "yes" : "no");
  if (!consistent) return std::nullopt;
  const bool e = g.entails(to_constraint(t.query));
  if (e != brute_entails(t.constraints, t.query, t.atoms))
    return "entailment of " + hott::to_string(to_constraint(t.query)) + " differs on {" + text + "}: kernel " +
           (e ? "yes" : "no");
  return std::nullopt;
}

// ---- closed arithmetic -----------------------------------------------------

// Peano expressions rewritten one step at a time, leftmost-innermost. This is
// the reference for kernel normalisation of NatElim terms.
struct Arith {
  enum Op { Z, S, Add, Mul, Pred } op = Z;
  std::vector<Arith> kids;
};

inline Arith num(unsigned n) {
  Arith a;
  for (unsigned i = 0; i < n; ++i) {
    Arith s;
    s.op = Arith::S;
    s.kids.push_back(a);
    a = s;
  }
  return a;
}

inline bool is_value(const Arith& a) {
  if (a.op == Arith::Z) return true;
  return a.op == Arith::S && is_value(a.kids[0]);
}

inline bool step(Arith& a) {
  for (auto& k : a.kids)
    if (step(k)) return true;
  auto mk2 = [](Arith::Op op, Arith x, Arith y) {
    Arith r;
    r.op = op;
    r.kids = {std::move(x), std::move(y)};
    return r;
  };
  auto succ = [](Arith x) {
    Arith r;
    r.op = Arith::S;
    r.kids = {std::move(x)};
    return r;
  };
  switch (a.op) {
    case Arith::Add:
      // add Z b -> b ; add (S m) b -> S (add m b)
      if (a.kids[0].op == Arith::Z) {
        Arith b = a.kids[1];
        a = b;
        return true;
      }
      if (a.kids[0].op == Arith::S) {
        a = succ(mk2(Arith::Add, a.kids[0].kids[0], a.kids[1]));
        return true;
      }
      return false;
    case Arith::Mul:
      // mul Z b -> Z ; mul (S m) b -> add b (mul m b)
      if (a.kids[0].op == Arith::Z) {
        a = Arith{};
        return true;
      }
      if (a.kids[0].op == Arith::S) {
        a = mk2(Arith::Add, a.kids[1], mk2(Arith::Mul, a.kids[0].kids[0], a.kids[1]));
        return true;
      }
      return false;
    case Arith::Pred:
      if (a.kids[0].op == Arith::Z) {
        a = Arith{};
        return true;
      }
      if (a.kids[0].op == Arith::S) {
        Arith m = a.kids[0].kids[0];
        a = m;
        return true;
      }
      return false;
    default: return false;
  }
}

inline unsigned evaluate(Arith a) {
  while (!is_value(a))
    if (!step(a)) break;
  unsigned n = 0;
  const Arith* p = &a;
  while (p->op == Arith::S) {
    ++n;
    p = &p->kids[0];
  }
  return n;
}

inline Arith random_arith(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 3);
  const int k = pick(rng);
  if (k == 0) return num(std::uniform_int_distribution<unsigned>(0, 3)(rng));
  Arith a;
  a.op = k == 1 ? Arith::Add : k == 2 ? Arith::Mul : Arith::Pred;
  a.kids.push_back(random_arith(rng, depth - 1));
  if (a.op != Arith::Pred) a.kids.push_back(random_arith(rng, depth - 1));
  return a;
}

// Kernel encodings by NatElim, independent of any corpus definition.
inline hott::Term nat_motive() { return hott::mk::lam("_", hott::mk::nat(), hott::mk::nat()); }

inline hott::Term kernel_add(hott::Term m, hott::Term n) {
  using namespace hott;
  // succ-case binds (k, ih); ih is Var 0.
  return mk::nat_elim(nat_motive(), n, mk::succ(mk::var(0)), m);
}

inline hott::Term kernel_mul(hott::Term m, hott::Term n) {
  using namespace hott;
  return mk::nat_elim(nat_motive(), mk::zero(), kernel_add(shift(n, 2), mk::var(0)), m);
}

inline hott::Term kernel_pred(hott::Term m) {
  using namespace hott;
  return mk::nat_elim(nat_motive(), mk::zero(), mk::var(1), m);
}

inline hott::Term to_kernel(const Arith& a) {
  using namespace hott;
  switch (a.op) {
    case Arith::Z: return mk::zero();
    case Arith::S: return mk::succ(to_kernel(a.kids[0]));
    case Arith::Add: return kernel_add(to_kernel(a.kids[0]), to_kernel(a.kids[1]));
    case Arith::Mul: return kernel_mul(to_kernel(a.kids[0]), to_kernel(a.kids[1]));
    case Arith::Pred: return kernel_pred(to_kernel(a.kids[0]));
  }
  return mk::zero();
}

}  // namespace oracle
