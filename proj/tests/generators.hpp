#pragma once

// Hand-rolled generators of well-typed kernel terms.

#include <random>
#include <vector>

#include "hott/term.hpp"

namespace gen {

using hott::Term;
namespace mk = hott::mk;

// Closed types built from Nat, Unit, identity types on Nat, and non-trivial
// Pi/Sigma nesting. Codomains with index 0 depend on the bound Nat.
inline Term type(std::mt19937& rng, int fuel, bool allow_dependent = true) {
  std::uniform_int_distribution<int> pick(0, fuel <= 0 ? 2 : 5);
  switch (pick(rng)) {
    case 0: return mk::nat();
    case 1: return mk::unit();
    case 2: {
      Term n = mk::numeral(std::uniform_int_distribution<unsigned>(0, 2)(rng));
      return mk::id(mk::nat(), n, n);
    }
    case 3:
      if (allow_dependent) return mk::pi("n", mk::nat(), mk::id(mk::nat(), mk::var(0), mk::var(0)));
      return mk::pi("x", type(rng, fuel - 1), hott::shift(type(rng, fuel - 1), 1));
    case 4: return mk::pi("x", type(rng, fuel - 1), hott::shift(type(rng, fuel - 1), 1));
    default:
      if (allow_dependent && std::uniform_int_distribution<int>(0, 1)(rng))
        return mk::sigma("n", mk::nat(), mk::id(mk::nat(), mk::var(0), mk::var(0)));
      return mk::sigma("x", type(rng, fuel - 1), hott::shift(type(rng, fuel - 1), 1));
  }
}

// A closed canonical inhabitant of a type produced by `type`. `depth` is the
// number of binders crossed, so bound variables of Nat type can be reused.
inline Term inhabitant(std::mt19937& rng, const Term& t, std::uint32_t depth = 0,
                       std::vector<std::uint32_t> nat_levels = {}) {
  switch (t.tag()) {
    case hott::Tag::Nat:
      if (!nat_levels.empty() && std::uniform_int_distribution<int>(0, 1)(rng)) {
        const auto lvl = nat_levels[std::uniform_int_distribution<std::size_t>(0, nat_levels.size() - 1)(rng)];
        return mk::var(depth - 1 - lvl);
      }
      return mk::numeral(std::uniform_int_distribution<unsigned>(0, 3)(rng));
    case hott::Tag::Unit: return mk::star();
    case hott::Tag::Id: return mk::refl(t[0], t[1]);
    case hott::Tag::Pi: {
      auto levels = nat_levels;
      if (t[0].is(hott::Tag::Nat)) levels.push_back(depth);
      return mk::lam("x", t[0], inhabitant(rng, t[1], depth + 1, levels));
    }
    case hott::Tag::Sigma: {
      Term a = inhabitant(rng, t[0], depth, nat_levels);
      Term b_type = hott::instantiate1(t[1], a);
      return mk::pair(a, inhabitant(rng, b_type, depth, nat_levels), t);
    }
    default: return mk::star();
  }
}

struct EtaSample {
  hott::Telescope ctx;
  Term term;
  Term type;
};

// A Pi- or Sigma-typed term: a bare variable, a neutral application of a
// context function, or a canonical inhabitant.
inline EtaSample eta_sample(std::mt19937& rng, bool pi) {
  Term ty;
  do {
    ty = type(rng, 3);
  } while (!ty.is(pi ? hott::Tag::Pi : hott::Tag::Sigma));
  EtaSample s;
  s.type = ty;
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      s.ctx.push("x", ty);
      s.term = mk::var(0);
      s.type = hott::shift(ty, 1);
      break;
    case 1:
      s.ctx.push("g", mk::pi("n", mk::nat(), hott::shift(ty, 1)));
      s.term = mk::app(mk::var(0), mk::numeral(std::uniform_int_distribution<unsigned>(0, 2)(rng)));
      s.type = hott::shift(ty, 1);
      break;
    default: s.term = inhabitant(rng, ty); break;
  }
  return s;
}

inline Term eta_expand(const Term& t, const Term& type) {
  if (type.is(hott::Tag::Pi)) return mk::lam("y", type[0], mk::app(hott::shift(t, 1), mk::var(0)));
  return mk::pair(mk::proj1(t), mk::proj2(t), type);
}

}  // namespace gen
