#include <gtest/gtest.h>

#include <random>

#include "hott/universe.hpp"
#include "oracles.hpp"

using namespace hott;

namespace {

const Level u = Level::param(0);
const Level v = Level::param(1);
const Level w = Level::param(2);

Constraint le(Level a, Level b) { return {std::move(a), Rel::Le, std::move(b)}; }
Constraint lt(Level a, Level b) { return {std::move(a), Rel::Lt, std::move(b)}; }

}  // namespace

TEST(LevelNormalize, SuccDistributesOverMax) {
  EXPECT_EQ(normalize(Level::succ(Level::max(u, v))), normalize(Level::max(Level::succ(u), Level::succ(v))));
  EXPECT_EQ(normalize(Level::max(u, Level::max(v, u))), normalize(Level::max(v, u)));
  EXPECT_EQ(normalize(Level::max(Level::zero(), u)), normalize(u));
}

TEST(ConstraintGraph, StrictCycleRejected) {
  ConstraintGraph g;
  g.add(lt(u, v));
  try {
    g.add(le(v, u));
    FAIL() << "expected an inconsistency";
  } catch (const UniverseInconsistency& e) {
    ASSERT_EQ(e.cycle().size(), 2u);
    const std::vector<std::string> names{"u", "v"};
    EXPECT_EQ(e.cycle_text(names), "u < v, v <= u");
  }
  // The failed addition leaves the graph as it was.
  EXPECT_TRUE(g.entails(lt(u, v)));
  EXPECT_FALSE(g.entails(le(v, u)));
}

TEST(ConstraintGraph, Transitivity) {
  ConstraintGraph g;
  g.add(le(u, v));
  g.add(le(v, w));
  EXPECT_TRUE(g.entails(le(u, w)));
  EXPECT_FALSE(g.entails(lt(u, w)));
}

TEST(ConstraintGraph, SuccSelfRejected) {
  ConstraintGraph g;
  EXPECT_THROW(g.add(le(Level::succ(u), u)), UniverseInconsistency);
}

TEST(ConstraintGraph, EntailmentExamples) {
  ConstraintGraph empty;
  EXPECT_TRUE(empty.entails(le(u, Level::max(u, v))));
  ConstraintGraph g;
  g.add(le(u, v));
  EXPECT_TRUE(g.entails(le(u, Level::succ(v))));
  EXPECT_FALSE(g.entails(le(v, u)));
  EXPECT_TRUE(g.entails(le(Level::zero(), u)));
}

TEST(ConstraintGraph, EqualitySplits) {
  ConstraintGraph g;
  g.add({u, Rel::Eq, v});
  EXPECT_TRUE(g.entails(le(u, v)));
  EXPECT_TRUE(g.entails(le(v, u)));
  EXPECT_THROW(g.add(lt(u, v)), UniverseInconsistency);
}

TEST(ConstraintGraph, MaxOnLeftDecomposes) {
  ConstraintGraph g;
  g.add(le(Level::max(u, v), w));
  EXPECT_TRUE(g.entails(le(u, w)));
  EXPECT_TRUE(g.entails(le(v, w)));
}

TEST(ConstraintGraph, MaxOnRightCommitsToOneDisjunct) {
  // Satisfiable as a whole (u = w = 1, v = 0) but the first commitment is
  // u <= v; the later v < u is then refused cleanly, with the graph intact.
  ConstraintGraph g;
  g.add(le(u, Level::max(v, w)));
  const auto before = g.edge_count();
  EXPECT_THROW(g.add(lt(v, u)), UniverseInconsistency);
  EXPECT_EQ(g.edge_count(), before);
  EXPECT_TRUE(g.entails(le(u, Level::max(v, w))));
}

TEST(ConstraintGraph, MaxOnRightUsesEntailedDisjunct) {
  ConstraintGraph g;
  g.add(lt(v, u));
  g.add(le(u, w));
  g.add(le(u, Level::max(v, w)));
  EXPECT_TRUE(g.entails(lt(v, u)));
}

TEST(Solve, Examples) {
  ConstraintGraph g;
  g.register_atom(Atom::param(0));
  auto s = g.solve();
  EXPECT_EQ(s.at(Atom::param(0)), 0);

  ConstraintGraph h;
  h.add(lt(u, v));
  auto t = h.solve();
  EXPECT_EQ(t.at(Atom::param(0)), 0);
  EXPECT_EQ(t.at(Atom::param(1)), 1);
}

TEST(Solve, AssignmentValidatesOnFuzzedGraphs) {
  std::mt19937 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto t = oracle::random_trial(rng);
    ConstraintGraph g;
    std::vector<oracle::SimpleConstraint> accepted;
    for (const auto& c : t.constraints) {
      try {
        g.add(oracle::to_constraint(c));
        accepted.push_back(c);
      } catch (const UniverseInconsistency&) {
      }
    }
    auto sol = g.solve();
    std::array<int, 4> vals{};
    for (int a = 0; a < 4; ++a) {
      auto it = sol.find(Atom::param(static_cast<std::uint32_t>(a)));
      vals[a] = it == sol.end() ? 0 : static_cast<int>(it->second);
    }
    for (const auto& c : accepted) {
      EXPECT_TRUE(oracle::holds(c, vals)) << hott::to_string(oracle::to_constraint(c));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(UniverseProperty, AgreesWithBruteForce) {
  std::mt19937 rng(29);
  int disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto t = oracle::random_trial(rng);
    if (auto d = oracle::universe_disagreement(t)) {
      ADD_FAILURE() << *d;
      ++disagreements;
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(UniverseProperty, SelfEntailment) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = oracle::random_trial(rng);
    ConstraintGraph g;
    std::vector<Constraint> in;
    for (const auto& c : t.constraints) {
      try {
        g.add(oracle::to_constraint(c));
        in.push_back(oracle::to_constraint(c));
      } catch (const UniverseInconsistency&) {
      }
    }
    for (const auto& c : in) EXPECT_TRUE(g.entails(c)) << hott::to_string(c);
  }
}

TEST(UniverseProperty, InconsistencyIsMonotone) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = oracle::random_trial(rng);
    ConstraintGraph small;
    ConstraintGraph big;
    auto extra = oracle::random_constraint(rng, t.atoms);
    try {
      big.add(oracle::to_constraint(extra));
    } catch (const UniverseInconsistency&) {
      continue;
    }
    for (const auto& c : t.constraints) {
      bool small_ok = true;
      try {
        small.add(oracle::to_constraint(c));
      } catch (const UniverseInconsistency&) {
        small_ok = false;
      }
      bool big_ok = true;
      try {
        big.add(oracle::to_constraint(c));
      } catch (const UniverseInconsistency&) {
        big_ok = false;
      }
      if (!small_ok) EXPECT_FALSE(big_ok) << hott::to_string(oracle::to_constraint(c));
      if (!small_ok || !big_ok) break;
    }
  }
}

TEST(UniverseProperty, EntailedAdditionKeepsConsistency) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = oracle::random_trial(rng);
    ConstraintGraph g;
    for (const auto& c : t.constraints) {
      try {
        g.add(oracle::to_constraint(c));
      } catch (const UniverseInconsistency&) {
      }
    }
    Constraint q = oracle::to_constraint(t.query);
    if (g.entails(q)) EXPECT_NO_THROW(g.add(q));
  }
}

TEST(Instantiate, FreshMetasPerUse) {
  auto a = instantiate(1, {});
  auto b = instantiate(1, {});
  ASSERT_EQ(a.levels.size(), 1u);
  EXPECT_EQ(a.levels[0].kind(), Level::Kind::Meta);
  EXPECT_FALSE(a.levels[0] == b.levels[0]);
}

TEST(Instantiate, ConstraintsCopied) {
  std::vector<Constraint> stored{lt(Level::param(0), Level::param(1))};
  auto inst = instantiate(2, stored);
  ASSERT_EQ(inst.constraints.size(), 1u);
  EXPECT_TRUE(inst.constraints[0].lhs == inst.levels[0]);
  EXPECT_TRUE(inst.constraints[0].rhs == inst.levels[1]);
  EXPECT_EQ(inst.constraints[0].rel, Rel::Lt);
}

TEST(Instantiate, ExplicitLevelsAndArity) {
  std::vector<Level> ex{Level::nat(2)};
  auto inst = instantiate(1, {}, ex);
  EXPECT_TRUE(inst.levels[0] == Level::nat(2));
  std::vector<Level> two{Level::zero(), Level::zero()};
  EXPECT_THROW(instantiate(1, {}, two), ArityMismatch);
}

TEST(Instantiate, GlobalsShared) {
  // Monomorphic definitions mention Globals, which instantiation leaves alone.
  Level g = Level::global("test.shared");
  std::vector<Constraint> stored{le(g, Level::param(0))};
  auto a = instantiate(1, stored);
  auto b = instantiate(1, stored);
  EXPECT_TRUE(a.constraints[0].lhs == g);
  EXPECT_TRUE(b.constraints[0].lhs == g);
  EXPECT_EQ(intern_global("test.shared"), g.id());
}
