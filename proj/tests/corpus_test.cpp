#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "harness.hpp"
#include "hott/print.hpp"

using namespace hott;

namespace {

struct ManifestLine {
  std::string file;
  int tier = 0;
  std::string report;
};

std::vector<ManifestLine> manifest() {
  std::vector<ManifestLine> out;
  std::istringstream in(harness::slurp(harness::corpus_file("manifest")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ManifestLine m;
    ls >> m.file >> m.tier;
    std::getline(ls >> std::ws, m.report);
    out.push_back(m);
  }
  return out;
}

const Loader& fin() {
  static auto l = harness::load_file(harness::corpus_file("Fin.hott"));
  return *l;
}

bool has_type(const Environment& env, const Term& t, const Term& ty) {
  ConstraintGraph g = env.graph();
  TypeChecker tc(env, g);
  Telescope ctx;
  try {
    tc.check(ctx, t, ty);
    return true;
  } catch (const HottError&) {
    return false;
  }
}

Term fin_of(std::uint32_t n) { return mk::app(mk::constant("Fin"), mk::numeral(n)); }

}  // namespace

TEST(Fin, UnfoldsToIteratedSum) {
  // Fin n = (...((Empty + Unit) + Unit)...) + Unit with n summands of Unit.
  const Environment& env = fin().env();
  Term want = mk::empty();
  for (std::uint32_t n = 0; n <= 4; ++n) {
    EXPECT_TRUE(conv(env, fin_of(n), want, env.graph())) << n;
    EXPECT_TRUE(syntactic_equal(normalize(env, fin_of(n)), want)) << n;
    want = mk::sum(want, mk::unit());
  }
}

TEST(Fin, TwoHasExactlyTwoCanonicalElements) {
  // Fin 2 = (Empty + Unit) + Unit: the closed canonical forms are inl (inr tt)
  // and inr tt; inl (inl e) would need a closed e : Empty.
  const Environment& env = fin().env();
  Term f2 = fin_of(2);
  Term f1 = mk::sum(mk::empty(), mk::unit());
  Term first = mk::inl(mk::inr(mk::star(), f1), f2);
  Term second = mk::inr(mk::star(), f2);
  EXPECT_TRUE(has_type(env, first, f2));
  EXPECT_TRUE(has_type(env, second, f2));
  EXPECT_FALSE(conv(env, first, second, env.graph()));
  EXPECT_TRUE(conv(env, mk::constant("fin2_first"), first, env.graph()));
  EXPECT_TRUE(conv(env, mk::constant("fin2_second"), second, env.graph()));
  EXPECT_FALSE(has_type(env, mk::inl(mk::star(), f2), f2));
}

TEST(Fin, CardinalityOfFinN) {
  const Environment& env = fin().env();
  for (unsigned n = 0; n <= 5; ++n) {
    auto [t, ty] = harness::elab(env, "fcard (Fin " + std::to_string(n) + ")");
    EXPECT_TRUE(syntactic_equal(ty, mk::nat()));
    EXPECT_TRUE(syntactic_equal(normalize(env, t), mk::numeral(n))) << n;
  }
  auto [b, bty] = harness::elab(env, "fcard Bool");
  EXPECT_TRUE(syntactic_equal(normalize(env, b), mk::numeral(2)));
}

TEST(Fin, AdditionAgreesWithMachineArithmetic) {
  const Environment& env = fin().env();
  for (std::uint32_t m = 0; m <= 5; ++m)
    for (std::uint32_t n = 0; n <= 5; ++n) {
      Term t = mk::apps(mk::constant("add"), {mk::numeral(m), mk::numeral(n)});
      EXPECT_TRUE(syntactic_equal(normalize(env, t), mk::numeral(m + n))) << m << "+" << n;
    }
}

TEST(Equivalences, PathSplitZeroIsUnit) {
  auto l = harness::load_file(harness::corpus_file("Equivalences.hott"));
  const Environment& env = l->env();
  auto [t, ty] = harness::elab(env, "PathSplit 0 Nat Nat (fun n => n)");
  EXPECT_TRUE(syntactic_equal(normalize(env, t), mk::unit()));
  auto [one, oty] = harness::elab(env, "PathSplit 1 Nat Nat (fun n => n)");
  EXPECT_TRUE(normalize(env, one).is(Tag::Sigma));
}

TEST(HITs, IntervalRecComputesOnPoints) {
  auto l = harness::load_text(R"(import ")" + harness::corpus_file("HITs") + R"("
axiom P : Type{0}
axiom a : P
axiom b : P
axiom p : a = b
def at0 : P := interval_rec P a b p i0
def at1 : P := interval_rec P a b p i1
def along : I -> P := interval_rec P a b p
)");
  const Environment& env = l->env();
  EXPECT_TRUE(syntactic_equal(normalize(env, *env.get("at0").body), mk::constant("a")));
  EXPECT_TRUE(syntactic_equal(normalize(env, *env.get("at1").body), mk::constant("b")));
  // Applied to seg the eliminator is stuck: seg is not a point.
  Term on_seg = normalize(env, mk::app(*env.get("along").body, mk::seg()));
  EXPECT_FALSE(syntactic_equal(on_seg, mk::constant("a")));
}

TEST(Manifest, CoversEveryCorpusFile) {
  auto lines = manifest();
  std::map<std::string, int> tiers;
  for (const auto& m : lines) tiers[m.file] = m.tier;
  for (const auto& f : {"Basics.hott", "Equivalences.hott", "Fin.hott", "Pointed.hott", "HITs.hott", "Axioms.hott"})
    EXPECT_EQ(tiers[f], 1) << f;
  for (const auto& f : {"EquivalenceVarieties.hott", "FunextClass.hott", "Univalence.hott", "SuspCircle.hott"})
    EXPECT_EQ(tiers[f], 2) << f;
}

TEST(Manifest, MatchesReportPerFile) {
  std::map<std::string, std::string> want;
  for (const auto& m : manifest()) want[m.file] += m.report + "\n";
  for (const auto& [file, text] : want) {
    auto r = harness::cli({"report-axioms", harness::corpus_file(file)});
    ASSERT_EQ(r.code, 0) << file << "\n" << r.err;
    EXPECT_EQ(r.out, text) << file;
  }
}

TEST(Manifest, AxiomHygiene) {
  // The constructive files never mention an axiom.
  for (const auto& m : manifest()) {
    if (m.file != "Basics.hott" && m.file != "Fin.hott" && m.file != "HITs.hott" && m.file != "Pointed.hott")
      continue;
    EXPECT_EQ(m.report.substr(m.report.find(':')), ": <none>") << m.file << " " << m.report;
  }
}

TEST(Corpus, EveryDefinitionRechecks) {
  // Each stored definition is accepted again by a fresh checker against the
  // final environment.
  auto l = harness::load_file(harness::corpus_file("Univalence.hott"));
  const Environment& env = l->env();
  std::size_t n = 0;
  for (const Definition& d : env.definitions()) {
    ConstraintGraph g = env.graph();
    for (const Constraint& c : d.constraints) g.add(c);
    TypeChecker tc(env, g, d.level_params);
    Telescope ctx;
    EXPECT_NO_THROW(tc.infer_sort(ctx, d.type)) << d.name;
    if (d.body) EXPECT_NO_THROW(tc.check(ctx, *d.body, d.type)) << d.name;
    ++n;
  }
  EXPECT_GT(n, 80u);
}
