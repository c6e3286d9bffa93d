#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "harness.hpp"
#include "hott/print.hpp"

using namespace hott;

namespace {

const std::vector<std::string> kCorpus{"Basics.hott",   "Equivalences.hott",         "Fin.hott",
                                       "Pointed.hott",  "HITs.hott",                 "Axioms.hott",
                                       "Univalence.hott", "EquivalenceVarieties.hott", "FunextClass.hott",
                                       "SuspCircle.hott"};

std::size_t line_count(const std::string& s) { return std::count(s.begin(), s.end(), '\n') + 1; }

}  // namespace

TEST(Parse, ExpressionShapes) {
  EXPECT_EQ(parse_expr("fun (x : Nat) => x")->kind, SKind::Lam);
  EXPECT_EQ(parse_expr("forall (A : Type{0}), A -> A")->kind, SKind::Pi);
  EXPECT_EQ(parse_expr("Nat -> Nat")->kind, SKind::Arrow);
  EXPECT_EQ(parse_expr("Sigma (n : Nat), n = n")->kind, SKind::Sigma);
  EXPECT_EQ(parse_expr("p.1")->kind, SKind::Proj);
  EXPECT_EQ(parse_expr("(zero , tt)")->kind, SKind::Pair);
  EXPECT_EQ(parse_expr("_")->kind, SKind::Hole);
  EXPECT_EQ(parse_expr("42")->num, 42u);

  auto app = parse_expr("f a b");
  ASSERT_EQ(app->kind, SKind::App);
  EXPECT_EQ(app->kids[1]->name, "b");
  EXPECT_EQ(app->kids[0]->kind, SKind::App);

  auto arrow = parse_expr("A -> B -> C");
  ASSERT_EQ(arrow->kind, SKind::Arrow);
  EXPECT_EQ(arrow->kids[1]->kind, SKind::Arrow);

  auto ty = parse_expr("Type{max(i, j+1)}");
  ASSERT_EQ(ty->kind, SKind::Type);
  ASSERT_TRUE(ty->level.has_value());
  EXPECT_EQ(ty->level->kind, SLevel::Kind::Max);

  auto inst = parse_expr("c@{i 2}");
  EXPECT_EQ(inst->levels.size(), 2u);

  auto impl = parse_expr("f {Nat} x");
  EXPECT_TRUE(impl->kids[0]->implicit_arg);
}

TEST(Parse, Declarations) {
  SourceModule m = parse_module(R"(import "Other"
[class] def C {i} (A : Type{i}) : Type{i} := A
[instance 7] axiom c : C Nat
opaque def o : Nat := zero
)");
  ASSERT_EQ(m.imports.size(), 1u);
  EXPECT_EQ(m.imports[0].path, "Other");
  ASSERT_EQ(m.decls.size(), 3u);
  EXPECT_TRUE(m.decls[0].has_attr(Attribute::Kind::Class));
  EXPECT_EQ(m.decls[0].level_params, std::vector<std::string>{"i"});
  EXPECT_EQ(m.decls[1].kind, DeclKind::Axiom);
  EXPECT_EQ(m.decls[1].instance_priority(), 7u);
  EXPECT_EQ(m.decls[2].kind, DeclKind::OpaqueDef);
  EXPECT_EQ(m.decls[2].span.line, 4u);
}

TEST(Parse, LevelNamesCollectedInFirstUseOrder) {
  SourceModule m = parse_module("def idfun {A : Type{i}} (B : Type{j}) (a : A) : A := a\n");
  EXPECT_EQ(m.decls[0].level_params, (std::vector<std::string>{"i", "j"}));
}

TEST(Parse, Errors) {
  auto kind_at = [](std::string_view src) -> std::pair<ErrorKind, std::uint32_t> {
    try {
      parse_module(src);
    } catch (const HottError& e) {
      return {e.kind(), e.span().line};
    }
    return {ErrorKind::IllFormed, 0};
  };
  EXPECT_EQ(kind_at("axiom a : Nat := zero\n").first, ErrorKind::ParseError);
  EXPECT_EQ(kind_at("def a : Nat := \n").first, ErrorKind::ParseError);
  EXPECT_EQ(kind_at("def x : Nat := zero\ndef (y) : Nat := zero\n"), std::make_pair(ErrorKind::ParseError, 2u));
  EXPECT_EQ(kind_at("primitive p : Nat\n").first, ErrorKind::ParseError);
  EXPECT_NO_THROW(parse_module("primitive p : Nat\n", "<prelude>", true));
}

TEST(Parse, ErrorListsExpectedTokens) {
  try {
    parse_module("def a (x : Nat : Nat := x\n");
    FAIL();
  } catch (const HottError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_FALSE(e.expected_tokens.empty());
  }
}

TEST(ParseProperty, CorruptedCorpusFailsInside) {
  std::mt19937 rng(43);
  const std::vector<std::string> junk{")", "(", ":=", "=>", ",", "{", "}", "def", "@{", "."};
  int parse_errors = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::string& file = kCorpus[trial % kCorpus.size()];
    std::string src = harness::slurp(harness::corpus_file(file));
    const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, src.size())(rng);
    src.insert(pos, " " + junk[std::uniform_int_distribution<std::size_t>(0, junk.size() - 1)(rng)] + " ");
    try {
      parse_module(src, file);
    } catch (const HottError& e) {
      ASSERT_EQ(e.kind(), ErrorKind::ParseError) << e.what();
      EXPECT_EQ(e.span().file, file);
      EXPECT_GE(e.span().line, 1u);
      EXPECT_LE(e.span().line, line_count(src));
      EXPECT_GE(e.span().col, 1u);
      ++parse_errors;
    }
  }
  EXPECT_GT(parse_errors, 200);
}

TEST(Print, StableOnCorpus) {
  for (const std::string& f : kCorpus) {
    SourceModule m = parse_module(harness::slurp(harness::corpus_file(f)), f);
    const std::string once = print_module(m);
    const std::string twice = print_module(parse_module(once, f));
    EXPECT_EQ(once, twice) << f;
  }
}

TEST(Print, KernelTerms) {
  EXPECT_EQ(print_term(mk::lam("x", mk::nat(), mk::var(0))), "fun (x : Nat) => x");
  EXPECT_EQ(print_term(mk::numeral(3)), "3");
  EXPECT_EQ(print_term(mk::sort(Level::param(0)), {}, {"i"}), "Type{i}");
  // Shadowed binder names stay unambiguous.
  Term t = mk::lam("x", mk::nat(), mk::lam("x", mk::nat(), mk::var(1)));
  std::string s = print_term(t);
  auto reparsed = parse_expr(s);
  ASSERT_EQ(reparsed->kind, SKind::Lam);
  EXPECT_NE(s, "fun (x : Nat) => fun (x : Nat) => x");
}

TEST(Loader, ImportCycle) {
  try {
    harness::load_file(harness::fixture("imports/cycle_a.hott"));
    FAIL();
  } catch (const HottError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImportCycle);
    std::vector<std::string> want{"cycle_a.hott", "cycle_b.hott", "cycle_a.hott"};
    ASSERT_EQ(e.cycle.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      EXPECT_EQ(std::filesystem::path(e.cycle[i]).filename().string(), want[i]);
  }
}

TEST(Loader, DiamondVisitsOnce) {
  auto l = harness::load_file(harness::fixture("imports/top.hott"));
  EXPECT_EQ(l->visits(), 4u);
  ASSERT_EQ(l->files().size(), 4u);
  auto stem = [&](std::size_t i) { return std::filesystem::path(l->files()[i]).stem().string(); };
  EXPECT_EQ(stem(0), "bottom");
  EXPECT_EQ(stem(3), "top");
  EXPECT_TRUE(l->env().contains("top_val"));
}

TEST(Loader, MissingImport) {
  try {
    harness::load_file(harness::fixture("imports/missing.hott"));
    FAIL();
  } catch (const HottError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
    EXPECT_EQ(e.span().line, 2u);
    EXPECT_NE(std::string(e.what()).find("no_such_module"), std::string::npos);
  }
}

TEST(Loader, PreludeIsHidden) {
  auto l = harness::load_text("def one : Nat := 1\n");
  EXPECT_GT(l->prelude_count(), 0u);
  ASSERT_EQ(l->files().size(), 1u);
  auto defs = l->definitions_of(l->files()[0]);
  ASSERT_EQ(defs.size(), 1u);
  EXPECT_EQ(defs[0]->name, "one");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(harness::cli({"check", harness::corpus_file("Basics.hott")}).code, 0);
  EXPECT_EQ(harness::cli({"check", harness::fixture("bad_universe.hott")}).code, 1);
  EXPECT_EQ(harness::cli({"check", "/definitely/not/here.hott"}).code, 1);
  EXPECT_EQ(harness::cli({}).code, 2);
  EXPECT_EQ(harness::cli({"frobnicate", "x.hott"}).code, 2);
  EXPECT_EQ(harness::cli({"check"}).code, 2);
  EXPECT_EQ(harness::cli({"check", harness::corpus_file("Basics.hott"), "--instance-depth", "many"}).code, 2);
}

TEST(Cli, DiagnosticFormat) {
  auto r = harness::cli({"check", harness::fixture("bad_universe.hott")});
  ASSERT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad_universe.hott:2:1: error: universe inconsistency"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("\n  cycle: u < u\n"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, ImportCycleDiagnostic) {
  auto r = harness::cli({"check", harness::fixture("imports/cycle_a.hott")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("cycle_a.hott -> "), std::string::npos) << r.err;
}

TEST(Cli, ReportAxiomsFormat) {
  auto r = harness::cli({"report-axioms", harness::corpus_file("Axioms.hott")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("funext: funext\n"), std::string::npos);
  EXPECT_NE(r.out.find("apD10: <none>\n"), std::string::npos);
  auto one = harness::cli({"report-axioms", harness::corpus_file("Axioms.hott"), "path_forall"});
  EXPECT_EQ(one.out, "path_forall: funext\n");
}

TEST(Cli, Normalize) {
  auto r = harness::cli({"normalize", harness::corpus_file("Fin.hott"), "add"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("fun (m : Nat) => fun (n : Nat) =>", 0), 0u) << r.out;
  auto four = harness::cli({"normalize", harness::corpus_file("Fin.hott"), "add_two_two"});
  EXPECT_EQ(four.out, "refl\n");
  EXPECT_EQ(harness::cli({"normalize", harness::corpus_file("Fin.hott"), "nope"}).code, 1);
}

TEST(Cli, PrintUniverses) {
  auto r = harness::cli({"print-universes", harness::corpus_file("Equivalences.hott")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("RelEquiv.i < RelEquiv."), std::string::npos) << r.out;
}

TEST(Cli, TypeInTypeFlag) {
  EXPECT_EQ(harness::cli({"check", harness::fixture("type_in_type.hott")}).code, 1);
  EXPECT_EQ(harness::cli({"check", harness::fixture("type_in_type.hott"), "--type-in-type"}).code, 0);
}
