#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hott/checker.hpp"
#include "hott/environment.hpp"
#include "hott/reducer.hpp"
#include "hott/syntax.hpp"
#include "hott/term.hpp"

namespace hott {

struct MetaInfo {
  Telescope ctx;
  Term type;  // scoped over ctx
  std::optional<Term> solution;  // closed: one lambda per ctx entry
  SourceSpan span;
};

// Metavariable store. Holes are closed metas applied to every variable of
// their context, so solving stays inside the pattern fragment.
class ElabProblem : public MetaLookup {
 public:
  std::uint32_t fresh(const Telescope& ctx, Term type, SourceSpan span);
  Term applied(std::uint32_t id) const;  // ?m x1 ... xn in the meta's own context
  Term fresh_applied(const Telescope& ctx, Term type, SourceSpan span) { return applied(fresh(ctx, std::move(type), std::move(span))); }

  const Term* solution(std::uint32_t id) const override;
  const MetaInfo& info(std::uint32_t id) const { return metas_.at(id); }
  std::size_t size() const { return metas_.size(); }

  void assign(std::uint32_t id, Term solution);
  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  Term zonk(const Term& t) const;

  struct Goal {
    std::uint32_t meta;
    SourceSpan span;
  };
  std::vector<Goal> instance_goals;

 private:
  std::vector<MetaInfo> metas_;
  std::vector<std::uint32_t> trail_;
};

// Unification as conversion with flexible heads: levels are left to the
// kernel, holes are assigned by pattern unification.
class UnifyHooks : public ConvHooks {
 public:
  UnifyHooks(ElabProblem& p, const Reducer& r) : p_(p), r_(r) {}
  bool level_le(const Level&, const Level&) override { return true; }
  bool level_eq(const Level&, const Level&) override { return true; }
  std::optional<bool> flex(const Term& a, const Term& b) override;
  std::size_t checkpoint() override { return p_.mark(); }
  void rollback(std::size_t m) override { p_.undo(m); }

  bool occurs_failure = false;

 private:
  bool solve(std::uint32_t id, const std::vector<Term>& args, const Term& rhs);

  ElabProblem& p_;
  const Reducer& r_;
};

bool unify(ElabProblem& p, const Environment& env, const Term& a, const Term& b);

class Elaborator {
 public:
  Elaborator(const Environment& env, std::vector<std::string> level_params);

  Term infer(Telescope& ctx, const SExpr& e, Term& type);
  Term check(Telescope& ctx, const SExpr& e, const Term& expected);
  Term elab_type(Telescope& ctx, const SExpr& e, Level* level = nullptr);

  // Solve pending class goals; with `final`, goals with unsolved metas are
  // attempted too and failures are reported.
  void resolve_instances(bool final);
  // Backward-chaining search for an inhabitant of `goal` in ctx; `depth` is
  // the remaining budget.
  Term resolve_instance(const Telescope& ctx, const Term& goal, std::uint32_t depth, const SourceSpan& at);

  // Zonk and reject leftover holes.
  Term finish(const Telescope& ctx, const Term& t, const SourceSpan& at);

  ElabProblem& problem() { return problem_; }
  const Reducer& reducer() const { return red_; }
  const std::vector<std::string>& level_params() const { return level_params_; }
  // Level holes created for bare `Type`.
  const std::set<std::uint32_t>& open_levels() const { return open_levels_; }

 private:
  struct Arg {
    const SExpr* surface = nullptr;
    bool implicit = false;
    std::optional<Term> kernel;  // pre-elaborated argument
    std::optional<Term> ktype;
  };

  Term whnf(const Term& t) const { return red_.whnf(t); }
  void unify_or_throw(const Telescope& ctx, const Term& got, const Term& expected, const SourceSpan& at);
  Level elab_level(const SLevel& l, const SourceSpan& at) const;
  Term new_type_meta(const Telescope& ctx, const SourceSpan& at);
  Term infer_head(Telescope& ctx, const SExpr& e, Term& type);
  Term apply_args(Telescope& ctx, Term fn, Term& type, const std::vector<Arg>& args, std::size_t from,
                  const SourceSpan& at);
  Term insert_implicits(Telescope& ctx, Term fn, Term& type, const SourceSpan& at);
  Term implicit_arg(Telescope& ctx, const Term& domain, const SourceSpan& at);
  Term elab_arg(Telescope& ctx, const Arg& a, const Term& expected);
  Term infer_arg(Telescope& ctx, const Arg& a, Term& type);
  Term keyword(Telescope& ctx, const std::string& kw, const std::vector<Arg>& args, const Term* expected,
               Term& type, const SourceSpan& at);
  Term keyword_core(Telescope& ctx, const std::string& kw, const std::vector<Arg>& args, const Term* expected,
                    Term& type, const SourceSpan& at);
  Term expect_shape(const Telescope& ctx, const Term& type, Tag tag, const char* what, const SourceSpan& at);
  Term binder_body(const Term& fn, int k) const;
  Term elab_binders(Telescope& ctx, const SExpr& e, std::size_t from, Tag tag, Level& level);
  Term infer_lambda(Telescope& ctx, const SExpr& e, std::size_t from, Term& type);
  Term motive(Telescope& ctx, const Arg& a, const Term& domain);
  Term kernel_type(const Telescope& ctx, const Term& t, const SourceSpan& at);
  bool is_flex(const Term& t) const;
  Term check_lambda(Telescope& ctx, const SExpr& e, std::size_t from, const Term& expected);
  bool is_class_type(const Term& t) const;
  std::string show(const Telescope& ctx, const Term& t) const;

  const Environment& env_;
  std::vector<std::string> level_params_;
  ElabProblem problem_;
  Reducer red_;
  std::set<std::uint32_t> open_levels_;
};

// Surface declaration to kernel declaration (not yet kernel-checked).
KernelDecl elaborate_decl(const Environment& env, const Decl& decl);

}  // namespace hott
