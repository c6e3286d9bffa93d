#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hott/environment.hpp"
#include "hott/reducer.hpp"
#include "hott/syntax.hpp"
#include "hott/term.hpp"
#include "hott/universe.hpp"

namespace hott {

// Level comparisons that record what they need: an unentailed comparison is
// added to the session graph, and a refusal keeps the offending cycle.
class RecordingLevels : public ConvHooks {
 public:
  RecordingLevels(ConstraintGraph& g, bool type_in_type) : g_(g), tit_(type_in_type) {}
  bool level_le(const Level& a, const Level& b) override;
  bool level_eq(const Level& a, const Level& b) override;
  std::size_t checkpoint() override;
  void rollback(std::size_t mark) override;

  bool require(const Constraint& c);

  std::optional<UniverseInconsistency> failure;

 private:
  ConstraintGraph& g_;
  bool tit_;
  std::vector<ConstraintGraph::Mark> marks_;
};

class TypeChecker {
 public:
  TypeChecker(const Environment& env, ConstraintGraph& g, std::vector<std::string> level_names = {});

  Term infer(Telescope& ctx, const Term& t);
  void check(Telescope& ctx, const Term& t, const Term& expected);
  // t must be a type; returns its universe level.
  Level infer_sort(Telescope& ctx, const Term& t);

  bool conv(const Term& a, const Term& b);
  bool subtype(const Term& a, const Term& b);

  const Reducer& reducer() const { return red_; }
  std::string show(const Telescope& ctx, const Term& t) const;

  // Observer for every Id node inferred, with its context.
  std::function<void(const Telescope&, const Term&)> on_id;

 private:
  Term whnf(const Term& t) const { return red_.whnf(t); }
  Term expect_pi(Telescope& ctx, const Term& fn_term, const Term& type);
  Term expect_tag(Telescope& ctx, const Term& of, const Term& type, Tag tag, ErrorKind kind, const char* what);
  void require_subtype(Telescope& ctx, const Term& got, const Term& expected, const Term& at);
  void check_motive(Telescope& ctx, const Term& motive, const Term& domain);
  Term infer_const(const Term& t);

  const Environment& env_;
  ConstraintGraph& g_;
  std::vector<std::string> level_names_;
  Reducer red_;
  RecordingLevels hooks_;
};

// Kernel-level declaration: already elaborated, not yet generalised.
struct KernelDecl {
  std::string name;
  DefKind kind = DefKind::Definition;
  bool opaque = false;
  std::vector<std::string> level_params;
  Term type;
  std::optional<Term> body;
  bool is_class = false;
  std::optional<std::uint32_t> instance_priority;
  bool monomorphic = false;
  SourceSpan span;
  // Level holes the user left open (bare `Type`); these generalise when they
  // occur in the type. Unset means every universe hole of the type does.
  std::optional<std::set<std::uint32_t>> generic_levels;
};

// Kernel-checks, generalises level holes into parameters (or their least
// solutions), computes axiom dependencies and extends env.
const Definition& add_kernel_decl(Environment& env, KernelDecl decl);

// Elaborates then kernel-checks one parsed declaration.
const Definition& check_declaration(Environment& env, const Decl& decl, const std::string& file = "");

}  // namespace hott
