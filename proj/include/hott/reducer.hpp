#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "hott/environment.hpp"
#include "hott/term.hpp"
#include "hott/universe.hpp"

namespace hott {

// Solutions of elaboration holes, consulted by the reducer when present.
class MetaLookup {
 public:
  virtual ~MetaLookup() = default;
  virtual const Term* solution(std::uint32_t id) const = 0;
};

// Apply a closed meta solution to its spine arguments, β-reducing the
// solution's own binders.
Term apply_solution(const Term& solution, std::span<const Term> args);

class Reducer {
 public:
  explicit Reducer(const Environment& env, const MetaLookup* metas = nullptr) : env_(env), metas_(metas) {}

  // β, projections, ι and HIT point rules; δ only where a scrutinee is forced.
  Term whnf_core(const Term& t) const;
  Term whnf(const Term& t) const;
  Term normalize(const Term& t) const;

  // One δ step on the spine head, if it is a transparent constant.
  std::optional<Term> unfold(const Term& t) const;
  const Definition* unfoldable_head(const Term& t) const;

  const Environment& env() const { return env_; }
  bool sigma_eta() const { return env_.options().sigma_eta; }

 private:
  const Environment& env_;
  const MetaLookup* metas_;
};

// Conversion is parameterised over what level comparisons mean and over
// flexible (hole-headed) terms, so the pure decision procedure, the checker
// and the unifier share one engine.
class ConvHooks {
 public:
  virtual ~ConvHooks() = default;
  virtual bool level_le(const Level& a, const Level& b) = 0;
  virtual bool level_eq(const Level& a, const Level& b) = 0;
  // nullopt: neither side is flexible.
  virtual std::optional<bool> flex(const Term&, const Term&) { return std::nullopt; }
  virtual std::size_t checkpoint() { return 0; }
  virtual void rollback(std::size_t) {}
};

// Entailment against a read-only graph.
class PureLevels : public ConvHooks {
 public:
  PureLevels(const ConstraintGraph& g, bool type_in_type) : g_(g), tit_(type_in_type) {}
  bool level_le(const Level& a, const Level& b) override;
  bool level_eq(const Level& a, const Level& b) override;

 private:
  const ConstraintGraph& g_;
  bool tit_;
};

class Converter {
 public:
  Converter(const Reducer& r, ConvHooks& hooks) : r_(r), hooks_(hooks) {}
  bool conv(const Term& a, const Term& b) { return compare(a, b, false); }
  bool subtype(const Term& a, const Term& b) { return compare(a, b, true); }

 private:
  bool compare(const Term& a, const Term& b, bool sub);
  bool lazy(Term a, Term b, bool sub);
  bool structural(const Term& a, const Term& b, bool sub);
  bool same_const_spine(const Term& a, const Term& b);
  bool levels_eq(const Term& a, const Term& b);

  const Reducer& r_;
  ConvHooks& hooks_;
};

bool conv(const Environment& env, const Term& a, const Term& b, const ConstraintGraph& g);
bool subtype(const Environment& env, const Term& a, const Term& b, const ConstraintGraph& g);
Term whnf(const Environment& env, const Term& t);
Term normalize(const Environment& env, const Term& t);

}  // namespace hott
