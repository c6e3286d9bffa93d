#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hott/level.hpp"

namespace hott {

// One tag per syntactic form of the core theory. Variables are de Bruijn
// indices (0 = innermost binder). Children that sit under binders are listed
// in the tag table (see binders_of).
enum class Tag : std::uint8_t {
  Var,
  Sort,
  Pi,         // domain, codomain[1]
  Lam,        // domain, body[1]
  App,        // fn, arg
  Sigma,      // first, second[1]
  Pair,       // fst, snd, annotation (the Sigma type)
  Proj1,      // pair
  Proj2,      // pair
  Sum,        // left, right
  Inl,        // value, annotation (the Sum type)
  Inr,        // value, annotation
  SumElim,    // motive, left-case, right-case, scrutinee
  Unit,
  Star,
  UnitElim,   // motive, case, scrutinee
  Empty,
  EmptyElim,  // motive, scrutinee
  Nat,
  Zero,
  Succ,       // n
  NatElim,    // motive, zero-case, succ-case[2], scrutinee
  Id,         // type, lhs, rhs
  Refl,       // type, point
  J,          // base, motive[2], refl-case, endpoint, path
  Transport,  // family[1], path, payload
  ApD,        // fn, path, family[1]
  Interval,
  IZero,
  IOne,
  Seg,
  IntervalInd,  // motive, zero-case, one-case, seg-cell, scrutinee
  Circle,
  Base,
  Loop,
  CircleInd,  // motive, base-case, loop-cell, scrutinee
  Susp,       // type
  North,      // type
  South,      // type
  Merid,      // point
  SuspInd,    // motive, north-case, south-case, merid-cell, scrutinee
  Coeq,       // f, g
  CoeqPoint,  // annotation (the Coeq type), point
  CoeqGlue,   // annotation, point
  CoeqInd,    // motive, point-case, glue-cell, scrutinee
  Trunc,      // type
  Tr,         // point
  TrPath,     // x, y
  TruncInd,   // motive, prop-witness, point-case, scrutinee
  Const,
  Meta,       // elaboration hole; never accepted by the kernel
};

struct TagInfo {
  const char* name;
  std::uint8_t arity;
  std::uint8_t binders[5];
  // Bit i set: child i is a type annotation fully determined by the term's
  // type, so conversion at a common type may skip it.
  std::uint8_t annotations;
};

const TagInfo& info(Tag t);
inline std::uint8_t binders_of(Tag t, std::size_t child) { return info(t).binders[child]; }

class Term;

struct Node {
  Tag tag;
  bool implicit = false;       // binder info on Pi/Lam; ignored by equality
  bool has_meta = false;       // contains a Meta node
  bool has_level_vars = false; // some Sort/Const level mentions a non-Zero atom
  std::uint32_t index = 0;     // Var index or Meta id
  std::uint32_t loose = 0;     // all free indices are < loose
  std::string name;            // binder hint (Pi/Lam/Sigma) or constant name
  Level level;                 // Sort
  std::vector<Level> levels;   // Const universe instance
  std::vector<Term> kids;
};

class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  explicit operator bool() const { return static_cast<bool>(node_); }
  const Node* operator->() const { return node_.get(); }
  const Node& operator*() const { return *node_; }
  const Node* get() const { return node_.get(); }

  Tag tag() const { return node_->tag; }
  bool is(Tag t) const { return node_ && node_->tag == t; }
  const Term& operator[](std::size_t i) const { return node_->kids[i]; }
  std::size_t arity() const { return node_->kids.size(); }

  bool same_node(const Term& o) const { return node_ == o.node_; }

 private:
  std::shared_ptr<const Node> node_;
};

// Construction. `make` validates arity against the tag table.
Term make(Tag tag, std::vector<Term> kids);
Term rebuild(const Term& t, std::vector<Term> kids);

namespace mk {
Term var(std::uint32_t i);
Term sort(Level l);
Term pi(std::string name, Term dom, Term cod, bool implicit = false);
Term lam(std::string name, Term dom, Term body, bool implicit = false);
Term app(Term f, Term a);
Term apps(Term f, std::initializer_list<Term> args);
Term apps(Term f, std::span<const Term> args);
Term sigma(std::string name, Term a, Term b);
Term pair(Term a, Term b, Term ann);
Term proj1(Term p);
Term proj2(Term p);
Term sum(Term a, Term b);
Term inl(Term a, Term ann);
Term inr(Term b, Term ann);
Term sum_elim(Term motive, Term l, Term r, Term s);
Term unit();
Term star();
Term unit_elim(Term motive, Term c, Term s);
Term empty();
Term empty_elim(Term motive, Term s);
Term nat();
Term zero();
Term succ(Term n);
Term numeral(std::uint32_t n);
Term nat_elim(Term motive, Term z, Term s, Term n);
Term id(Term ty, Term a, Term b);
Term refl(Term ty, Term a);
Term j(Term base, Term motive, Term d, Term endpoint, Term path);
Term transport(Term family, Term path, Term payload);
Term apd(Term f, Term path, Term family);
Term interval();
Term izero();
Term ione();
Term seg();
Term interval_ind(Term motive, Term a, Term b, Term p, Term x);
Term circle();
Term base();
Term loop();
Term circle_ind(Term motive, Term b, Term l, Term x);
Term susp(Term a);
Term north(Term a);
Term south(Term a);
Term merid(Term a);
Term susp_ind(Term motive, Term n, Term s, Term m, Term x);
Term coeq(Term f, Term g);
Term coeq_point(Term ann, Term a);
Term coeq_glue(Term ann, Term b);
Term coeq_ind(Term motive, Term c, Term g, Term x);
Term trunc(Term a);
Term tr(Term a);
Term tr_path(Term x, Term y);
Term trunc_ind(Term motive, Term hp, Term f, Term w);
Term constant(std::string name, std::vector<Level> levels = {});
Term meta(std::uint32_t id);
}  // namespace mk

class ShiftUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Displace every free index >= cutoff by amount. Throws ShiftUnderflow when a
// negative shift would capture an index in [cutoff, cutoff + |amount|).
Term shift(const Term& t, std::int64_t amount, std::uint32_t cutoff = 0);

// Replace Var(target) by `replacement` (which lives in the context outside the
// target binder) and close the gap by decrementing indices above target.
Term subst(const Term& t, std::uint32_t target, const Term& replacement);

// Substitute the args.size() innermost binders of `body`; args[0] is the
// outermost one. All args live in the outer context.
Term instantiate(const Term& body, std::span<const Term> args);
Term instantiate1(const Term& body, const Term& arg);

// Universe-level substitution on every Sort and Const inside t.
Term instantiate_levels(const Term& t, std::span<const Level> levels);
Term map_levels(const Term& t, const std::function<Level(const Level&)>& f);
void collect_level_atoms(const Term& t, std::vector<Atom>& out);

bool syntactic_equal(const Term& a, const Term& b);
bool well_scoped(const Term& t, std::uint32_t depth);
bool has_free_var(const Term& t, std::uint32_t index);
std::size_t term_size(const Term& t);

// Decompose an application spine: head and arguments in order.
Term spine(const Term& t, std::vector<Term>& args);

struct TelescopeEntry {
  std::string name;
  Term type;  // scoped over the preceding entries
};

class Telescope {
 public:
  Telescope() = default;
  explicit Telescope(std::vector<TelescopeEntry> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void push(std::string name, Term type) { entries_.push_back({std::move(name), std::move(type)}); }
  void pop() { entries_.pop_back(); }

  // Type of Var(i) in the full context, shifted to be valid there.
  Term type_of(std::uint32_t i) const;
  const std::string& name_of(std::uint32_t i) const;
  const TelescopeEntry& at(std::size_t k) const { return entries_[k]; }
  const std::vector<TelescopeEntry>& entries() const { return entries_; }

  bool well_scoped() const;

 private:
  std::vector<TelescopeEntry> entries_;
};

}  // namespace hott
