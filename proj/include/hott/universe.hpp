#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hott/level.hpp"

namespace hott {

class UniverseInconsistency : public std::runtime_error {
 public:
  UniverseInconsistency(std::vector<Constraint> cycle, std::vector<std::string> param_names = {});
  const std::vector<Constraint>& cycle() const { return cycle_; }
  std::string cycle_text(std::span<const std::string> param_names = {}) const;

 private:
  std::vector<Constraint> cycle_;
};

// Difference-constraint store over atomic levels.
//
// An edge from -> to with weight w encodes value(to) >= value(from) + w.
// `a <= b + k` is an edge a -> b of weight -k and `a < b` an edge of weight 1.
// The store is consistent iff it has no cycle of positive total weight; every
// atom carries an implicit edge Zero -> atom of weight 0.
class ConstraintGraph {
 public:
  struct Mark {
    std::size_t edges = 0;
    std::size_t verbatim = 0;
  };

  ConstraintGraph();

  // Throws UniverseInconsistency (leaving the graph unchanged) on failure.
  void add(const Constraint& c);
  bool entails(const Constraint& c) const;
  bool consistent_with(const Constraint& c) const;

  // Minimal natural assignment (longest path from Zero).
  std::map<Atom, std::int64_t> solve() const;

  void register_atom(Atom a);
  bool knows(Atom a) const { return index_.count(a) != 0; }
  std::vector<Atom> atoms() const;

  // Constraints exactly as passed to add(), in order.
  const std::vector<Constraint>& constraints() const { return verbatim_; }
  // Atomic edges (without the implicit Zero edges) rendered as constraints.
  std::vector<Constraint> edge_constraints() const;

  // Longest weight over paths from -> to, if any path exists.
  std::optional<std::int64_t> longest_path(Atom from, Atom to) const;

  // Implied constraints among `keep` (plus Zero), transitively reduced.
  std::vector<Constraint> project(std::span<const Atom> keep) const;

  Mark checkpoint() const { return {edges_.size(), verbatim_.size()}; }
  void rollback(Mark m);

  std::size_t edge_count() const { return edges_.size(); }

 private:
  struct Edge {
    int from;
    int to;
    std::int64_t weight;
  };

  int node(Atom a);
  int find(Atom a) const;
  void add_le(const Level& lhs, const Level& rhs);
  void add_atomic(Atom a, std::int64_t k, const NormalLevel& rhs);
  void add_edge(int from, int to, std::int64_t w);
  bool entails_atomic(Atom a, std::int64_t k, const NormalLevel& rhs) const;
  bool entails_le(const Level& lhs, const Level& rhs) const;
  const std::vector<std::int64_t>& distances_from(int src) const;
  Constraint edge_constraint(const Edge& e) const;

  std::vector<Atom> atoms_;
  std::map<Atom, int> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<Constraint> verbatim_;
  mutable std::unordered_map<int, std::vector<std::int64_t>> dist_cache_;
};

// Free-function forms with value semantics.
ConstraintGraph add_constraint(ConstraintGraph g, const Constraint& c);
bool entails(const ConstraintGraph& g, const Constraint& c);
std::map<Atom, std::int64_t> solve_assignment(const ConstraintGraph& g);

// Polymorphic instantiation: each parameter becomes a fresh Meta unless the
// caller supplies explicit levels; stored constraints come back instantiated.
struct Instantiation {
  std::vector<Level> levels;
  std::vector<Constraint> constraints;
};

class ArityMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instantiation instantiate(std::size_t param_count, std::span<const Constraint> stored,
                          std::span<const Level> explicit_levels = {});

}  // namespace hott
