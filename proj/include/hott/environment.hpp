#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hott/errors.hpp"
#include "hott/term.hpp"
#include "hott/universe.hpp"

namespace hott {

enum class DefKind : std::uint8_t { Definition, Axiom, Primitive };

struct Definition {
  std::string name;
  std::vector<std::string> level_params;
  std::vector<Constraint> constraints;  // over Param atoms (and Globals)
  Term type;
  std::optional<Term> body;
  bool opaque = false;
  DefKind kind = DefKind::Definition;
  std::vector<std::string> axiom_deps;  // transitive, in declaration order
  bool is_class = false;
  std::optional<std::uint32_t> instance_priority;
  bool monomorphic = false;
  SourceSpan span;
  std::size_t order = 0;  // position in the environment

  bool unfoldable() const { return body.has_value() && !opaque; }
};

struct KernelOptions {
  bool type_in_type = false;
  bool sigma_eta = true;  // test hook: disabling it must break record-style proofs
  std::uint32_t instance_depth = 16;
};

// Per class head: instances in (priority ascending, declaration order).
class InstanceTable {
 public:
  struct Entry {
    std::string name;
    std::uint32_t priority;
    std::size_t order;
  };
  void add(const std::string& class_name, Entry e);
  const std::vector<Entry>& candidates(const std::string& class_name) const;
  std::size_t max_width() const;

 private:
  std::map<std::string, std::vector<Entry>> table_;
};

class Environment {
 public:
  Environment() = default;
  explicit Environment(KernelOptions opts) : options_(opts) {}

  const Definition* find(std::string_view name) const;
  const Definition& get(std::string_view name) const;  // throws UnknownName
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Throws DuplicateName. Registers instances under their class head.
  const Definition& add(Definition d);

  const std::vector<Definition>& definitions() const { return defs_; }
  const ConstraintGraph& graph() const { return graph_; }
  ConstraintGraph& graph() { return graph_; }
  const InstanceTable& instances() const { return instances_; }
  const KernelOptions& options() const { return options_; }
  KernelOptions& options() { return options_; }

  // Test hook for opacity properties.
  void set_opaque(std::string_view name, bool opaque);

 private:
  std::vector<Definition> defs_;
  std::unordered_map<std::string, std::size_t> index_;
  ConstraintGraph graph_;
  InstanceTable instances_;
  KernelOptions options_;
};

// Syntactic class head of an instance type: strip Pis, take the spine head.
std::optional<std::string> class_head(const Term& type);

// Names of constants occurring in t, in first-occurrence order.
void collect_constants(const Term& t, std::vector<std::string>& out);

// Transitive axiom set for a would-be definition referencing `type`/`body`.
std::vector<std::string> compute_axiom_deps(const Environment& env, const std::string& self, DefKind kind,
                                            const Term& type, const std::optional<Term>& body);

// Stored axiom set of a defined name; throws UnknownName.
std::vector<std::string> axioms_of(const Environment& env, std::string_view name);

}  // namespace hott
