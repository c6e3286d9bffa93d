#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hott {

// Atomic universe levels. Zero is the floor; every other atom is >= Zero.
enum class AtomKind : std::uint8_t { Zero, Param, Global, Meta };

struct Atom {
  AtomKind kind = AtomKind::Zero;
  std::uint32_t id = 0;

  static Atom zero() { return {}; }
  static Atom param(std::uint32_t i) { return {AtomKind::Param, i}; }
  static Atom global(std::uint32_t i) { return {AtomKind::Global, i}; }
  static Atom meta(std::uint32_t i) { return {AtomKind::Meta, i}; }

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

// Process-wide interning of monomorphic level names.
std::uint32_t intern_global(std::string_view name);
const std::string& global_name(std::uint32_t id);

// Fresh solver variables are unique per process.
std::uint32_t fresh_level_meta();

class Level {
 public:
  enum class Kind : std::uint8_t { Zero, Param, Global, Meta, Succ, Max };

  Level();  // Zero

  static Level zero() { return {}; }
  static Level param(std::uint32_t index);
  static Level global(std::uint32_t id);
  static Level global(std::string_view name) { return global(intern_global(name)); }
  static Level meta(std::uint32_t id);
  static Level fresh_meta() { return meta(fresh_level_meta()); }
  static Level atom(Atom a);
  static Level succ(Level l);
  static Level max(Level a, Level b);
  static Level nat(std::uint32_t n);  // Succ^n(Zero)

  Kind kind() const;
  std::uint32_t id() const;     // Param/Global/Meta
  const Level& base() const;    // Succ
  const Level& lhs() const;     // Max
  const Level& rhs() const;     // Max
  Atom as_atom() const;         // Zero/Param/Global/Meta only
  bool is_atom() const { return kind() != Kind::Succ && kind() != Kind::Max; }

  // Structural comparison; semantic equality lives in ConstraintGraph.
  bool operator==(const Level& other) const;

  bool has_meta() const;
  bool has_param() const;

 private:
  struct Node;
  explicit Level(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

// max(constant, a1 + k1, ..., an + kn); constant is dropped when dominated.
struct NormalLevel {
  std::uint32_t constant = 0;
  std::map<Atom, std::uint32_t> offsets;

  bool operator==(const NormalLevel&) const = default;
};

NormalLevel normalize(const Level& l);
Level from_normal(const NormalLevel& n);

Level map_atoms(const Level& l, const std::function<Level(Atom)>& f);
Level instantiate_params(const Level& l, std::span<const Level> args);
void collect_atoms(const Level& l, std::vector<Atom>& out);

// Printing. Param names are looked up positionally; missing names print as `u<i>`.
std::string atom_to_string(Atom a, std::span<const std::string> param_names = {});
std::string to_string(const Level& l, std::span<const std::string> param_names = {});

enum class Rel : std::uint8_t { Le, Lt, Eq };

struct Constraint {
  Level lhs;
  Rel rel = Rel::Le;
  Level rhs;

  bool operator==(const Constraint&) const = default;
};

std::string to_string(const Constraint& c, std::span<const std::string> param_names = {});
Constraint instantiate_params(const Constraint& c, std::span<const Level> args);

}  // namespace hott
