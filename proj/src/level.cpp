#include "hott/level.hpp"

#include <atomic>
#include <cassert>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace hott {

namespace {

struct GlobalTable {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> ids;
};

GlobalTable& globals() {
  static GlobalTable t;
  return t;
}

std::atomic<std::uint32_t> next_meta{1};

}  // namespace

std::uint32_t intern_global(std::string_view name) {
  auto& t = globals();
  std::lock_guard lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& global_name(std::uint32_t id) {
  auto& t = globals();
  std::lock_guard lock(t.mu);
  return t.names.at(id);
}

std::uint32_t fresh_level_meta() { return next_meta.fetch_add(1); }

struct Level::Node {
  Kind kind;
  std::uint32_t id = 0;
  Level a;
  Level b;
  bool has_meta = false;
  bool has_param = false;
};

Level::Level() = default;
Level::Level(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Level Level::param(std::uint32_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->id = index;
  n->has_param = true;
  return Level(std::move(n));
}

Level Level::global(std::uint32_t id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Global;
  n->id = id;
  return Level(std::move(n));
}

Level Level::meta(std::uint32_t id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meta;
  n->id = id;
  n->has_meta = true;
  return Level(std::move(n));
}

Level Level::atom(Atom a) {
  switch (a.kind) {
    case AtomKind::Zero: return zero();
    case AtomKind::Param: return param(a.id);
    case AtomKind::Global: return global(a.id);
    case AtomKind::Meta: return meta(a.id);
  }
  return zero();
}

Level Level::succ(Level l) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Succ;
  n->has_meta = l.has_meta();
  n->has_param = l.has_param();
  n->a = std::move(l);
  return Level(std::move(n));
}

Level Level::max(Level a, Level b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->has_meta = a.has_meta() || b.has_meta();
  n->has_param = a.has_param() || b.has_param();
  n->a = std::move(a);
  n->b = std::move(b);
  return Level(std::move(n));
}

Level Level::nat(std::uint32_t k) {
  Level l;
  for (std::uint32_t i = 0; i < k; ++i) l = succ(l);
  return l;
}

Level::Kind Level::kind() const { return node_ ? node_->kind : Kind::Zero; }
std::uint32_t Level::id() const { return node_ ? node_->id : 0; }
const Level& Level::base() const { return node_->a; }
const Level& Level::lhs() const { return node_->a; }
const Level& Level::rhs() const { return node_->b; }
bool Level::has_meta() const { return node_ && node_->has_meta; }
bool Level::has_param() const { return node_ && node_->has_param; }

Atom Level::as_atom() const {
  switch (kind()) {
    case Kind::Zero: return Atom::zero();
    case Kind::Param: return Atom::param(id());
    case Kind::Global: return Atom::global(id());
    case Kind::Meta: return Atom::meta(id());
    default: throw std::logic_error("level is not atomic");
  }
}

bool Level::operator==(const Level& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Zero: return true;
    case Kind::Param:
    case Kind::Global:
    case Kind::Meta: return id() == other.id();
    case Kind::Succ: return base() == other.base();
    case Kind::Max: return lhs() == other.lhs() && rhs() == other.rhs();
  }
  return false;
}

namespace {

void normalize_into(const Level& l, std::uint32_t shift, NormalLevel& out) {
  switch (l.kind()) {
    case Level::Kind::Zero:
      out.constant = std::max(out.constant, shift);
      return;
    case Level::Kind::Succ:
      normalize_into(l.base(), shift + 1, out);
      return;
    case Level::Kind::Max:
      normalize_into(l.lhs(), shift, out);
      normalize_into(l.rhs(), shift, out);
      return;
    default: {
      auto [it, inserted] = out.offsets.emplace(l.as_atom(), shift);
      if (!inserted) it->second = std::max(it->second, shift);
    }
  }
}

}  // namespace

NormalLevel normalize(const Level& l) {
  NormalLevel n;
  normalize_into(l, 0, n);
  for (const auto& [atom, k] : n.offsets) {
    if (k >= n.constant) {
      n.constant = 0;
      break;
    }
  }
  return n;
}

Level from_normal(const NormalLevel& n) {
  std::vector<Level> parts;
  if (n.constant > 0 || n.offsets.empty()) parts.push_back(Level::nat(n.constant));
  for (const auto& [atom, k] : n.offsets) {
    Level l = Level::atom(atom);
    for (std::uint32_t i = 0; i < k; ++i) l = Level::succ(l);
    parts.push_back(l);
  }
  Level acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = Level::max(*it, acc);
  return acc;
}

Level map_atoms(const Level& l, const std::function<Level(Atom)>& f) {
  switch (l.kind()) {
    case Level::Kind::Succ: return Level::succ(map_atoms(l.base(), f));
    case Level::Kind::Max: return Level::max(map_atoms(l.lhs(), f), map_atoms(l.rhs(), f));
    default: return f(l.as_atom());
  }
}

Level instantiate_params(const Level& l, std::span<const Level> args) {
  if (!l.has_param()) return l;
  return map_atoms(l, [&](Atom a) {
    if (a.kind == AtomKind::Param) {
      if (a.id >= args.size()) throw std::out_of_range("level parameter out of range");
      return args[a.id];
    }
    return Level::atom(a);
  });
}

void collect_atoms(const Level& l, std::vector<Atom>& out) {
  switch (l.kind()) {
    case Level::Kind::Succ: collect_atoms(l.base(), out); return;
    case Level::Kind::Max:
      collect_atoms(l.lhs(), out);
      collect_atoms(l.rhs(), out);
      return;
    default: out.push_back(l.as_atom());
  }
}

std::string atom_to_string(Atom a, std::span<const std::string> param_names) {
  switch (a.kind) {
    case AtomKind::Zero: return "0";
    case AtomKind::Param:
      if (a.id < param_names.size()) return param_names[a.id];
      return "u" + std::to_string(a.id);
    case AtomKind::Global: return global_name(a.id);
    case AtomKind::Meta: return "?l" + std::to_string(a.id);
  }
  return "?";
}

std::string to_string(const Level& l, std::span<const std::string> param_names) {
  switch (l.kind()) {
    case Level::Kind::Succ: {
      std::uint32_t k = 0;
      const Level* cur = &l;
      while (cur->kind() == Level::Kind::Succ) {
        ++k;
        cur = &cur->base();
      }
      if (cur->kind() == Level::Kind::Zero) return std::to_string(k);
      return to_string(*cur, param_names) + "+" + std::to_string(k);
    }
    case Level::Kind::Max:
      return "max(" + to_string(l.lhs(), param_names) + ", " + to_string(l.rhs(), param_names) + ")";
    default: return atom_to_string(l.as_atom(), param_names);
  }
}

std::string to_string(const Constraint& c, std::span<const std::string> param_names) {
  const char* op = c.rel == Rel::Le ? " <= " : c.rel == Rel::Lt ? " < " : " = ";
  return to_string(c.lhs, param_names) + op + to_string(c.rhs, param_names);
}

Constraint instantiate_params(const Constraint& c, std::span<const Level> args) {
  return {instantiate_params(c.lhs, args), c.rel, instantiate_params(c.rhs, args)};
}

}  // namespace hott
