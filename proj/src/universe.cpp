#include "hott/universe.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace hott {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::min();

Level shifted(Level l, std::int64_t k) {
  for (std::int64_t i = 0; i < k; ++i) l = Level::succ(l);
  return l;
}

}  // namespace

UniverseInconsistency::UniverseInconsistency(std::vector<Constraint> cycle,
                                             std::vector<std::string> param_names)
    : std::runtime_error("universe inconsistency"), cycle_(std::move(cycle)) {
  (void)param_names;
}

std::string UniverseInconsistency::cycle_text(std::span<const std::string> param_names) const {
  std::string out;
  for (std::size_t i = 0; i < cycle_.size(); ++i) {
    if (i) out += ", ";
    out += to_string(cycle_[i], param_names);
  }
  return out;
}

ConstraintGraph::ConstraintGraph() {
  atoms_.push_back(Atom::zero());
  index_.emplace(Atom::zero(), 0);
  out_.emplace_back();
}

int ConstraintGraph::find(Atom a) const {
  auto it = index_.find(a);
  return it == index_.end() ? -1 : it->second;
}

int ConstraintGraph::node(Atom a) {
  if (int i = find(a); i >= 0) return i;
  int id = static_cast<int>(atoms_.size());
  atoms_.push_back(a);
  index_.emplace(a, id);
  out_.emplace_back();
  dist_cache_.clear();
  return id;
}

void ConstraintGraph::register_atom(Atom a) { node(a); }

std::vector<Atom> ConstraintGraph::atoms() const { return atoms_; }

void ConstraintGraph::rollback(Mark m) {
  while (edges_.size() > m.edges) {
    out_[edges_.back().from].pop_back();
    edges_.pop_back();
  }
  verbatim_.resize(std::min(verbatim_.size(), m.verbatim));
  dist_cache_.clear();
}

const std::vector<std::int64_t>& ConstraintGraph::distances_from(int src) const {
  auto it = dist_cache_.find(src);
  if (it != dist_cache_.end()) return it->second;
  std::vector<std::int64_t> dist(atoms_.size(), kUnreached);
  std::vector<char> queued(atoms_.size(), 0);
  std::deque<int> queue;
  dist[src] = 0;
  queue.push_back(src);
  queued[src] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    auto relax = [&](int to, std::int64_t w) {
      std::int64_t cand = dist[u] + w;
      if (cand > dist[to]) {
        dist[to] = cand;
        if (!queued[to]) {
          queued[to] = 1;
          queue.push_back(to);
        }
      }
    };
    for (int eid : out_[u]) relax(edges_[eid].to, edges_[eid].weight);
    if (u == 0)  // implicit floor edges Zero -> atom
      for (int v = 1; v < static_cast<int>(atoms_.size()); ++v) relax(v, 0);
  }
  return dist_cache_.emplace(src, std::move(dist)).first->second;
}

std::optional<std::int64_t> ConstraintGraph::longest_path(Atom from, Atom to) const {
  if (from == to) {
    int f = find(from);
    if (f < 0) return 0;
    auto d = distances_from(f)[f];
    return std::max<std::int64_t>(d, 0);
  }
  int f = find(from);
  int t = find(to);
  if (f < 0) {
    // An unregistered atom has no outgoing edges.
    return std::nullopt;
  }
  const auto& dist = distances_from(f);
  if (t < 0) {
    // Only reachable through its implicit floor edge.
    if (dist[0] == kUnreached) return std::nullopt;
    return dist[0];
  }
  if (dist[t] == kUnreached) return std::nullopt;
  return dist[t];
}

Constraint ConstraintGraph::edge_constraint(const Edge& e) const {
  Level a = Level::atom(atoms_[e.from]);
  Level b = Level::atom(atoms_[e.to]);
  if (e.weight == 0) return {a, Rel::Le, b};
  if (e.weight > 0) return {shifted(a, e.weight - 1), Rel::Lt, b};
  return {a, Rel::Le, shifted(b, -e.weight)};
}

std::vector<Constraint> ConstraintGraph::edge_constraints() const {
  std::vector<Constraint> out;
  for (const Edge& e : edges_) {
    out.push_back(edge_constraint(e));
  }
  return out;
}

void ConstraintGraph::add_edge(int from, int to, std::int64_t w) {
  if (from == to) {
    if (w > 0) throw UniverseInconsistency({edge_constraint({from, to, w})});
    return;
  }
  // Does `to` reach `from` with enough weight to close a positive cycle?
  const auto& dist = distances_from(to);
  if (dist[from] != kUnreached && dist[from] + w > 0) {
    // Reconstruct a heaviest path to -> from by walking tight edges backwards.
    std::vector<Constraint> path;
    int cur = from;
    std::vector<char> seen(atoms_.size(), 0);
    while (cur != to && !seen[cur]) {
      seen[cur] = 1;
      std::optional<Edge> pick;
      for (const Edge& e : edges_) {
        if (e.to == cur && dist[e.from] != kUnreached && dist[e.from] + e.weight == dist[cur]) {
          pick = e;
          break;
        }
      }
      if (!pick && cur != 0 && dist[0] != kUnreached && dist[0] == dist[cur]) pick = Edge{0, cur, 0};
      if (!pick) break;
      path.push_back(edge_constraint(*pick));
      cur = pick->from;
    }
    std::reverse(path.begin(), path.end());
    path.push_back(edge_constraint({from, to, w}));
    throw UniverseInconsistency(std::move(path));
  }
  edges_.push_back({from, to, w});
  out_[from].push_back(static_cast<int>(edges_.size()) - 1);
  dist_cache_.clear();
}

void ConstraintGraph::add_atomic(Atom a, std::int64_t k, const NormalLevel& rhs) {
  std::vector<std::pair<Atom, std::int64_t>> parts;
  for (const auto& [b, m] : rhs.offsets) parts.emplace_back(b, m);
  if (rhs.constant > 0 || parts.empty()) parts.emplace_back(Atom::zero(), rhs.constant);

  int from = node(a);
  for (const auto& [b, m] : parts) node(b);
  if (entails_atomic(a, k, rhs)) return;
  if (parts.size() == 1) {
    add_edge(from, node(parts[0].first), k - parts[0].second);
    return;
  }
  // Max on the right: commit to one disjunct. Prefer one that relates no
  // two rigid atoms (params, globals, zero) more tightly than before.
  std::vector<Atom> rigid;
  for (Atom x : atoms_)
    if (x.kind != AtomKind::Meta) rigid.push_back(x);
  auto harmless = [&](Atom b, std::int64_t w) {
    for (Atom x : rigid) {
      auto dxa = x == a ? std::optional<std::int64_t>(0) : longest_path(x, a);
      if (!dxa) continue;
      for (Atom y : rigid) {
        auto dby = y == b ? std::optional<std::int64_t>(0) : longest_path(b, y);
        if (!dby) continue;
        auto dxy = x == y ? std::optional<std::int64_t>(0) : longest_path(x, y);
        if (!dxy || *dxy < *dxa + w + *dby) return false;
      }
    }
    return true;
  };
  for (const auto& [b, m] : parts) {
    if (!harmless(b, k - static_cast<std::int64_t>(m))) continue;
    add_edge(from, node(b), k - m);
    return;
  }
  for (const auto& [b, m] : parts) {
    try {
      add_edge(from, node(b), k - m);
      return;
    } catch (const UniverseInconsistency&) {
    }
  }
  // Report the first disjunct's cycle.
  add_edge(from, node(parts[0].first), k - parts[0].second);
}

void ConstraintGraph::add_le(const Level& lhs, const Level& rhs) {
  NormalLevel l = normalize(lhs);
  NormalLevel r = normalize(rhs);
  if (l.constant > 0 || l.offsets.empty()) add_atomic(Atom::zero(), l.constant, r);
  for (const auto& [a, k] : l.offsets) add_atomic(a, k, r);
}

void ConstraintGraph::add(const Constraint& c) {
  Mark m = checkpoint();
  try {
    switch (c.rel) {
      case Rel::Le: add_le(c.lhs, c.rhs); break;
      case Rel::Lt: add_le(Level::succ(c.lhs), c.rhs); break;
      case Rel::Eq:
        add_le(c.lhs, c.rhs);
        add_le(c.rhs, c.lhs);
        break;
    }
  } catch (...) {
    rollback(m);
    throw;
  }
  verbatim_.push_back(c);
}

bool ConstraintGraph::entails_atomic(Atom a, std::int64_t k, const NormalLevel& rhs) const {
  if (a.kind == AtomKind::Zero && k <= static_cast<std::int64_t>(rhs.constant)) return true;
  for (const auto& [b, m] : rhs.offsets) {
    auto d = longest_path(a, b);
    if (d && *d >= k - static_cast<std::int64_t>(m)) return true;
  }
  if (rhs.constant > 0 || rhs.offsets.empty()) {
    auto d = longest_path(a, Atom::zero());
    if (d && *d >= k - static_cast<std::int64_t>(rhs.constant)) return true;
  }
  return false;
}

bool ConstraintGraph::entails_le(const Level& lhs, const Level& rhs) const {
  NormalLevel l = normalize(lhs);
  NormalLevel r = normalize(rhs);
  if ((l.constant > 0 || l.offsets.empty()) && !entails_atomic(Atom::zero(), l.constant, r)) return false;
  for (const auto& [a, k] : l.offsets)
    if (!entails_atomic(a, k, r)) return false;
  return true;
}

bool ConstraintGraph::entails(const Constraint& c) const {
  switch (c.rel) {
    case Rel::Le: return entails_le(c.lhs, c.rhs);
    case Rel::Lt: return entails_le(Level::succ(c.lhs), c.rhs);
    case Rel::Eq: return entails_le(c.lhs, c.rhs) && entails_le(c.rhs, c.lhs);
  }
  return false;
}

bool ConstraintGraph::consistent_with(const Constraint& c) const {
  ConstraintGraph copy = *this;
  try {
    copy.add(c);
    return true;
  } catch (const UniverseInconsistency&) {
    return false;
  }
}

std::map<Atom, std::int64_t> ConstraintGraph::solve() const {
  const auto& dist = distances_from(0);
  std::map<Atom, std::int64_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].kind == AtomKind::Zero) continue;
    out[atoms_[i]] = dist[i] == kUnreached ? 0 : dist[i];
  }
  return out;
}

std::vector<Constraint> ConstraintGraph::project(std::span<const Atom> keep) const {
  std::vector<Atom> nodes{Atom::zero()};
  for (Atom a : keep)
    if (a.kind != AtomKind::Zero && std::find(nodes.begin(), nodes.end(), a) == nodes.end()) nodes.push_back(a);
  const std::size_t n = nodes.size();
  std::vector<std::vector<std::optional<std::int64_t>>> d(n, std::vector<std::optional<std::int64_t>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d[i][j] = longest_path(nodes[i], nodes[j]);

  auto same_class = [&](std::size_t a, std::size_t b) { return d[a][b].has_value() && d[b][a].has_value(); };
  std::vector<Constraint> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !d[i][j]) continue;
      std::int64_t w = *d[i][j];
      if (i == 0 && w <= 0) continue;  // floor facts are implicit
      bool redundant = false;
      for (std::size_t z = 0; z < n && !redundant; ++z) {
        if (z == i || z == j || !d[i][z] || !d[z][j]) continue;
        if (same_class(z, i) || same_class(z, j)) continue;
        if (*d[i][z] + *d[z][j] >= w) redundant = true;
      }
      if (redundant) continue;
      Level a = Level::atom(nodes[i]);
      Level b = Level::atom(nodes[j]);
      if (w == 0) out.push_back({a, Rel::Le, b});
      else if (w > 0) out.push_back({shifted(a, w - 1), Rel::Lt, b});
      else out.push_back({a, Rel::Le, shifted(b, -w)});
    }
  }
  return out;
}

ConstraintGraph add_constraint(ConstraintGraph g, const Constraint& c) {
  g.add(c);
  return g;
}

bool entails(const ConstraintGraph& g, const Constraint& c) { return g.entails(c); }

std::map<Atom, std::int64_t> solve_assignment(const ConstraintGraph& g) { return g.solve(); }

Instantiation instantiate(std::size_t param_count, std::span<const Constraint> stored,
                          std::span<const Level> explicit_levels) {
  Instantiation inst;
  if (!explicit_levels.empty()) {
    if (explicit_levels.size() != param_count)
      throw ArityMismatch("expected " + std::to_string(param_count) + " universe levels, got " +
                          std::to_string(explicit_levels.size()));
    inst.levels.assign(explicit_levels.begin(), explicit_levels.end());
  } else {
    for (std::size_t i = 0; i < param_count; ++i) inst.levels.push_back(Level::fresh_meta());
  }
  for (const Constraint& c : stored) inst.constraints.push_back(instantiate_params(c, inst.levels));
  return inst;
}

}  // namespace hott
