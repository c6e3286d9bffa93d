#include "hott/environment.hpp"

#include <algorithm>
#include <set>

namespace hott {

void InstanceTable::add(const std::string& class_name, Entry e) {
  auto& v = table_[class_name];
  auto pos = std::upper_bound(v.begin(), v.end(), e, [](const Entry& a, const Entry& b) {
    return a.priority != b.priority ? a.priority < b.priority : a.order < b.order;
  });
  v.insert(pos, std::move(e));
}

const std::vector<InstanceTable::Entry>& InstanceTable::candidates(const std::string& class_name) const {
  static const std::vector<Entry> none;
  auto it = table_.find(class_name);
  return it == table_.end() ? none : it->second;
}

std::size_t InstanceTable::max_width() const {
  std::size_t w = 0;
  for (const auto& [_, v] : table_) w = std::max(w, v.size());
  return w;
}

const Definition* Environment::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &defs_[it->second];
}

const Definition& Environment::get(std::string_view name) const {
  if (const Definition* d = find(name)) return *d;
  throw HottError(ErrorKind::UnknownName, "unknown name '" + std::string(name) + "'");
}

const Definition& Environment::add(Definition d) {
  if (contains(d.name)) throw HottError(ErrorKind::DuplicateName, "duplicate definition '" + d.name + "'", d.span);
  d.order = defs_.size();
  if (d.instance_priority) {
    auto head = class_head(d.type);
    const Definition* cls = head ? find(*head) : nullptr;
    if (!cls || !cls->is_class)
      throw HottError(ErrorKind::IllFormed, "instance '" + d.name + "' does not conclude in a class", d.span);
    instances_.add(*head, {d.name, *d.instance_priority, d.order});
  }
  index_.emplace(d.name, defs_.size());
  defs_.push_back(std::move(d));
  return defs_.back();
}

void Environment::set_opaque(std::string_view name, bool opaque) {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw HottError(ErrorKind::UnknownName, "unknown name '" + std::string(name) + "'");
  defs_[it->second].opaque = opaque;
}

std::optional<std::string> class_head(const Term& type) {
  Term t = type;
  while (t.is(Tag::Pi)) t = t[1];
  std::vector<Term> args;
  Term h = spine(t, args);
  if (h.is(Tag::Const)) return h->name;
  return std::nullopt;
}

namespace {
void collect_rec(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is(Tag::Const)) {
    if (seen.insert(t->name).second) out.push_back(t->name);
    return;
  }
  for (const Term& k : t->kids) collect_rec(k, out, seen);
}
}  // namespace

void collect_constants(const Term& t, std::vector<std::string>& out) {
  std::set<std::string> seen(out.begin(), out.end());
  collect_rec(t, out, seen);
}

std::vector<std::string> compute_axiom_deps(const Environment& env, const std::string& self, DefKind kind,
                                            const Term& type, const std::optional<Term>& body) {
  std::vector<std::string> refs;
  collect_constants(type, refs);
  if (body) collect_constants(*body, refs);
  std::set<std::string> acc;
  for (const std::string& r : refs) {
    const Definition* d = env.find(r);
    if (!d) continue;
    acc.insert(d->axiom_deps.begin(), d->axiom_deps.end());
  }
  std::vector<std::pair<std::size_t, std::string>> ordered;
  for (const std::string& a : acc) ordered.emplace_back(env.get(a).order, a);
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::string> out;
  for (auto& [_, n] : ordered) out.push_back(n);
  if (kind == DefKind::Axiom) out.push_back(self);
  return out;
}

std::vector<std::string> axioms_of(const Environment& env, std::string_view name) { return env.get(name).axiom_deps; }

}  // namespace hott
