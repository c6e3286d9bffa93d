#include "hott/syntax.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace hott {

bool Decl::has_attr(Attribute::Kind k) const {
  return std::any_of(attrs.begin(), attrs.end(), [&](const Attribute& a) { return a.kind == k; });
}

std::optional<std::uint32_t> Decl::instance_priority() const {
  for (const Attribute& a : attrs)
    if (a.kind == Attribute::Kind::Instance) return a.priority;
  return std::nullopt;
}

namespace {

constexpr std::array<KeywordInfo, 38> kKeywords{{
    {"Nat", 0},      {"zero", 0},      {"Unit", 0},      {"tt", 0},       {"Empty", 0},    {"refl", 0},
    {"I", 0},        {"i0", 0},        {"i1", 0},        {"seg", 0},      {"S1", 0},       {"base", 0},
    {"loop", 0},     {"north", 0},     {"south", 0},     {"succ", 1},     {"inl", 1},      {"inr", 1},
    {"susp", 1},     {"merid", 1},     {"cp", 1},        {"cglue", 1},    {"trunc", 1},    {"tr", 1},
    {"emptyrec", 2}, {"apD", 2},       {"coeq", 2},      {"trpath", 2},   {"unitrec", 3},  {"J", 3},
    {"transport", 3}, {"natrec", 4},   {"sumrec", 4},    {"S1ind", 4},    {"coeqind", 4},  {"truncind", 4},
    {"Iind", 5},     {"suspind", 5},
}};

constexpr std::array<std::string_view, 10> kReserved{"def",   "opaque", "axiom", "import", "fun",
                                                      "forall", "Sigma", "Type",  "max",    "primitive"};

}  // namespace

const KeywordInfo* find_keyword(const std::string& name) {
  if (name.empty()) return nullptr;
  for (const KeywordInfo& k : kKeywords)
    if (name == k.name) return &k;
  return nullptr;
}

bool is_reserved(const std::string& word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end() || find_keyword(word) != nullptr;
}

}  // namespace hott
