#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hott/errors.hpp"

namespace hott {

// Surface level expressions: `0 | i | l+1 | max(l,l)`.
struct SLevel {
  enum class Kind : std::uint8_t { Num, Name, Succ, Max };
  Kind kind = Kind::Num;
  std::uint32_t num = 0;
  std::string name;
  std::vector<SLevel> kids;
};

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SBinder {
  std::string name;
  SExprPtr type;  // null for untyped `fun x => ...`
  bool implicit = false;
  SourceSpan span;
};

enum class SKind : std::uint8_t {
  Var,      // name, optional levels
  Keyword,  // name is the keyword
  Hole,
  Type,     // optional level
  Num,      // numeral
  Pi,       // binders, kids[0] = body
  Lam,      // binders, kids[0] = body
  Sigma,    // binders, kids[0] = body
  Arrow,    // kids = {dom, cod}
  Prod,     // kids = {a, b}
  Sum,      // kids = {a, b}
  Pair,     // kids = {a, b}
  Proj,     // kids = {t}, num = 1 | 2
  App,      // kids = {fn, arg}, implicit_arg for `f {a}`
  Id,       // kids = {a, b} or {a, b, ty}
  Ann,      // kids = {t, ty}: `(t : ty)`
};

struct SExpr {
  SKind kind = SKind::Hole;
  SourceSpan span;
  std::string name;
  std::uint32_t num = 0;
  bool implicit_arg = false;
  std::optional<SLevel> level;
  std::vector<SLevel> levels;  // explicit universe instance `c@{l ...}`
  std::vector<SBinder> binders;
  std::vector<SExprPtr> kids;
};

struct Attribute {
  enum class Kind : std::uint8_t { Class, Instance, Monomorphic };
  Kind kind = Kind::Class;
  std::uint32_t priority = 0;
};

enum class DeclKind : std::uint8_t { Def, OpaqueDef, Axiom, Primitive };

struct Decl {
  std::vector<Attribute> attrs;
  DeclKind kind = DeclKind::Def;
  std::string name;
  std::vector<std::string> level_params;
  std::vector<SBinder> telescope;
  SExprPtr type;  // may be null for defs
  SExprPtr body;  // null for axioms and primitives
  SourceSpan span;

  bool has_attr(Attribute::Kind k) const;
  std::optional<std::uint32_t> instance_priority() const;
};

struct Import {
  std::string path;
  SourceSpan span;
};

struct SourceModule {
  std::string path;
  std::vector<Import> imports;
  std::vector<Decl> decls;
};

// Keywords with their fixed surface arity.
struct KeywordInfo {
  const char* name;
  int arity;
};
const KeywordInfo* find_keyword(const std::string& name);
bool is_reserved(const std::string& word);

}  // namespace hott
