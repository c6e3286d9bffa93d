#include "hott/print.hpp"

#include <algorithm>
#include <sstream>

namespace hott {

namespace {

// Precedences shared with the parser.
enum Prec { kTop = 0, kArrow = 1, kEq = 2, kSum = 3, kProd = 4, kApp = 5, kPost = 6, kAtom = 7 };

std::string paren(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

class KernelPrinter {
 public:
  explicit KernelPrinter(const std::vector<std::string>& levels) : levels_(levels) {}

  std::string go(const Term& t, std::vector<std::string>& ns, int prec) {
    switch (t.tag()) {
      case Tag::Var: {
        std::uint32_t i = t->index;
        if (i < ns.size()) return ns[ns.size() - 1 - i];
        return "#" + std::to_string(i - ns.size());
      }
      case Tag::Sort: return "Type{" + to_string(t->level, levels_) + "}";
      case Tag::Const: return t->name;
      case Tag::Meta: return "?m" + std::to_string(t->index);
      case Tag::Pi: {
        if (!t->implicit && !has_free_var(t[1], 0)) {
          std::string a = go(t[0], ns, kArrow + 1);
          ns.push_back("_");
          std::string b = go(t[1], ns, kArrow);
          ns.pop_back();
          return paren(prec > kArrow, a + " -> " + b);
        }
        return paren(prec > kTop, binder("forall", t, ns, ", "));
      }
      case Tag::Lam: return paren(prec > kTop, binder("fun", t, ns, " => "));
      case Tag::Sigma: {
        if (!has_free_var(t[1], 0)) {
          std::string a = go(t[0], ns, kProd + 1);
          ns.push_back("_");
          std::string b = go(t[1], ns, kProd);
          ns.pop_back();
          return paren(prec > kProd, a + " * " + b);
        }
        return paren(prec > kTop, binder("Sigma", t, ns, ", "));
      }
      case Tag::Sum: return paren(prec > kSum, go(t[0], ns, kSum + 1) + " + " + go(t[1], ns, kSum));
      case Tag::Id: return paren(prec > kEq, go(t[1], ns, kSum) + " = " + go(t[2], ns, kSum));
      case Tag::Pair: return "(" + go(t[0], ns, kTop) + " , " + go(t[1], ns, kTop) + ")";
      case Tag::Proj1: return go(t[0], ns, kPost) + ".1";
      case Tag::Proj2: return go(t[0], ns, kPost) + ".2";
      case Tag::Zero: return "0";
      case Tag::Succ: {
        std::uint32_t n = 1;
        Term c = t[0];
        while (c.is(Tag::Succ)) {
          ++n;
          c = c[0];
        }
        if (c.is(Tag::Zero)) return std::to_string(n);
        return keyword("succ", {t[0]}, ns, prec);
      }
      case Tag::App: {
        std::vector<Term> args;
        Term h = spine(t, args);
        std::string s = go(h, ns, kApp);
        for (const Term& a : args) s += " " + go(a, ns, kPost);
        return paren(prec > kApp, s);
      }
      case Tag::Nat: return "Nat";
      case Tag::Unit: return "Unit";
      case Tag::Star: return "tt";
      case Tag::Empty: return "Empty";
      case Tag::Inl: return keyword("inl", {t[0]}, ns, prec);
      case Tag::Inr: return keyword("inr", {t[0]}, ns, prec);
      case Tag::SumElim: return keyword("sumrec", {t[0], t[1], t[2], t[3]}, ns, prec);
      case Tag::UnitElim: return keyword("unitrec", {t[0], t[1], t[2]}, ns, prec);
      case Tag::EmptyElim: return keyword("emptyrec", {t[0], t[1]}, ns, prec);
      case Tag::NatElim: {
        std::string s = "natrec " + go(t[0], ns, kPost) + " " + go(t[1], ns, kPost) + " ";
        s += lambdas(t[2], 2, {"n", "ih"}, ns) + " " + go(t[3], ns, kPost);
        return paren(prec > kApp, s);
      }
      case Tag::Refl: return "refl";
      case Tag::J: {
        std::string s = "J " + lambdas(t[1], 2, {"y", "p"}, ns) + " " + go(t[2], ns, kPost) + " " + go(t[4], ns, kPost);
        return paren(prec > kApp, s);
      }
      case Tag::Transport: {
        std::string s = "transport " + lambdas(t[0], 1, {"x"}, ns) + " " + go(t[1], ns, kPost) + " " +
                        go(t[2], ns, kPost);
        return paren(prec > kApp, s);
      }
      case Tag::ApD: return keyword("apD", {t[0], t[1]}, ns, prec);
      case Tag::Interval: return "I";
      case Tag::IZero: return "i0";
      case Tag::IOne: return "i1";
      case Tag::Seg: return "seg";
      case Tag::IntervalInd: return keyword("Iind", {t[0], t[1], t[2], t[3], t[4]}, ns, prec);
      case Tag::Circle: return "S1";
      case Tag::Base: return "base";
      case Tag::Loop: return "loop";
      case Tag::CircleInd: return keyword("S1ind", {t[0], t[1], t[2], t[3]}, ns, prec);
      case Tag::Susp: return keyword("susp", {t[0]}, ns, prec);
      case Tag::North: return "north";
      case Tag::South: return "south";
      case Tag::Merid: return keyword("merid", {t[0]}, ns, prec);
      case Tag::SuspInd: return keyword("suspind", {t[0], t[1], t[2], t[3], t[4]}, ns, prec);
      case Tag::Coeq: return keyword("coeq", {t[0], t[1]}, ns, prec);
      case Tag::CoeqPoint: return keyword("cp", {t[1]}, ns, prec);
      case Tag::CoeqGlue: return keyword("cglue", {t[1]}, ns, prec);
      case Tag::CoeqInd: return keyword("coeqind", {t[0], t[1], t[2], t[3]}, ns, prec);
      case Tag::Trunc: return keyword("trunc", {t[0]}, ns, prec);
      case Tag::Tr: return keyword("tr", {t[0]}, ns, prec);
      case Tag::TrPath: return keyword("trpath", {t[0], t[1]}, ns, prec);
      case Tag::TruncInd: return keyword("truncind", {t[0], t[1], t[2], t[3]}, ns, prec);
    }
    return "?";
  }

 private:
  std::string fresh(std::string base, const std::vector<std::string>& ns) {
    if (base.empty() || base == "_") base = "x";
    std::string n = base;
    for (int k = 1; std::find(ns.begin(), ns.end(), n) != ns.end(); ++k) n = base + std::to_string(k);
    return n;
  }

  std::string binder(const char* kw, const Term& t, std::vector<std::string>& ns, const char* sep) {
    std::string dom = go(t[0], ns, kTop);
    std::string n = fresh(t->name, ns);
    bool imp = t->implicit;
    ns.push_back(n);
    std::string body = go(t[1], ns, kTop);
    ns.pop_back();
    std::string b = imp ? "{" + n + " : " + dom + "}" : "(" + n + " : " + dom + ")";
    return std::string(kw) + " " + b + sep + body;
  }

  // A child under k binders, shown as an untyped lambda.
  std::string lambdas(const Term& body, int k, std::vector<std::string> hints, std::vector<std::string>& ns) {
    std::string head = "(fun";
    for (int i = 0; i < k; ++i) {
      std::string n = fresh(hints[i], ns);
      ns.push_back(n);
      head += " " + n;
    }
    std::string s = head + " => " + go(body, ns, kTop) + ")";
    for (int i = 0; i < k; ++i) ns.pop_back();
    return s;
  }

  std::string keyword(const char* kw, std::initializer_list<Term> args, std::vector<std::string>& ns, int prec) {
    std::string s = kw;
    for (const Term& a : args) s += " " + go(a, ns, kPost);
    return paren(prec > kApp, s);
  }

  const std::vector<std::string>& levels_;
};

// Surface printing.

std::string level_str(const SLevel& l, bool atom) {
  switch (l.kind) {
    case SLevel::Kind::Num: return std::to_string(l.num);
    case SLevel::Kind::Name: return l.name;
    case SLevel::Kind::Succ: {
      std::uint32_t k = 1;
      const SLevel* b = &l.kids[0];
      while (b->kind == SLevel::Kind::Succ) {
        ++k;
        b = &b->kids[0];
      }
      std::string s = level_str(*b, true) + "+" + std::to_string(k);
      return atom ? "(" + s + ")" : s;
    }
    case SLevel::Kind::Max: return "max(" + level_str(l.kids[0], false) + ", " + level_str(l.kids[1], false) + ")";
  }
  return "?";
}

std::string binders_str(const std::vector<SBinder>& bs, bool allow_bare);

std::string expr(const SExpr& e, int prec) {
  switch (e.kind) {
    case SKind::Var: {
      if (e.levels.empty()) return e.name;
      std::string s = e.name + "@{";
      for (std::size_t i = 0; i < e.levels.size(); ++i) s += (i ? " " : "") + level_str(e.levels[i], true);
      return s + "}";
    }
    case SKind::Keyword: return e.name;
    case SKind::Hole: return "_";
    case SKind::Type: return e.level ? "Type{" + level_str(*e.level, false) + "}" : "Type";
    case SKind::Num: return std::to_string(e.num);
    case SKind::Pi: return paren(prec > kTop, "forall " + binders_str(e.binders, false) + ", " + expr(*e.kids[0], kTop));
    case SKind::Lam: return paren(prec > kTop, "fun " + binders_str(e.binders, true) + " => " + expr(*e.kids[0], kTop));
    case SKind::Sigma:
      return paren(prec > kTop, "Sigma " + binders_str(e.binders, false) + ", " + expr(*e.kids[0], kTop));
    case SKind::Arrow: return paren(prec > kArrow, expr(*e.kids[0], kArrow + 1) + " -> " + expr(*e.kids[1], kArrow));
    case SKind::Prod: return paren(prec > kProd, expr(*e.kids[0], kProd + 1) + " * " + expr(*e.kids[1], kProd));
    case SKind::Sum: return paren(prec > kSum, expr(*e.kids[0], kSum + 1) + " + " + expr(*e.kids[1], kSum));
    case SKind::Pair: return "(" + expr(*e.kids[0], kTop) + " , " + expr(*e.kids[1], kTop) + ")";
    case SKind::Proj: return expr(*e.kids[0], kPost) + "." + std::to_string(e.num);
    case SKind::App: {
      std::string arg = e.implicit_arg ? "{" + expr(*e.kids[1], kTop) + "}" : expr(*e.kids[1], kPost);
      return paren(prec > kApp, expr(*e.kids[0], kApp) + " " + arg);
    }
    case SKind::Ann: return "(" + expr(*e.kids[0], kTop) + " : " + expr(*e.kids[1], kTop) + ")";
    case SKind::Id: {
      std::string s = expr(*e.kids[0], kSum) + " = " + expr(*e.kids[1], kSum);
      if (e.kids.size() == 3) s += " :> " + expr(*e.kids[2], kSum);
      return paren(prec > kEq, s);
    }
  }
  return "?";
}

std::string binders_str(const std::vector<SBinder>& bs, bool allow_bare) {
  std::string out;
  std::size_t i = 0;
  while (i < bs.size()) {
    if (!out.empty()) out += " ";
    const SBinder& b = bs[i];
    if (!b.type) {
      if (!allow_bare) out += b.implicit ? "{" + b.name + " : _}" : "(" + b.name + " : _)";
      else out += b.implicit ? "{" + b.name + "}" : b.name;
      ++i;
      continue;
    }
    // Group consecutive binders sharing one parsed type node.
    std::string names = b.name;
    std::size_t j = i + 1;
    while (j < bs.size() && bs[j].type == b.type && bs[j].implicit == b.implicit) names += " " + bs[j++].name;
    std::string inner = names + " : " + expr(*b.type, kTop);
    out += b.implicit ? "{" + inner + "}" : "(" + inner + ")";
    i = j;
  }
  return out;
}

}  // namespace

std::string print_term(const Term& t, const std::vector<std::string>& names, const std::vector<std::string>& level_names) {
  std::vector<std::string> ns = names;
  return KernelPrinter(level_names).go(t, ns, kTop);
}

std::string print_level(const SLevel& l) { return level_str(l, false); }

std::string print_expr(const SExpr& e) { return expr(e, kTop); }

std::string print_decl(const Decl& d) {
  std::ostringstream os;
  for (const Attribute& a : d.attrs) {
    switch (a.kind) {
      case Attribute::Kind::Class: os << "[class] "; break;
      case Attribute::Kind::Instance: os << "[instance " << a.priority << "] "; break;
      case Attribute::Kind::Monomorphic: os << "[monomorphic] "; break;
    }
  }
  switch (d.kind) {
    case DeclKind::Def: os << "def "; break;
    case DeclKind::OpaqueDef: os << "opaque def "; break;
    case DeclKind::Axiom: os << "axiom "; break;
    case DeclKind::Primitive: os << "primitive "; break;
  }
  os << d.name;
  if (!d.level_params.empty()) {
    os << " {";
    for (std::size_t i = 0; i < d.level_params.size(); ++i) os << (i ? " " : "") << d.level_params[i];
    os << "}";
  }
  if (!d.telescope.empty()) os << " " << binders_str(d.telescope, false);
  if (d.type) os << " : " << print_expr(*d.type);
  if (d.body) os << " :=\n  " << print_expr(*d.body);
  return os.str();
}

std::string print_module(const SourceModule& m) {
  std::ostringstream os;
  for (const Import& i : m.imports) os << "import \"" << i.path << "\"\n";
  if (!m.imports.empty()) os << "\n";
  for (const Decl& d : m.decls) os << print_decl(d) << "\n\n";
  return os.str();
}

}  // namespace hott
