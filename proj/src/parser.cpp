#include "hott/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace hott {

namespace {

enum class Tok { Ident, Num, String, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  Lexer(std::string_view src, std::string path) : src_(src), path_(std::move(path)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && ident_char(src_[pos_])) t.text += advance();
        if (t.text == "_") t.kind = Tok::Sym;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Num;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') t.text += advance();
        if (pos_ >= src_.size() || src_[pos_] != '"') fail(t, "unterminated string literal");
        advance();
      } else {
        t.kind = Tok::Sym;
        static const char* two[] = {":=", "=>", "->", ":>"};
        for (const char* s : two)
          if (src_.substr(pos_, 2) == s) t.text = s;
        if (t.text.empty()) {
          static const std::string one = "(){}[]:,.*+=_@";
          if (one.find(c) == std::string::npos)
            fail(t, std::string("unexpected character '") + (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "?") + "'");
          t.text = std::string(1, c);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "--") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw HottError(ErrorKind::ParseError, msg, {path_, at.line, at.col});
  }

  std::string_view src_;
  std::string path_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string path, bool allow_primitive = false)
      : toks_(std::move(toks)), path_(std::move(path)), allow_primitive_(allow_primitive) {}

  SourceModule module() {
    SourceModule m;
    m.path = path_;
    while (at_word("import")) {
      Import imp;
      imp.span = span();
      next();
      if (peek().kind != Tok::String) fail({"string literal"});
      imp.path = next().text;
      m.imports.push_back(std::move(imp));
    }
    while (peek().kind != Tok::End) m.decls.push_back(decl());
    return m;
  }

  SExprPtr lone_expr() {
    SExprPtr e = expr();
    if (peek().kind != Tok::End) fail({"end of input"});
    return e;
  }

 private:
  // ------------------------------------------------------------ tokens
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    expected_.clear();
    return t;
  }
  SourceSpan span(std::size_t k = 0) const { return {path_, peek(k).line, peek(k).col}; }

  bool at_sym(const char* s, std::size_t k = 0) {
    if (k == 0) expected_.insert(std::string("'") + s + "'");
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool at_word(const char* w) {
    expected_.insert(std::string("'") + w + "'");
    return peek().kind == Tok::Ident && peek().text == w;
  }
  bool accept(const char* s) {
    if (!at_sym(s)) return false;
    next();
    return true;
  }
  void expect(const char* s) {
    if (!accept(s)) fail({});
  }
  void expect_word(const char* w) {
    if (!at_word(w)) fail({});
    next();
  }

  [[noreturn]] void fail(std::initializer_list<const char*> more, const std::string& msg = "") {
    for (const char* m : more) expected_.insert(m);
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string text = msg.empty() ? "unexpected " + found : msg;
    HottError e(ErrorKind::ParseError, text, span());
    e.expected_tokens.assign(expected_.begin(), expected_.end());
    if (msg.empty() && !e.expected_tokens.empty()) {
      std::string list;
      for (const auto& x : e.expected_tokens) list += (list.empty() ? "" : ", ") + x;
      e = HottError(ErrorKind::ParseError, text + "; expected one of " + list, span());
      e.expected_tokens.assign(expected_.begin(), expected_.end());
    }
    throw e;
  }

  std::string name() {
    expected_.insert("identifier");
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_reserved(t.text)) fail({});
    return next().text;
  }

  // ------------------------------------------------------------ declarations
  Decl decl() {
    Decl d;
    d.span = span();
    while (at_sym("[")) {
      next();
      Attribute a;
      if (at_word("class")) {
        a.kind = Attribute::Kind::Class;
        next();
      } else if (at_word("instance")) {
        a.kind = Attribute::Kind::Instance;
        next();
        a.priority = 100;
        if (peek().kind == Tok::Num) a.priority = number(next());
      } else if (at_word("monomorphic")) {
        a.kind = Attribute::Kind::Monomorphic;
        next();
      } else {
        fail({});
      }
      expect("]");
      d.attrs.push_back(a);
    }
    if (at_word("def")) {
      next();
      d.kind = DeclKind::Def;
    } else if (at_word("opaque")) {
      next();
      expect_word("def");
      d.kind = DeclKind::OpaqueDef;
    } else if (at_word("axiom")) {
      next();
      d.kind = DeclKind::Axiom;
    } else if (allow_primitive_ && at_word("primitive")) {
      next();
      d.kind = DeclKind::Primitive;
    } else {
      fail({});
    }
    d.name = name();
    bool explicit_levels = false;
    // `{i j}` directly after the name: level parameters.
    if (at_sym("{") && peek(1).kind == Tok::Ident) {
      std::size_t k = 1;
      while (peek(k).kind == Tok::Ident) ++k;
      if (at_sym("}", k)) {
        next();
        while (!at_sym("}")) d.level_params.push_back(name());
        next();
        explicit_levels = true;
      }
    }
    while (at_sym("(") || at_sym("{")) binder_group(d.telescope, false);
    const bool needs_body = d.kind == DeclKind::Def || d.kind == DeclKind::OpaqueDef;
    if (accept(":")) {
      d.type = expr();
    } else if (!needs_body) {
      fail({});
    }
    if (needs_body) {
      expect(":=");
      d.body = expr();
    } else if (at_sym(":=")) {
      fail({}, std::string(d.kind == DeclKind::Axiom ? "an axiom" : "a primitive") + " cannot have a body");
    }
    // Without an explicit list, level names bind in order of first use.
    if (!explicit_levels) {
      for (const SBinder& b : d.telescope) collect_level_names(b.type.get(), d.level_params);
      collect_level_names(d.type.get(), d.level_params);
      collect_level_names(d.body.get(), d.level_params);
    }
    return d;
  }

  static void collect_level_names(const SLevel& l, std::vector<std::string>& out) {
    if (l.kind == SLevel::Kind::Name && std::find(out.begin(), out.end(), l.name) == out.end()) out.push_back(l.name);
    for (const SLevel& k : l.kids) collect_level_names(k, out);
  }

  static void collect_level_names(const SExpr* e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->level) collect_level_names(*e->level, out);
    for (const SLevel& l : e->levels) collect_level_names(l, out);
    for (const SBinder& b : e->binders) collect_level_names(b.type.get(), out);
    for (const SExprPtr& k : e->kids) collect_level_names(k.get(), out);
  }

  // `(x y : A)` or `{x : A}`; with `bare`, also `x` and `{x}`.
  void binder_group(std::vector<SBinder>& out, bool bare) {
    if (bare && peek().kind == Tok::Ident && !is_reserved(peek().text)) {
      SBinder b;
      b.span = span();
      b.name = next().text;
      out.push_back(std::move(b));
      return;
    }
    if (bare && at_sym("_")) {
      SBinder b;
      b.span = span();
      next();
      b.name = "_";
      out.push_back(std::move(b));
      return;
    }
    const bool implicit = at_sym("{");
    if (!implicit && !at_sym("(")) fail({"identifier"});
    next();
    std::vector<SBinder> group;
    do {
      SBinder b;
      b.span = span();
      if (accept("_")) {
        b.name = "_";
      } else {
        b.name = name();
      }
      b.implicit = implicit;
      group.push_back(std::move(b));
    } while (peek().kind == Tok::Ident || at_sym("_"));
    SExprPtr type;
    if (bare && implicit && at_sym("}")) {
      next();
    } else {
      expect(":");
      type = expr();
      expect(implicit ? "}" : ")");
    }
    for (SBinder& b : group) {
      b.type = type;
      out.push_back(std::move(b));
    }
  }

  // ------------------------------------------------------------ expressions
  static std::shared_ptr<SExpr> node(SKind k, SourceSpan s, std::vector<SExprPtr> kids = {}) {
    auto e = std::make_shared<SExpr>();
    e->kind = k;
    e->span = std::move(s);
    e->kids = std::move(kids);
    return e;
  }

  SExprPtr expr() {
    SourceSpan s = span();
    if (at_word("fun")) {
      next();
      auto e = std::make_shared<SExpr>();
      e->kind = SKind::Lam;
      e->span = s;
      do binder_group(e->binders, true);
      while (!at_sym("=>"));
      next();
      e->kids.push_back(expr());
      return e;
    }
    const bool pi = at_word("forall");
    if (pi || at_word("Sigma")) {
      next();
      auto e = std::make_shared<SExpr>();
      e->kind = pi ? SKind::Pi : SKind::Sigma;
      e->span = s;
      do binder_group(e->binders, true);
      while (!at_sym(","));
      next();
      for (SBinder& b : e->binders)
        if (!b.type) b.type = node(SKind::Hole, b.span);
      e->kids.push_back(expr());
      return e;
    }
    return arrow();
  }

  SExprPtr arrow() {
    SourceSpan s = span();
    SExprPtr a = eq();
    if (!accept("->")) return a;
    return node(SKind::Arrow, s, {a, expr()});
  }

  SExprPtr eq() {
    SourceSpan s = span();
    SExprPtr a = sum();
    if (!accept("=")) return a;
    SExprPtr b = sum();
    if (accept(":>")) return node(SKind::Id, s, {a, b, sum()});
    return node(SKind::Id, s, {a, b});
  }

  SExprPtr sum() {
    SourceSpan s = span();
    SExprPtr a = prod();
    if (!accept("+")) return a;
    return node(SKind::Sum, s, {a, sum()});
  }

  SExprPtr prod() {
    SourceSpan s = span();
    SExprPtr a = app();
    if (!accept("*")) return a;
    return node(SKind::Prod, s, {a, prod()});
  }

  bool starts_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Num) return true;
    if (t.kind == Tok::Ident)
      return !is_reserved(t.text) || find_keyword(t.text) || t.text == "Type";
    return at_sym("(") || at_sym("_") || at_sym("{");
  }

  SExprPtr app() {
    SourceSpan s = span();
    SExprPtr f = postfix();
    for (;;) {
      if (at_sym("{")) {
        next();
        SExprPtr a = expr();
        expect("}");
        auto e = node(SKind::App, s, {f, a});
        e->implicit_arg = true;
        f = e;
      } else if (starts_atom()) {
        f = node(SKind::App, s, {f, postfix()});
      } else {
        return f;
      }
    }
  }

  SExprPtr postfix() {
    SourceSpan s = span();
    SExprPtr a = atom();
    while (at_sym(".")) {
      next();
      expected_.insert("'1'");
      expected_.insert("'2'");
      if (peek().kind != Tok::Num || (peek().text != "1" && peek().text != "2")) fail({});
      auto e = node(SKind::Proj, s, {a});
      e->num = number(next());
      a = e;
    }
    return a;
  }

  SExprPtr atom() {
    SourceSpan s = span();
    const Token& t = peek();
    if (t.kind == Tok::Num) {
      auto e = node(SKind::Num, s);
      e->num = number(next());
      return e;
    }
    if (accept("_")) return node(SKind::Hole, s);
    if (at_sym("(")) {
      next();
      SExprPtr a = expr();
      if (accept(",")) {
        std::vector<SExprPtr> items{a, expr()};
        while (accept(",")) items.push_back(expr());
        expect(")");
        SExprPtr acc = items.back();
        for (std::size_t i = items.size() - 1; i-- > 0;) acc = node(SKind::Pair, items[i]->span, {items[i], acc});
        std::const_pointer_cast<SExpr>(acc)->span = s;
        return acc;
      }
      if (accept(":")) {
        SExprPtr ty = expr();
        expect(")");
        return node(SKind::Ann, s, {a, ty});
      }
      expect(")");
      return a;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "Type") {
        next();
        auto e = node(SKind::Type, s);
        if (accept("{")) {
          e->level = level();
          expect("}");
        }
        return e;
      }
      if (find_keyword(t.text)) {
        auto e = node(SKind::Keyword, s);
        e->name = next().text;
        return e;
      }
      auto e = node(SKind::Var, s);
      e->name = name();
      if (at_sym("@") && at_sym("{", 1)) {
        next();
        next();
        do e->levels.push_back(level());
        while (!accept("}"));
      }
      return e;
    }
    fail({"identifier", "numeral", "'('", "'_'", "'Type'"});
  }

  SLevel level() {
    SLevel l = level_atom();
    while (accept("+")) {
      expected_.insert("numeral");
      if (peek().kind != Tok::Num) fail({});
      std::uint32_t k = number(next());
      for (std::uint32_t i = 0; i < k; ++i) {
        SLevel s;
        s.kind = SLevel::Kind::Succ;
        s.kids.push_back(std::move(l));
        l = std::move(s);
      }
    }
    return l;
  }

  SLevel level_atom() {
    SLevel l;
    if (peek().kind == Tok::Num) {
      l.kind = SLevel::Kind::Num;
      l.num = number(next());
      return l;
    }
    if (at_word("max")) {
      next();
      expect("(");
      l.kind = SLevel::Kind::Max;
      l.kids.push_back(level());
      expect(",");
      l.kids.push_back(level());
      expect(")");
      return l;
    }
    if (accept("(")) {
      l = level();
      expect(")");
      return l;
    }
    l.kind = SLevel::Kind::Name;
    l.name = name();
    return l;
  }

  std::uint32_t number(const Token& t) {
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v > 100000)
      throw HottError(ErrorKind::ParseError, "numeral out of range", {path_, t.line, t.col});
    return v;
  }

  std::vector<Token> toks_;
  std::string path_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
  bool allow_primitive_ = false;
};

}  // namespace

SourceModule parse_module(std::string_view text, const std::string& path, bool allow_primitive) {
  Parser p(Lexer(text, path).run(), path, allow_primitive);
  return p.module();
}

SExprPtr parse_expr(std::string_view text, const std::string& path) {
  Parser p(Lexer(text, path).run(), path);
  return p.lone_expr();
}

}  // namespace hott
