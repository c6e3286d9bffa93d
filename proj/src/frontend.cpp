#include "hott/frontend.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hott/checker.hpp"
#include "hott/parser.hpp"
#include "hott/print.hpp"
#include "hott/reducer.hpp"

namespace hott {

namespace fs = std::filesystem;

std::string format_diagnostic(const HottError& e) {
  std::ostringstream os;
  const SourceSpan& s = e.span();
  os << (s.file.empty() ? "<input>" : s.file) << ":" << std::max<std::uint32_t>(s.line, 1) << ":"
     << std::max<std::uint32_t>(s.col, 1) << ": error: " << e.what() << "\n";
  if (e.expected) os << "  expected: " << *e.expected << "\n";
  if (e.got) os << "  got: " << *e.got << "\n";
  if (!e.cycle.empty()) {
    os << "  cycle: ";
    const char* sep = e.kind() == ErrorKind::ImportCycle ? " -> " : "; ";
    for (std::size_t i = 0; i < e.cycle.size(); ++i) os << (i ? sep : "") << e.cycle[i];
    os << "\n";
  }
  return os.str();
}

const char* prelude_source() {
  return R"(primitive interval_ind_beta_seg {u} (P : I -> Type{u}) (a : P i0) (b : P i1) (p : transport P seg a = b) :
  apD (Iind P a b p) seg = p

primitive circle_ind_beta_loop {u} (P : S1 -> Type{u}) (b : P base) (l : transport P loop b = b) :
  apD (S1ind P b l) loop = l

primitive susp_ind_beta_merid {u v} (A : Type{u}) (P : susp A -> Type{v}) (n : P north) (s : P south)
  (m : forall (a : A), transport P (merid a) n = s) (a : A) :
  apD (suspind P n s m) (merid a) = m a

primitive coeq_ind_beta_glue {u v w} (B : Type{u}) (A : Type{v}) (f g : B -> A) (P : coeq f g -> Type{w})
  (c : forall (a : A), P (cp a)) (gl : forall (b : B), transport P (cglue b) (c (f b)) = c (g b)) (b : B) :
  apD (coeqind P c gl) (cglue b) = gl b
)";
}

Loader::Loader(KernelOptions opts) : env_(opts) {
  SourceModule m = parse_module(prelude_source(), "<prelude>", true);
  for (const Decl& d : m.decls) check_declaration(env_, d, "<prelude>");
  prelude_count_ = env_.definitions().size();
}

std::string Loader::canonical(const std::string& path) const {
  std::error_code ec;
  fs::path p = fs::weakly_canonical(fs::absolute(path), ec);
  return ec ? path : p.string();
}

void Loader::load(const std::string& entry) {
  std::vector<std::string> stack;
  visit(canonical(entry), stack, {});
}

namespace {

std::string read_file(const std::string& path, const SourceSpan& from, const std::string& shown) {
  std::ifstream in(path, std::ios::binary);
  if (!in || fs::is_directory(path)) {
    SourceSpan s = from;
    if (!s.known()) s = {shown, 1, 1};
    throw HottError(ErrorKind::IoError, "cannot read '" + shown + "'", s);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string import_target(const std::string& importer, const std::string& rel) {
  fs::path p = fs::path(importer).parent_path() / rel;
  if (p.extension() != ".hott") p += ".hott";
  return p.string();
}

}  // namespace

void Loader::visit(const std::string& file, std::vector<std::string>& stack, const SourceSpan& from) {
  if (done_.count(file)) return;
  if (auto it = std::find(stack.begin(), stack.end(), file); it != stack.end()) {
    HottError e(ErrorKind::ImportCycle, "import cycle", from);
    std::string text;
    for (auto i = it; i != stack.end(); ++i) e.cycle.push_back(fs::path(*i).filename().string());
    e.cycle.push_back(fs::path(file).filename().string());
    for (const auto& c : e.cycle) text += (text.empty() ? "" : " -> ") + c;
    HottError full(ErrorKind::ImportCycle, "import cycle: " + text, from);
    full.cycle = e.cycle;
    throw full;
  }
  std::string shown = fs::path(file).lexically_relative(fs::current_path()).string();
  if (shown.empty() || shown.rfind("..", 0) == 0) shown = file;
  SourceModule m = parse_module(read_file(file, from, shown), shown);
  stack.push_back(file);
  for (const Import& imp : m.imports) visit(canonical(import_target(file, imp.path)), stack, imp.span);
  stack.pop_back();

  ++visits_;
  auto& names = names_[file];
  for (const Decl& d : m.decls) {
    const Definition& def = check_declaration(env_, d, shown);
    names.push_back(def.name);
  }
  modules_.emplace(file, std::move(m));
  order_.push_back(file);
  done_.insert(file);
}

std::vector<const Definition*> Loader::definitions_of(const std::string& file) const {
  std::vector<const Definition*> out;
  auto it = names_.find(file);
  if (it == names_.end()) return out;
  for (const auto& n : it->second) out.push_back(&env_.get(n));
  return out;
}

std::vector<std::string> universe_listing(const Environment& env) {
  std::vector<std::string> out;
  for (const Constraint& c : env.graph().edge_constraints()) out.push_back(to_string(c));
  for (const Definition& d : env.definitions()) {
    std::vector<std::string> names;
    for (const auto& p : d.level_params) names.push_back(d.name + "." + p);
    for (const Constraint& c : d.constraints) out.push_back(to_string(c, names));
  }
  return out;
}

namespace {

std::string axiom_line(const Definition& d) {
  std::string s = d.name + ":";
  if (d.axiom_deps.empty()) return s + " <none>";
  for (const auto& a : d.axiom_deps) s += " " + a;
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof checker for univalent type theory with higher inductive types", "hott"};
  app.require_subcommand(1);
  bool tit = false;
  bool no_sigma_eta = false;
  std::uint32_t depth = 16;
  std::string file;
  std::string name;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", file, "Source file (.hott)")->required();
    sub->add_flag("--type-in-type", tit, "Disable universe checking");
    sub->add_option("--instance-depth", depth, "Instance search depth budget");
    sub->add_flag("--no-sigma-eta", no_sigma_eta)->group("");
  };
  CLI::App* check = app.add_subcommand("check", "Check a file and its imports");
  common(check);
  CLI::App* report = app.add_subcommand("report-axioms", "List the axioms each definition depends on");
  common(report);
  report->add_option("name", name, "Only this definition");
  CLI::App* norm = app.add_subcommand("normalize", "Print the normal form of a definition's body");
  common(norm);
  norm->add_option("name", name, "Definition")->required();
  CLI::App* univ = app.add_subcommand("print-universes", "Print the final universe constraints");
  common(univ);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "usage: hott (check|report-axioms|normalize|print-universes) <file> [options]\n";
    return 2;
  }

  KernelOptions opts;
  opts.type_in_type = tit;
  opts.sigma_eta = !no_sigma_eta;
  opts.instance_depth = depth;
  try {
    Loader loader(opts);
    loader.load(file);
    const std::string entry = loader.canonical(file);
    const Environment& env = loader.env();
    if (report->parsed()) {
      if (!name.empty()) {
        const Definition* d = env.find(name);
        if (!d) {
          err << "error: unknown definition '" << name << "'\n";
          return 1;
        }
        out << axiom_line(*d) << "\n";
      } else {
        for (const Definition* d : loader.definitions_of(entry)) out << axiom_line(*d) << "\n";
      }
    } else if (norm->parsed()) {
      const Definition* d = env.find(name);
      if (!d) {
        err << "error: unknown definition '" << name << "'\n";
        return 1;
      }
      if (!d->body) {
        err << "error: '" << name << "' has no body\n";
        return 1;
      }
      out << print_term(normalize(env, *d->body), {}, d->level_params) << "\n";
    } else if (univ->parsed()) {
      for (const auto& line : universe_listing(env)) out << line << "\n";
    }
  } catch (const HottError& e) {
    err << format_diagnostic(e);
    return 1;
  } catch (const std::exception& e) {
    err << file << ":1:1: error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hott
