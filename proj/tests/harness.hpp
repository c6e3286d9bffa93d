#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hott/checker.hpp"
#include "hott/elaborator.hpp"
#include "hott/environment.hpp"
#include "hott/frontend.hpp"
#include "hott/parser.hpp"

namespace harness {

namespace fs = std::filesystem;

inline std::string corpus_dir() { return HOTT_CORPUS_DIR; }
inline std::string fixture_dir() { return HOTT_FIXTURE_DIR; }
inline std::string corpus_file(const std::string& name) { return corpus_dir() + "/" + name; }
inline std::string fixture(const std::string& name) { return fixture_dir() + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh scratch directory under the system temp dir.
inline fs::path scratch(const std::string& tag) {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() / ("hott-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline void write(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Prelude plus `text`, loaded through the real loader.
inline std::unique_ptr<hott::Loader> load_text(std::string_view text, hott::KernelOptions opts = {}) {
  fs::path dir = scratch("src");
  write(dir / "Main.hott", text);
  auto l = std::make_unique<hott::Loader>(opts);
  l->load((dir / "Main.hott").string());
  return l;
}

inline std::unique_ptr<hott::Loader> load_file(const std::string& path, hott::KernelOptions opts = {}) {
  auto l = std::make_unique<hott::Loader>(opts);
  l->load(path);
  return l;
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hott");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = hott::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Elaborates a closed surface expression against `env` and returns the
// kernel term with its type.
inline std::pair<hott::Term, hott::Term> elab(const hott::Environment& env, std::string_view text) {
  hott::Elaborator e(env, {});
  hott::Telescope ctx;
  hott::Term type;
  auto s = hott::parse_expr(text);
  hott::Term t = e.infer(ctx, *s, type);
  e.resolve_instances(true);
  return {e.finish(ctx, t, s->span), e.finish(ctx, type, s->span)};
}

}  // namespace harness
