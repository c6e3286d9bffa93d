#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hott/environment.hpp"
#include "hott/errors.hpp"
#include "hott/syntax.hpp"

namespace hott {

// One line per failure: `file:line:col: error: message`, followed by
// indented expected/got and cycle lines when present.
std::string format_diagnostic(const HottError& e);

// Built-in declarations loaded before any file: propositional computation
// rules for HIT path constructors.
const char* prelude_source();

class Loader {
 public:
  explicit Loader(KernelOptions opts = {});

  // Loads `entry` and its imports (each file once, dependencies first).
  // Throws HottError; the environment keeps whatever was checked before.
  void load(const std::string& entry);

  Environment& env() { return env_; }
  const Environment& env() const { return env_; }

  // Canonical paths in check order, and each file's parsed module.
  const std::vector<std::string>& files() const { return order_; }
  const SourceModule& module(const std::string& canonical) const { return modules_.at(canonical); }
  std::string canonical(const std::string& path) const;

  // Declarations contributed by a file, in order.
  std::vector<const Definition*> definitions_of(const std::string& canonical) const;

  std::size_t prelude_count() const { return prelude_count_; }
  std::size_t visits() const { return visits_; }

 private:
  void visit(const std::string& canonical, std::vector<std::string>& stack, const SourceSpan& from);

  Environment env_;
  std::vector<std::string> order_;
  std::set<std::string> done_;
  std::map<std::string, SourceModule> modules_;
  std::map<std::string, std::vector<std::string>> names_;
  std::size_t prelude_count_ = 0;
  std::size_t visits_ = 0;
};

// Constraint listing for print-universes: the global graph's edges, then the
// stored constraints of each polymorphic definition with parameters shown as
// `definition.param`.
std::vector<std::string> universe_listing(const Environment& env);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hott
