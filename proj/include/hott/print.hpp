#pragma once

#include <string>
#include <vector>

#include "hott/syntax.hpp"
#include "hott/term.hpp"

namespace hott {

// Kernel terms in surface notation. `names` are the context's binder names,
// outermost first; `level_names` name the definition's level parameters.
std::string print_term(const Term& t, const std::vector<std::string>& names = {},
                       const std::vector<std::string>& level_names = {});

std::string print_level(const SLevel& l);
std::string print_expr(const SExpr& e);
std::string print_decl(const Decl& d);
std::string print_module(const SourceModule& m);

}  // namespace hott
