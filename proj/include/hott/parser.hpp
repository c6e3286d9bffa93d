#pragma once

#include <string>
#include <string_view>

#include "hott/syntax.hpp"

namespace hott {

// Throws HottError(ParseError) with a span inside the text and the set of
// tokens that would have been accepted.
// `primitive` declarations are only accepted when allow_primitive is set
// (the built-in prelude).
SourceModule parse_module(std::string_view text, const std::string& path = "<input>", bool allow_primitive = false);
SExprPtr parse_expr(std::string_view text, const std::string& path = "<input>");

}  // namespace hott
