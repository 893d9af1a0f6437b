#pragma once

#include "hott/surface.hpp"
#include "hott/token.hpp"

namespace hott {

// Recursive-descent parser over the fixed notation table.
std::vector<SurfaceDecl> parse_module(const std::vector<Token>& tokens);

// Parses a single term (for `hottc norm`).
STPtr parse_term(const std::vector<Token>& tokens);

}  // namespace hott
