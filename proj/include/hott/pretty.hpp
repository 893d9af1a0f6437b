#pragma once

#include "hott/term.hpp"

namespace hott {

// Deterministic printer for kernel terms. Binders are shown with their
// visibility brackets; applications left-associated; constants print level
// arguments only when `with_levels` is set.
std::string term_to_string(const TermPtr& t, bool with_levels = false);

}  // namespace hott
