#pragma once

#include "hott/env.hpp"

namespace hott {

// Installs the typal quotient: formation, point constructor, path constructor,
// eliminator, the judgmental point rule and the axiomatic path rule.
// Prerequisites: eq, pathover, apd committed with the expected signatures.
Environment init_quotient(const Environment& env);

// Installs n-truncation: formation, point constructor, truncatedness
// constant (instance, axiomatic), eliminator and the judgmental point rule.
// Prerequisites: trunc_index, is_trunc.
Environment init_trunc(const Environment& env);

}  // namespace hott
