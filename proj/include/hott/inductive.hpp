#pragma once

#include "hott/env.hpp"

namespace hott {

// Validates strict positivity, constructor result shape and predicativity.
// Fills in ConstructorSpec::recursive_args. Throws on violation.
InductiveSpec check_inductive(const Environment& env, InductiveSpec spec);

struct GeneratedRecursor {
  Declaration decl;
  std::shared_ptr<const RecursorInfo> info;
};

// Builds the dependent eliminator for a validated spec. Total.
GeneratedRecursor generate_recursor(const Environment& env, const InductiveSpec& spec);

// check_inductive + commit family, constructors, recursor and iota rule.
Environment commit_inductive(const Environment& env, InductiveSpec spec);

// The family's type as a term: Pi params indices, Sort result_level.
TermPtr inductive_type(const InductiveSpec& spec);

// Constructor j's type: Pi params args, T params result_indices.
TermPtr constructor_type(const InductiveSpec& spec, size_t j);

}  // namespace hott
