#pragma once

#include <map>
#include <optional>

#include "hott/kernel.hpp"
#include "hott/surface.hpp"

namespace hott {

struct ElabOptions {
  unsigned max_class_depth = 32;
};

// Result of elaborating one surface declaration. Inductive declarations carry
// the validated-shape spec; the kernel re-validates on commit.
struct ElabResult {
  Declaration decl;
  std::vector<Name> attributes;
};

// Turns surface declarations into kernel declarations: inserts metavariables
// for implicits and holes, solves them by first-order unification, inserts
// coercions at mismatches, and discharges instance-implicit arguments by
// depth-limited backward chaining. Untrusted: the kernel re-checks all output.
class Elaborator {
 public:
  Elaborator(const Environment& env, ElabOptions opts = {});

  ElabResult elaborate_declaration(const SurfaceDecl& d);

  // Elaborates a closed term; returns (term, type), fully zonked. Remaining
  // level metas are defaulted to fresh parameters only if `generalize` is set,
  // otherwise they are an error.
  std::pair<TermPtr, TermPtr> elaborate_term(const STPtr& t, bool generalize = false);

  ~Elaborator();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace hott
