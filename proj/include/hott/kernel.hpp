#pragma once

#include <unordered_map>
#include <unordered_set>

#include "hott/env.hpp"

namespace hott {

// A de Bruijn telescope context: entry i's type may mention entries 0..i-1,
// where bvar 0 refers to the nearest enclosing entry.
struct ContextEntry {
  Name name;
  TermPtr type;
};
using Context = std::vector<ContextEntry>;

uint64_t next_unique_id();

// Trusted checker over one environment snapshot. Kernel operations are pure
// relative to (env, term); caches are per-snapshot and unobservable.
class TypeChecker {
 public:
  explicit TypeChecker(const Environment& env) : env_(env) {}

  const Environment& env() const { return env_; }

  // Weak-head normal form: beta, delta, iota, HIT point rules, level
  // instantiation. Input must be locally closed (fvars allowed).
  TermPtr whnf(const TermPtr& t);

  // Weak head reduction without unfolding the head constant.
  TermPtr whnf_core(const TermPtr& t);

  bool is_def_eq(const TermPtr& t, const TermPtr& u);

  // Type inference with full checking of applications.
  TermPtr infer(const TermPtr& t);

  // Spec-shaped wrappers over de Bruijn open terms.
  TermPtr infer_in_context(const Context& ctx, const TermPtr& t);
  bool is_def_eq_in_context(const Context& ctx, const TermPtr& t, const TermPtr& u);

  // whnf of infer, demanded to be a sort; returns its level.
  Level sort_level_of(const TermPtr& type);

  // Single iota / HIT point contraction at the head, if it applies.
  TermPtr iota_reduce(const TermPtr& t);
  TermPtr hit_point_reduce(const TermPtr& t);

  // Full normalization (every redex), guarded by a step budget.
  TermPtr normalize(const TermPtr& t, uint64_t fuel = 1000000);

 private:
  TermPtr unfold_definition(const TermPtr& t);  // head delta step or null
  TermPtr reduce_rules(const TermPtr& fn, const std::vector<TermPtr>& args);
  bool def_eq_core(TermPtr t, TermPtr u);
  bool def_eq_args(const TermPtr& t, const TermPtr& u);

  const Environment& env_;
  // Caches key by node address; the stored key pins the node so recycled
  // allocations can't alias.
  struct Entry {
    TermPtr key;
    TermPtr value;
  };
  std::unordered_map<const Term*, Entry> whnf_cache_;
  std::unordered_map<const Term*, Entry> infer_cache_;
  struct PairHash {
    size_t operator()(const std::pair<const Term*, const Term*>& p) const {
      return std::hash<const void*>{}(p.first) * 31 ^ std::hash<const void*>{}(p.second);
    }
  };
  struct PairEntry {
    TermPtr a, b;
    bool value;
  };
  std::unordered_map<std::pair<const Term*, const Term*>, PairEntry, PairHash>
      defeq_cache_;
  uint64_t normalize_fuel_ = 0;
  bool counting_fuel_ = false;
};

// Validates the declaration against the environment and commits it. For
// inductive declarations this also commits constructors, the generated
// recursor and its iota rules.
Environment check_declaration(const Environment& env, Declaration d);

// Names of axioms (and axiomatic HIT constants) in the transitive closure of
// the declaration; sorted.
std::vector<Name> collect_axioms(const Environment& env, const Name& name);

// Opens a telescope: creates fvars for the entries and returns them; `terms`
// entries are instantiated in place.
std::vector<TermPtr> open_context(const Context& ctx, std::vector<TermPtr*> terms);

}  // namespace hott
