#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hott/term.hpp"

namespace hott {

// A validated inductive family schema. Parameter and index telescopes are
// stored as de Bruijn telescopes: entry i's type may mention entries 0..i-1
// (bvar 0 = the immediately preceding entry).
struct TelescopeEntry {
  Binding bind = Binding::Explicit;
  Name name;
  TermPtr type;
};

struct ConstructorSpec {
  Name name;
  // Argument telescope, in scope of the parameters (params are the outer
  // telescope). Result indices are in scope of params + args.
  std::vector<TelescopeEntry> args;
  std::vector<TermPtr> result_indices;
  // Positions (into args) of recursive arguments, each of shape
  // Pi tele, T params ts with tele not mentioning T.
  std::vector<uint32_t> recursive_args;
};

struct InductiveSpec {
  Name name;
  std::vector<Name> univ_params;
  std::vector<TelescopeEntry> params;
  std::vector<TelescopeEntry> indices;  // in scope of params
  Level result_level;
  std::vector<ConstructorSpec> constructors;
};

// Shape data for applying a generated recursor.
struct RecursorInfo {
  Name name;       // T.rec
  Name ind_name;   // T
  std::vector<Name> univ_params;  // motive level first, then T's params
  uint32_t num_params = 0;
  uint32_t num_indices = 0;
  uint32_t num_minors = 0;
  // Argument order: params, motive, minors, indices, major.
  uint32_t major_pos() const { return num_params + 1 + num_minors + num_indices; }
  std::vector<Name> ctor_order;  // minor i belongs to ctor_order[i]
};

enum class DeclKind : uint8_t {
  Definition,
  Axiom,
  Inductive,
  Constructor,
  Recursor,
  HitConstant,
};

struct Declaration {
  Name name;
  std::vector<Name> univ_params;
  TermPtr type;
  DeclKind kind = DeclKind::Definition;
  TermPtr value;                               // Definition
  std::shared_ptr<const InductiveSpec> ind;    // Inductive
  std::shared_ptr<const RecursorInfo> rec;     // Recursor
  Name parent;                                 // Constructor/Recursor: family
  // HitConstant: participates in print-axioms (quotient.rec_eq,
  // is_trunc_trunc); formation/point/path constructors and eliminators don't.
  bool axiomatic = false;
};

// Where a reduction rule came from; the registry is auditable.
enum class RuleProvenance : uint8_t { Iota, HitQuotient, HitTrunc };

// Point-computation rule for a HIT eliminator: when the major premise reduces
// to `point_ctor args`, the whole application contracts to
// elim_args[result_fn_pos] applied to the ctor args at `point_arg_positions`.
struct HitRule {
  Name elim;
  uint32_t elim_arity = 0;
  uint32_t major_pos = 0;
  Name point_ctor;
  uint32_t ctor_arity = 0;
  uint32_t result_fn_pos = 0;
  std::vector<uint32_t> point_arg_positions;
  RuleProvenance provenance = RuleProvenance::HitQuotient;
};

class Environment {
 public:
  Environment() = default;

  const Declaration* find(const Name& n) const;
  const Declaration& get(const Name& n) const;  // throws on missing
  bool contains(const Name& n) const { return find(n) != nullptr; }
  std::optional<uint32_t> decl_index(const Name& n) const;

  size_t size() const { return decls_.size(); }
  const Declaration& operator[](size_t i) const { return *decls_[i]; }

  // Append-only: committing produces an extended copy.
  Environment extend(Declaration d) const;

  // Attribute tables.
  bool is_class(const Name& n) const { return classes_.count(n) > 0; }
  bool is_instance(const Name& n) const;
  // Instance names, most recent first.
  std::vector<Name> instances_newest_first() const;
  const std::unordered_map<Name, Name>& coercions() const { return coercions_; }

  Environment set_class(const Name& n) const;
  Environment add_instance(const Name& n) const;
  // Registers n as the coercion for source head `src`; duplicate sources are
  // rejected eagerly.
  Environment add_coercion(const Name& src, const Name& n) const;

  // Reduction registry.
  const RecursorInfo* recursor_rule(const Name& head) const;
  const HitRule* hit_rule(const Name& head) const;
  Environment add_recursor_rule(std::shared_ptr<const RecursorInfo> info) const;
  Environment add_hit_rule(HitRule rule) const;
  const std::vector<HitRule>& hit_rules() const { return hit_rules_; }

 private:
  std::vector<std::shared_ptr<const Declaration>> decls_;
  std::unordered_map<Name, uint32_t> by_name_;
  std::unordered_map<Name, char> classes_;
  std::vector<Name> instances_;
  std::unordered_map<Name, Name> coercions_;  // source head -> coercion
  std::unordered_map<Name, std::shared_ptr<const RecursorInfo>> rec_rules_;
  std::vector<HitRule> hit_rules_;
};

}  // namespace hott
