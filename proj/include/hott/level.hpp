#pragma once

#include <memory>
#include <vector>

#include "hott/common.hpp"

namespace hott {

// Universe level expressions: zero, succ, max, named parameters, and (during
// elaboration only) level metavariables. Values are immutable and shared.
enum class LevelKind : uint8_t { Zero, Succ, Max, Param, Meta };

class Level {
  struct Node {
    LevelKind kind;
    std::shared_ptr<const Node> a, b;
    Name name;
    uint64_t meta_id = 0;
    bool has_meta = false;
    explicit Node(LevelKind k) : kind(k) {}
  };

 public:
  Level() : Level(zero()) {}

  static Level zero();
  static Level succ(Level l);
  static Level max(Level a, Level b);
  static Level param(Name n);
  static Level meta(uint64_t id);
  static Level of_nat(unsigned k);  // succ^k zero

  LevelKind kind() const { return node_->kind; }
  Level arg0() const { return Level(node_->a); }  // Succ, Max
  Level arg1() const { return Level(node_->b); }  // Max
  const Name& param_name() const { return node_->name; }
  uint64_t meta_id() const { return node_->meta_id; }

  bool has_meta() const { return node_->has_meta; }
  bool is_zero() const { return kind() == LevelKind::Zero; }

  // Exact structural equality (not semantic).
  friend bool structurally_equal(const Level& a, const Level& b);

 private:
  explicit Level(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// One atom of a level normal form: offset + base, where base is either the
// distinguished constant atom (param empty, is_meta false), a parameter, or a
// level meta. A level denotes the max of its atoms.
struct LevelAtom {
  unsigned offset = 0;
  Name param;          // empty for constant/meta atoms
  bool is_meta = false;
  uint64_t meta_id = 0;
};

// Canonical normal form: subsumption-pruned atom set, sorted by
// (parameter name, offset), constant atom first, rebuilt as a right-nested max.
Level level_normalize(const Level& l);

std::vector<LevelAtom> level_atoms(const Level& l);

// Definitional equality of levels: identical normal forms.
bool level_eq(const Level& a, const Level& b);

// True iff a >= b under every assignment of naturals to parameters.
// Requires meta-free inputs.
bool level_geq(const Level& a, const Level& b);

// Collect parameter names (deduplicated, in traversal order).
void collect_level_params(const Level& l, std::vector<Name>& out);

// Substitute parameters; params and args must have equal length.
Level instantiate_level(const Level& l, const std::vector<Name>& params,
                        const std::vector<Level>& args);

std::string level_to_string(const Level& l);

}  // namespace hott
