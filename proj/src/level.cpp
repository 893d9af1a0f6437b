#include "hott/level.hpp"

#include <algorithm>
#include <map>

namespace hott {

Level Level::zero() {
  static const Level z{std::make_shared<const Node>(LevelKind::Zero)};
  return z;
}

Level Level::succ(Level l) {
  auto n = std::make_shared<Node>(LevelKind::Succ);
  n->has_meta = l.has_meta();
  n->a = std::move(l.node_);
  return Level{std::shared_ptr<const Node>(std::move(n))};
}

Level Level::max(Level a, Level b) {
  auto n = std::make_shared<Node>(LevelKind::Max);
  n->has_meta = a.has_meta() || b.has_meta();
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  return Level{std::shared_ptr<const Node>(std::move(n))};
}

Level Level::param(Name name) {
  auto n = std::make_shared<Node>(LevelKind::Param);
  n->name = std::move(name);
  return Level{std::shared_ptr<const Node>(std::move(n))};
}

Level Level::meta(uint64_t id) {
  auto n = std::make_shared<Node>(LevelKind::Meta);
  n->meta_id = id;
  n->has_meta = true;
  return Level{std::shared_ptr<const Node>(std::move(n))};
}

Level Level::of_nat(unsigned k) {
  Level l = zero();
  for (unsigned i = 0; i < k; ++i) l = succ(l);
  return l;
}

bool structurally_equal(const Level& a, const Level& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LevelKind::Zero: return true;
    case LevelKind::Succ: return structurally_equal(a.arg0(), b.arg0());
    case LevelKind::Max:
      return structurally_equal(a.arg0(), b.arg0()) &&
             structurally_equal(a.arg1(), b.arg1());
    case LevelKind::Param: return a.param_name() == b.param_name();
    case LevelKind::Meta: return a.meta_id() == b.meta_id();
  }
  return false;
}

namespace {

void collect_atoms(const Level& l, unsigned offset, std::vector<LevelAtom>& out) {
  switch (l.kind()) {
    case LevelKind::Zero:
      out.push_back({offset, {}, false, 0});
      return;
    case LevelKind::Succ:
      collect_atoms(l.arg0(), offset + 1, out);
      return;
    case LevelKind::Max:
      collect_atoms(l.arg0(), offset, out);
      collect_atoms(l.arg1(), offset, out);
      return;
    case LevelKind::Param:
      out.push_back({offset, l.param_name(), false, 0});
      return;
    case LevelKind::Meta:
      out.push_back({offset, {}, true, l.meta_id()});
      return;
  }
}

// Atom sort key: constant atom first, then params by name, then metas by id.
bool atom_less(const LevelAtom& a, const LevelAtom& b) {
  int ka = a.is_meta ? 2 : (a.param.empty() ? 0 : 1);
  int kb = b.is_meta ? 2 : (b.param.empty() ? 0 : 1);
  if (ka != kb) return ka < kb;
  if (ka == 1 && a.param != b.param) return a.param < b.param;
  if (ka == 2 && a.meta_id != b.meta_id) return a.meta_id < b.meta_id;
  return a.offset < b.offset;
}

}  // namespace

std::vector<LevelAtom> level_atoms(const Level& l) {
  std::vector<LevelAtom> atoms;
  collect_atoms(l, 0, atoms);
  std::sort(atoms.begin(), atoms.end(), atom_less);

  // Keep one atom per base: the largest offset wins.
  std::vector<LevelAtom> pruned;
  for (const auto& a : atoms) {
    if (!pruned.empty()) {
      auto& p = pruned.back();
      bool same_base = p.is_meta == a.is_meta && p.param == a.param &&
                       p.meta_id == a.meta_id;
      if (same_base) {
        p.offset = std::max(p.offset, a.offset);
        continue;
      }
    }
    pruned.push_back(a);
  }

  // Drop the constant atom k when some variable atom k'+p has k' >= k:
  // since p >= 0 under every assignment, the variable atom subsumes it.
  if (!pruned.empty() && pruned.front().param.empty() && !pruned.front().is_meta &&
      pruned.size() > 1) {
    unsigned k = pruned.front().offset;
    bool subsumed = false;
    for (size_t i = 1; i < pruned.size(); ++i)
      if (pruned[i].offset >= k) { subsumed = true; break; }
    if (subsumed) pruned.erase(pruned.begin());
  }
  return pruned;
}

Level level_normalize(const Level& l) {
  std::vector<LevelAtom> atoms = level_atoms(l);
  auto rebuild_atom = [](const LevelAtom& a) {
    Level base = a.is_meta ? Level::meta(a.meta_id)
               : a.param.empty() ? Level::zero()
                                 : Level::param(a.param);
    for (unsigned i = 0; i < a.offset; ++i) base = Level::succ(base);
    return base;
  };
  Level result = rebuild_atom(atoms.back());
  for (size_t i = atoms.size() - 1; i-- > 0;)
    result = Level::max(rebuild_atom(atoms[i]), result);
  return result;
}

bool level_eq(const Level& a, const Level& b) {
  if (structurally_equal(a, b)) return true;
  return structurally_equal(level_normalize(a), level_normalize(b));
}

bool level_geq(const Level& a, const Level& b) {
  auto aa = level_atoms(a);
  auto ba = level_atoms(b);
  // Value of `a` at the all-zero assignment.
  unsigned a_floor = 0;
  for (const auto& at : aa) a_floor = std::max(a_floor, at.offset);
  for (const auto& bt : ba) {
    if (bt.param.empty() && !bt.is_meta) {
      if (a_floor < bt.offset) return false;
      continue;
    }
    // Variable atom: a must carry the same base at an offset at least as big
    // (set the base huge, everything else contributes a bounded amount).
    bool found = false;
    for (const auto& at : aa) {
      if (at.is_meta == bt.is_meta && at.param == bt.param &&
          at.meta_id == bt.meta_id && at.offset >= bt.offset) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void collect_level_params(const Level& l, std::vector<Name>& out) {
  switch (l.kind()) {
    case LevelKind::Zero:
    case LevelKind::Meta:
      return;
    case LevelKind::Succ:
      collect_level_params(l.arg0(), out);
      return;
    case LevelKind::Max:
      collect_level_params(l.arg0(), out);
      collect_level_params(l.arg1(), out);
      return;
    case LevelKind::Param:
      if (std::find(out.begin(), out.end(), l.param_name()) == out.end())
        out.push_back(l.param_name());
      return;
  }
}

Level instantiate_level(const Level& l, const std::vector<Name>& params,
                        const std::vector<Level>& args) {
  switch (l.kind()) {
    case LevelKind::Zero:
    case LevelKind::Meta:
      return l;
    case LevelKind::Succ:
      return Level::succ(instantiate_level(l.arg0(), params, args));
    case LevelKind::Max:
      return Level::max(instantiate_level(l.arg0(), params, args),
                        instantiate_level(l.arg1(), params, args));
    case LevelKind::Param:
      for (size_t i = 0; i < params.size(); ++i)
        if (params[i] == l.param_name()) return args[i];
      return l;
  }
  return l;
}

std::string level_to_string(const Level& l) {
  switch (l.kind()) {
    case LevelKind::Zero: return "0";
    case LevelKind::Succ: {
      // Print succ^k of a non-succ base as base+k (or a bare numeral).
      unsigned k = 0;
      Level base = l;
      while (base.kind() == LevelKind::Succ) {
        ++k;
        base = base.arg0();
      }
      if (base.is_zero()) return std::to_string(k);
      return level_to_string(base) + "+" + std::to_string(k);
    }
    case LevelKind::Max:
      return "(max " + level_to_string(l.arg0()) + " " + level_to_string(l.arg1()) + ")";
    case LevelKind::Param: return l.param_name();
    case LevelKind::Meta: return "?u" + std::to_string(l.meta_id());
  }
  return "?";
}

}  // namespace hott
