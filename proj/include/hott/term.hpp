#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hott/level.hpp"

namespace hott {

enum class TermKind : uint8_t { BVar, Sort, Const, App, Lam, Pi, FVar, Meta };

// Binder visibility. Carried on binders but irrelevant to definitional
// equality.
enum class Binding : uint8_t { Explicit, Implicit, Inst };

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term node. Bound variables are de Bruijn indices; free variables
// (FVar) carry their type and are introduced when the checker or elaborator
// goes under a binder, so locally closed terms stay self-contained.
// Metavariables appear only inside the elaborator.
class Term {
 public:
  TermKind kind;

  // Cached structural facts.
  uint32_t loose_bvars = 0;  // 1 + max loose index (0 = locally closed)
  bool has_fvar = false;
  bool has_meta = false;     // term metas or level metas anywhere below

  uint32_t bvar_idx = 0;               // BVar
  Level level;                         // Sort
  Name cname;                          // Const
  std::vector<Level> levels;           // Const
  uint64_t id = 0;                     // FVar, Meta
  TermPtr a, b;  // App: fn/arg. Lam/Pi: dom/body. FVar: a = type.
  Binding bind = Binding::Explicit;    // Lam, Pi
  Name hint;                           // Lam, Pi, FVar name hint

  explicit Term(TermKind k) : kind(k) {}
};

TermPtr mk_bvar(uint32_t idx);
TermPtr mk_sort(Level l);
TermPtr mk_const(Name n, std::vector<Level> levels = {});
TermPtr mk_app(TermPtr fn, TermPtr arg);
TermPtr mk_app(TermPtr fn, std::span<const TermPtr> args);
TermPtr mk_lam(Binding b, Name hint, TermPtr dom, TermPtr body);
TermPtr mk_pi(Binding b, Name hint, TermPtr dom, TermPtr body);
TermPtr mk_arrow(TermPtr dom, TermPtr cod);  // non-dependent Pi
TermPtr mk_fvar(uint64_t id, Name hint, TermPtr type);
TermPtr mk_meta(uint64_t id);

bool is_sort(const TermPtr& t);
bool is_pi(const TermPtr& t);
bool is_lam(const TermPtr& t);
bool is_app(const TermPtr& t);
bool is_const(const TermPtr& t, const Name& n);

// Head of an application spine and the argument list in order.
const Term* get_app_fn(const Term* t);
TermPtr get_app_fn(const TermPtr& t);
void get_app_args(const TermPtr& t, std::vector<TermPtr>& args);
TermPtr get_app_fn_args(const TermPtr& t, std::vector<TermPtr>& args);

// Replace loose bvars 0..n-1 by args[0..n-1] (0 is the innermost binder);
// looser indices shift down by n.
TermPtr instantiate(const TermPtr& t, std::span<const TermPtr> args);
TermPtr instantiate(const TermPtr& t, const TermPtr& a);

// Replace the free variables `fvars` by loose bvars: fvars[i] becomes
// bvar(n-1-i) at depth 0, so abstracting [x] then binding yields the usual
// lambda. instantiate(abstract(t, {x}), {x}) == t.
TermPtr abstract(const TermPtr& t, std::span<const uint64_t> fvar_ids);
TermPtr abstract(const TermPtr& t, uint64_t fvar_id);

// Shift loose bvars >= cutoff up by `by`.
TermPtr shift(const TermPtr& t, uint32_t by, uint32_t cutoff = 0);

// Substitute universe parameters throughout.
TermPtr instantiate_level_params(const TermPtr& t, const std::vector<Name>& params,
                                 const std::vector<Level>& args);

// Exact structural equality, visibility and hints ignored; levels compared
// structurally.
bool term_eq(const TermPtr& a, const TermPtr& b);

size_t term_hash(const TermPtr& t);

// Collect ids of free variables occurring in t.
void collect_fvars(const TermPtr& t, std::vector<uint64_t>& out);
bool contains_fvar(const TermPtr& t, uint64_t id);

// Collect metavariable ids (term metas only).
void collect_metas(const TermPtr& t, std::vector<uint64_t>& out);

void collect_consts(const TermPtr& t, std::vector<Name>& out);

void collect_level_params(const TermPtr& t, std::vector<Name>& out);

size_t term_size(const TermPtr& t);

}  // namespace hott
