#pragma once

#include <memory>
#include <vector>

#include "hott/level.hpp"
#include "hott/term.hpp"

namespace hott {

enum class SurfKind : uint8_t {
  Var,          // name, optional explicit levels
  Sort,         // Type, optional level
  App,
  Lam,
  Pi,
  Arrow,        // eliminated by desugaring
  ExplicitApp,  // @name atoms (no implicit insertion)
  Hole,         // _
  Sugar,        // fixed-notation node, eliminated by desugaring
};

struct SurfaceTerm;
using STPtr = std::shared_ptr<const SurfaceTerm>;

struct SurfaceBinder {
  Name name;
  STPtr type;  // may be null (unannotated)
  Binding vis = Binding::Explicit;
  Span span;
};

struct SurfaceTerm {
  SurfKind kind;
  Span span;
  Name name;                  // Var, ExplicitApp head, Sugar notation id
  std::vector<Level> levels;  // Var `.{...}` / Sort level
  bool has_levels = false;
  STPtr a, b;                 // App fn/arg; Arrow dom/cod; Lam/Pi body in b
  SurfaceBinder binder;       // Lam/Pi
  std::vector<STPtr> args;    // ExplicitApp args / Sugar parts
};

STPtr mk_svar(Name n, Span s, std::vector<Level> levels = {}, bool has_levels = false);
STPtr mk_ssort(Span s, Level l = Level::zero(), bool has_level = false);
STPtr mk_sapp(STPtr f, STPtr a, Span s);
STPtr mk_slam(SurfaceBinder b, STPtr body, Span s);
STPtr mk_spi(SurfaceBinder b, STPtr body, Span s);
STPtr mk_sarrow(STPtr dom, STPtr cod, Span s);
STPtr mk_sexplicit(Name head, std::vector<Level> levels, std::vector<STPtr> args, Span s);
STPtr mk_shole(Span s);
STPtr mk_ssugar(Name id, std::vector<STPtr> parts, Span s);

enum class DeclSyntaxKind : uint8_t {
  Definition,
  Axiom,
  Inductive,
  HitInit,
  Attribute,
  Import,
  Directive,
};

struct SurfaceCtor {
  Name name;
  STPtr type;
  Span span;
};

struct SurfaceDecl {
  DeclSyntaxKind kind;
  Span span;
  Name name;
  std::vector<Name> univ_params;
  std::vector<SurfaceBinder> binders;
  STPtr type;
  STPtr value;
  std::vector<SurfaceCtor> ctors;
  std::vector<Name> attributes;  // subset of {class, instance, coercion}
  Name hit_kind;                 // "quotient" | "trunc"
  std::string import_path;
  Name directive;  // "defeq" | "check" | "print_axioms" | "normalize"
  STPtr dir_t, dir_u;
  Name dir_name;
};

// Eliminates Arrow and Sugar nodes per the fixed notation table. Total and
// idempotent on parser output.
STPtr desugar(const STPtr& t);

// Structural equality of surface trees (spans ignored).
bool surface_eq(const STPtr& a, const STPtr& b);
bool surface_decl_eq(const SurfaceDecl& a, const SurfaceDecl& b);

// Prints a surface tree so that re-parsing yields an identical tree.
std::string surface_to_string(const STPtr& t);
std::string surface_decl_to_string(const SurfaceDecl& d);

}  // namespace hott
