#pragma once

#include <string>

#include "hott/elab.hpp"
#include "hott/hit.hpp"
#include "hott/kernel.hpp"
#include "hott/parser.hpp"
#include "hott/pretty.hpp"

namespace hott::test {

// Runs inline source through tokenize/parse/elaborate/check, threading the
// environment; throws on the first error (tests want hard failures).
inline Environment check_source(Environment env, const std::string& source,
                                ElabOptions opts = {}) {
  auto decls = parse_module(tokenize(source));
  for (const auto& d : decls) {
    switch (d.kind) {
      case DeclSyntaxKind::HitInit:
        env = d.hit_kind == "quotient" ? init_quotient(env) : init_trunc(env);
        break;
      case DeclSyntaxKind::Attribute: {
        for (const auto& a : d.attributes) {
          if (a == "class") env = env.set_class(d.name);
          else if (a == "instance") env = env.add_instance(d.name);
          else {
            const Declaration& decl = env.get(d.name);
            TermPtr t = decl.type;
            while (is_pi(t) && t->bind != Binding::Explicit) t = t->b;
            env = env.add_coercion(get_app_fn(t->a.get())->cname, d.name);
          }
        }
        break;
      }
      case DeclSyntaxKind::Directive: {
        Elaborator el(env, opts);
        if (d.directive == "defeq") {
          auto [lhs, lt] = el.elaborate_term(d.dir_t, true);
          auto [rhs, rt] = el.elaborate_term(d.dir_u, true);
          (void)lt;
          (void)rt;
          TypeChecker tc(env);
          if (!tc.is_def_eq(lhs, rhs))
            throw Error(ErrorClass::Kernel,
                        "#defeq failed: " + term_to_string(lhs) + " vs " +
                            term_to_string(rhs));
        }
        break;
      }
      case DeclSyntaxKind::Import:
        break;
      default: {
        Elaborator el(env, opts);
        ElabResult r = el.elaborate_declaration(d);
        env = check_declaration(env, r.decl);
        for (const auto& a : r.attributes) {
          if (a == "class") env = env.set_class(d.name);
          else if (a == "instance") env = env.add_instance(d.name);
          else {
            TermPtr t = r.decl.type;
            while (is_pi(t) && t->bind != Binding::Explicit) t = t->b;
            env = env.add_coercion(get_app_fn(t->a.get())->cname, d.name);
          }
        }
        break;
      }
    }
  }
  return env;
}

// Elaborates a closed term in the environment; returns (term, type).
inline std::pair<TermPtr, TermPtr> elab(const Environment& env, const std::string& s,
                                        ElabOptions opts = {}) {
  Elaborator el(env, opts);
  return el.elaborate_term(parse_term(tokenize(s)), true);
}

// Base datatypes shared by many tests.
inline const char* kBaseTypes = R"(
inductive unit : Type := | star : unit
inductive empty : Type :=
inductive bool : Type := | ff : bool | tt : bool
inductive nat : Type := | zero : nat | succ : nat -> nat
inductive sum (A : Type) (B : Type) : Type :=
| sum.inl : A -> sum A B
| sum.inr : B -> sum A B
definition inl {A : Type} {B : Type} (a : A) : sum A B := sum.inl A B a
definition inr {A : Type} {B : Type} (b : B) : sum A B := sum.inr A B b
inductive eq {A : Type} (a : A) : A -> Type := | refl : eq a a
)";

}  // namespace hott::test
