#include "doctest.h"

#include "test_util.hpp"

using namespace hott;
using hott::test::check_source;
using hott::test::elab;

TEST_CASE("beta and eta") {
  Environment env;
  TypeChecker tc(env);
  TermPtr A = mk_sort(Level::zero());
  TermPtr a = mk_fvar(next_unique_id(), "a", A);

  // (lam x : A, x) a  whnf-> a
  TermPtr id_lam = mk_lam(Binding::Explicit, "x", A, mk_bvar(0));
  CHECK(term_eq(tc.whnf(mk_app(id_lam, a)), a));

  // eta: (lam x, f x) == f
  TermPtr fty = mk_pi(Binding::Explicit, "x", A, A);
  TermPtr f = mk_fvar(next_unique_id(), "f", fty);
  TermPtr eta = mk_lam(Binding::Explicit, "x", A, mk_app(f, mk_bvar(0)));
  CHECK(tc.is_def_eq(eta, f));
  CHECK(tc.is_def_eq(f, eta));
}

TEST_CASE("sort and pi typing rules") {
  Environment env;
  TypeChecker tc(env);
  Level u = Level::param("u");
  Level v = Level::param("v");

  // Type.{u} : Type.{u+1}
  CHECK(term_eq(tc.infer(mk_sort(u)), mk_sort(Level::succ(u))));

  // Pi (a : Type.{u}), Type.{v}  :  Type.{max (u+1) (v+1)}
  TermPtr pi = mk_pi(Binding::Explicit, "a", mk_sort(u), mk_sort(v));
  TermPtr ty = tc.infer(pi);
  REQUIRE(is_sort(ty));
  CHECK(level_eq(ty->level, Level::max(Level::succ(u), Level::succ(v))));

  // Pi over a family: A : Type.{u}, B : A -> Type.{v} |- (Pi a, B a) : Type.{max u v}
  TermPtr A = mk_fvar(next_unique_id(), "A", mk_sort(u));
  TermPtr B = mk_fvar(next_unique_id(), "B", mk_pi(Binding::Explicit, "a", A, mk_sort(v)));
  TermPtr pi2 = mk_pi(Binding::Explicit, "a", A, mk_app(B, mk_bvar(0)));
  TermPtr ty2 = tc.infer(pi2);
  REQUIRE(is_sort(ty2));
  CHECK(level_eq(ty2->level, Level::max(u, v)));
}

TEST_CASE("levels equal up to normalization in def-eq") {
  Environment env;
  TypeChecker tc(env);
  Level u = Level::param("u");
  Level v = Level::param("v");
  CHECK(tc.is_def_eq(mk_sort(Level::max(u, v)), mk_sort(Level::max(v, u))));
  CHECK(!tc.is_def_eq(mk_sort(u), mk_sort(v)));
}

TEST_CASE("delta unfolding and definitional equality through definitions") {
  Environment env = check_source({}, R"(
inductive bool : Type := | ff : bool | tt : bool
definition not (b : bool) : bool := @bool.rec (λ(x : bool), bool) tt ff b
definition not2 (b : bool) : bool := not (not b)
#defeq (not2 tt) tt
#defeq (not ff) tt
)");
  TypeChecker tc(env);
  CHECK(!tc.is_def_eq(mk_const("tt"), mk_const("ff")));
}

TEST_CASE("infer of constants checks level arity") {
  Environment env = check_source({}, "inductive unit : Type := | star : unit");
  TypeChecker tc(env);
  CHECK_THROWS_AS((void)tc.infer(mk_const("unit", {Level::zero()})), Error);
  CHECK_THROWS_AS((void)tc.infer(mk_const("missing")), Error);
}

TEST_CASE("application type mismatch is reported") {
  Environment env = check_source({}, R"(
inductive bool : Type := | ff : bool | tt : bool
inductive nat : Type := | zero : nat | succ : nat -> nat
definition bid (b : bool) : bool := b
)");
  TypeChecker tc(env);
  CHECK_THROWS_AS((void)tc.infer(mk_app(mk_const("bid"), mk_const("zero"))), Error);
}

TEST_CASE("check_declaration rejects bad definitions and duplicates") {
  Environment env = check_source({}, "inductive bool : Type := | ff : bool | tt : bool");

  // committing a value of the wrong type
  Declaration bad;
  bad.name = "bad";
  bad.type = mk_pi(Binding::Explicit, "b", mk_const("bool"), mk_const("bool"));
  bad.kind = DeclKind::Definition;
  bad.value = mk_const("tt");  // bool, not bool -> bool... wait tt : bool
  CHECK_THROWS_AS((void)check_declaration(env, bad), Error);

  Declaration dup;
  dup.name = "bool";
  dup.type = mk_sort(Level::zero());
  dup.kind = DeclKind::Axiom;
  CHECK_THROWS_AS((void)check_declaration(env, dup), Error);

  // universe parameter shadowing
  Declaration shadow;
  shadow.name = "sh";
  shadow.univ_params = {"u", "u"};
  shadow.type = mk_sort(Level::param("u"));
  shadow.kind = DeclKind::Axiom;
  CHECK_THROWS_AS((void)check_declaration(env, shadow), Error);
}

TEST_CASE("environment is append-only across commits") {
  Environment env = check_source({}, "inductive bool : Type := | ff : bool | tt : bool");
  size_t n = env.size();
  std::vector<const Declaration*> before;
  for (size_t i = 0; i < n; ++i) before.push_back(&env[i]);
  Environment env2 = check_source(env, "definition b0 : bool := ff");
  REQUIRE(env2.size() > n);
  for (size_t i = 0; i < n; ++i) {
    CHECK(&env[i] == before[i]);
    CHECK(env2[i].name == env[i].name);
  }
}

TEST_CASE("collect_axioms traverses transitively") {
  Environment env = check_source({}, R"(
inductive unit : Type := | star : unit
axiom mystery : unit
definition uses : unit := mystery
definition clean : unit := star
definition uses2 : unit := uses
)");
  CHECK(collect_axioms(env, "uses2") == std::vector<Name>{"mystery"});
  CHECK(collect_axioms(env, "clean").empty());
  CHECK_THROWS_AS((void)collect_axioms(env, "nope"), Error);
}

TEST_CASE("whnf idempotence on sample terms") {
  Environment env = check_source({}, R"(
inductive nat : Type := | zero : nat | succ : nat -> nat
definition double (n : nat) : nat := @nat.rec (λ(x : nat), nat) zero (λ(m : nat)(ih : nat), succ (succ ih)) n
definition two : nat := double (succ zero)
)");
  TypeChecker tc(env);
  TermPtr t = mk_const("two");
  TermPtr w = tc.whnf(t);
  CHECK(term_eq(tc.whnf(w), w));
  // two whnf-reduces to a succ-headed value
  CHECK(is_const(get_app_fn(w), "succ"));
}

TEST_CASE("normalize computes full normal forms with fuel") {
  Environment env = check_source({}, R"(
inductive nat : Type := | zero : nat | succ : nat -> nat
definition plus (a : nat) (b : nat) : nat := @nat.rec (λ(x : nat), nat) a (λ(m : nat)(ih : nat), succ ih) b
)");
  TypeChecker tc(env);
  auto [t, ty] = elab(env, "plus (succ zero) (succ (succ zero))");
  (void)ty;
  TermPtr n = tc.normalize(t);
  CHECK(term_eq(n, mk_app(mk_const("succ"),
                          mk_app(mk_const("succ"), mk_app(mk_const("succ"),
                                                          mk_const("zero"))))));
  // fuel exhaustion raises
  CHECK_THROWS_AS((void)tc.normalize(t, 1), Error);
}
