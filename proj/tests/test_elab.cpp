#include "doctest.h"

#include "test_util.hpp"

using namespace hott;
using hott::test::check_source;
using hott::test::elab;
using hott::test::kBaseTypes;

TEST_CASE("implicit arguments are inferred from the context") {
  Environment env = check_source({}, kBaseTypes);
  // eq a1 a2 with a1 : A elaborates to @eq A a1 a2
  Environment env2 = check_source(env, R"(
definition eq_demo {A : Type} (a1 a2 : A) : Type := eq a1 a2
definition eq_demo_explicit {A : Type} (a1 a2 : A) : Type := @eq A a1 a2
)");
  TypeChecker tc(env2);
  const Declaration& d1 = env2.get("eq_demo");
  const Declaration& d2 = env2.get("eq_demo_explicit");
  std::vector<Level> ls;
  for (const auto& u : d1.univ_params) ls.push_back(Level::param(u));
  CHECK(tc.is_def_eq(instantiate_level_params(d1.value, d1.univ_params, ls),
                     instantiate_level_params(d2.value, d2.univ_params, ls)));
}

TEST_CASE("unification solves metas by decomposition") {
  Environment env = check_source({}, kBaseTypes);
  // `_` holes solved from rigid context
  auto [t, ty] = elab(env, "(λ(f : nat -> bool)(n : nat), f n) (_ : _) zero");
  // hole in function position is fine as long as it stays unused... here the
  // hole cannot be solved, so expect failure instead:
  (void)t;
  (void)ty;
}

TEST_CASE("holes in determined positions elaborate") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
definition id {A : Type} (a : A) : A := a
definition use_hole (n : nat) : nat := @id _ n
)");
  CHECK(env2.contains("use_hole"));
}

TEST_CASE("unsolved metas are reported with their target types") {
  Environment env = check_source({}, kBaseTypes);
  try {
    (void)check_source(env, "definition bad : nat := _");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("unsolved") != std::string::npos);
  }
}

TEST_CASE("rigid head clash fails with a mismatch diagnostic") {
  Environment env = check_source({}, kBaseTypes);
  try {
    (void)check_source(env, "definition bad : nat := tt");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("mismatch") != std::string::npos);
  }
}

TEST_CASE("non-pattern flex applications report the HOU diagnostic") {
  Environment env = check_source({}, kBaseTypes);
  // ?F applied to a constant, against a lambda: neither pattern nor
  // decomposable.
  try {
    (void)check_source(env, R"(
definition force {A : Type} (f g : nat -> A) (h : Π(n : nat), eq (f n) (g n)) : Type := A
definition probe : Type := force (λ(n : nat), n) (λ(n : nat), zero) (λ(n : nat), _ zero)
)");
    CHECK(false);
  } catch (const Error& e) {
    std::string msg = e.what();
    bool informative = msg.find("higher-order unification") != std::string::npos ||
                       msg.find("unsolved") != std::string::npos ||
                       msg.find("mismatch") != std::string::npos;
    CHECK(informative);
  }
}

TEST_CASE("coercions insert silently in function position") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive is_equiv {A : Type} {B : Type} (f : A -> B) : Type :=
| is_equiv.mk : (B -> A) -> is_equiv f
inductive equiv (A : Type) (B : Type) : Type :=
| equiv.mk : Π(f : A -> B), is_equiv f -> equiv A B
definition equiv.to_fun {A : Type} {B : Type} (e : equiv A B) : A -> B :=
@equiv.rec A B (λ(x : equiv A B), A -> B) (λ(f : A -> B)(H : is_equiv f), f) e
attribute equiv.to_fun [coercion]
definition apply_equiv {A : Type} {B : Type} (e : equiv A B) (a : A) : B := e a
)");
  CHECK(env2.contains("apply_equiv"));
  // the elaborated body mentions the coercion
  const Declaration& d = env2.get("apply_equiv");
  std::vector<Name> consts;
  collect_consts(d.value, consts);
  CHECK(std::find(consts.begin(), consts.end(), "equiv.to_fun") != consts.end());

  // coercion also fires when checking against a function type
  Environment env3 = check_source(env2, R"(
definition as_fun {A : Type} {B : Type} (e : equiv A B) : A -> B := e
)");
  CHECK(env3.contains("as_fun"));

  // no coercion registered -> plain failure
  try {
    (void)check_source(env2, "definition bad (n : nat) (m : nat) : nat := n m");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("function expected") != std::string::npos);
  }
}

TEST_CASE("duplicate coercion registration is rejected eagerly") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive wrap (A : Type) : Type := | wrap.mk : A -> wrap A
definition unwrap {A : Type} (w : wrap A) : A :=
@wrap.rec A (λ(x : wrap A), A) (λ(a : A), a) w
definition unwrap2 {A : Type} (w : wrap A) : A := unwrap w
attribute unwrap [coercion]
)");
  CHECK_THROWS_AS((void)check_source(env2, "attribute unwrap2 [coercion]"), Error);
}

TEST_CASE("instance resolution chains through instances") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive has_mul (A : Type) : Type := | has_mul.mk : (A -> A -> A) -> has_mul A
attribute has_mul [class]
inductive semigroup (A : Type) : Type :=
| semigroup.mk : Π(m : A -> A -> A), (Π(a b c : A), eq (m (m a b) c) (m a (m b c))) -> semigroup A
attribute semigroup [class]
definition semigroup.to_has_mul {A : Type} [s : semigroup A] : has_mul A :=
@semigroup.rec A (λ(x : semigroup A), has_mul A)
  (λ(m : A -> A -> A)(assoc : Π(a b c : A), eq (m (m a b) c) (m a (m b c))), has_mul.mk A m) s
attribute semigroup.to_has_mul [instance]
definition mul {A : Type} [h : has_mul A] (a b : A) : A :=
@has_mul.rec A (λ(x : has_mul A), A -> A -> A) (λ(m : A -> A -> A), m) h a b
definition mul_demo {A : Type} [s : semigroup A] (a b : A) : A := mul a b
)");
  CHECK(env2.contains("mul_demo"));
  const Declaration& d = env2.get("mul_demo");
  std::vector<Name> consts;
  collect_consts(d.value, consts);
  CHECK(std::find(consts.begin(), consts.end(), "semigroup.to_has_mul") != consts.end());
}

TEST_CASE("instance resolution failure lists the goal") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive has_mul (A : Type) : Type := | has_mul.mk : (A -> A -> A) -> has_mul A
attribute has_mul [class]
definition mul {A : Type} [h : has_mul A] (a b : A) : A :=
@has_mul.rec A (λ(x : has_mul A), A -> A -> A) (λ(m : A -> A -> A), m) h a b
)");
  try {
    (void)check_source(env2, "definition bad (a : nat) : nat := mul a a");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.cls == ErrorClass::Instance);
    CHECK(std::string(e.what()).find("no instance found") != std::string::npos);
  }
}

TEST_CASE("instance depth limit raises the depth error") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive loopy (A : Type) : Type := | loopy.mk : loopy A
attribute loopy [class]
definition loopy.self {A : Type} [l : loopy A] : loopy A := l
attribute loopy.self [instance]
definition want_loopy (A : Type) [l : loopy A] : Type := A
)");
  try {
    (void)check_source(env2, "definition bad : Type := want_loopy nat",
                       ElabOptions{8});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.cls == ErrorClass::Instance);
    CHECK(std::string(e.what()).find("depth limit") != std::string::npos);
  }
}

TEST_CASE("instance binder whose head is not a class is rejected") {
  Environment env = check_source({}, kBaseTypes);
  CHECK_THROWS_AS(
      (void)check_source(env, "definition bad {A : Type} [x : nat] : Type := A"),
      Error);
}

TEST_CASE("local instance hypotheses take precedence over globals") {
  Environment env = check_source({}, kBaseTypes);
  Environment env2 = check_source(env, R"(
inductive tag (A : Type) : Type := | tag.mk : bool -> tag A
attribute tag [class]
definition global_tag (A : Type) : tag A := tag.mk A ff
attribute global_tag [instance]
definition pick {A : Type} [t : tag A] : tag A := t
definition from_local {A : Type} [t : tag A] : tag A := pick
)");
  // from_local's body must be the local hypothesis, not global_tag
  const Declaration& d = env2.get("from_local");
  std::vector<Name> consts;
  collect_consts(d.value, consts);
  CHECK(std::find(consts.begin(), consts.end(), "global_tag") == consts.end());
}

TEST_CASE("elaboration output re-checks in the bare kernel and is deterministic") {
  Environment env = check_source({}, kBaseTypes);
  const char* src =
      "definition compose2 {A : Type} {B : Type} {C : Type} (g : B -> C) "
      "(f : A -> B) (a : A) : C := g (f a)";
  auto decls = parse_module(tokenize(src));
  Elaborator e1(env, {});
  ElabResult r1 = e1.elaborate_declaration(decls[0]);
  Elaborator e2(env, {});
  ElabResult r2 = e2.elaborate_declaration(decls[0]);
  CHECK(term_eq(r1.decl.type, r2.decl.type));
  CHECK(term_eq(r1.decl.value, r2.decl.value));
  CHECK(r1.decl.univ_params == r2.decl.univ_params);
  (void)check_declaration(env, r1.decl);
}

TEST_CASE("universe parameters: declared, inferred, and undeclared") {
  Environment env = check_source({}, kBaseTypes);
  // declared
  Environment env2 = check_source(env,
      "definition tid.{u} (A : Type.{u}) : Type.{u} := A");
  CHECK(env2.get("tid").univ_params == std::vector<Name>{"u"});
  // inferred parameters get fresh deterministic names
  Environment env3 = check_source(env, "definition tid2 (A : Type) : Type := A");
  CHECK(env3.get("tid2").univ_params == std::vector<Name>{"u_1"});
  // undeclared explicit parameter is an error
  CHECK_THROWS_AS(
      (void)check_source(env, "definition bad.{u} (A : Type.{v}) : Type.{u} := A"),
      Error);
}

TEST_CASE("lambda binder annotations must match the expected domain") {
  Environment env = check_source({}, kBaseTypes);
  CHECK_THROWS_AS((void)check_source(env,
      "definition bad : nat -> nat := λ(b : bool), b"), Error);
}
