#include "doctest.h"

#include "hott/kernel.hpp"
#include "hott/term.hpp"

using namespace hott;

TEST_CASE("substitution calculus") {
  TermPtr A = mk_const("A");
  TermPtr a = mk_const("a");

  // instantiate(var 0, [a]) = a
  CHECK(term_eq(instantiate(mk_bvar(0), a), a));

  // instantiate(app(var 1, var 0), [a]) = app(var 0, a)
  TermPtr t = mk_app(mk_bvar(1), mk_bvar(0));
  CHECK(term_eq(instantiate(t, a), mk_app(mk_bvar(0), a)));

  // shift(var 0, by 2) = var 2
  CHECK(term_eq(shift(mk_bvar(0), 2), mk_bvar(2)));

  // shift respects the cutoff: bound occurrences stay put
  TermPtr lam = mk_lam(Binding::Explicit, "x", A, mk_app(mk_bvar(0), mk_bvar(1)));
  TermPtr shifted = shift(lam, 3);
  CHECK(term_eq(shifted,
                mk_lam(Binding::Explicit, "x", A, mk_app(mk_bvar(0), mk_bvar(4)))));
}

TEST_CASE("abstract/instantiate round trip") {
  TermPtr A = mk_const("A");
  TermPtr x = mk_fvar(next_unique_id(), "x", A);
  TermPtr y = mk_fvar(next_unique_id(), "y", A);
  TermPtr t = mk_app(mk_app(mk_const("f"), x), mk_app(mk_const("g"), y));

  TermPtr abs = abstract(t, x->id);
  CHECK(!contains_fvar(abs, x->id));
  CHECK(term_eq(instantiate(abs, x), t));

  // two at once: abstract [x, y] gives x -> bvar 1, y -> bvar 0
  std::vector<uint64_t> ids{x->id, y->id};
  TermPtr abs2 = abstract(t, ids);
  std::vector<TermPtr> args{y, x};  // bvar0 first
  CHECK(term_eq(instantiate(abs2, args), t));
}

TEST_CASE("multi-argument instantiate indexes from the innermost binder") {
  // body under two binders: app(bvar1, bvar0); instantiate [b0, b1]
  TermPtr body = mk_app(mk_bvar(1), mk_bvar(0));
  TermPtr p = mk_const("p");
  TermPtr q = mk_const("q");
  std::vector<TermPtr> args{p, q};  // bvar0 := p, bvar1 := q
  CHECK(term_eq(instantiate(body, args), mk_app(q, p)));
}

TEST_CASE("level params instantiate through terms") {
  TermPtr t = mk_app(mk_const("f", {Level::param("u")}),
                     mk_sort(Level::succ(Level::param("u"))));
  TermPtr r = instantiate_level_params(t, {"u"}, {Level::zero()});
  CHECK(term_eq(r, mk_app(mk_const("f", {Level::zero()}),
                          mk_sort(Level::of_nat(1)))));
}

TEST_CASE("loose bvar accounting") {
  CHECK(mk_bvar(3)->loose_bvars == 4);
  TermPtr lam = mk_lam(Binding::Explicit, "x", mk_const("A"), mk_bvar(0));
  CHECK(lam->loose_bvars == 0);
  TermPtr lam2 = mk_lam(Binding::Explicit, "x", mk_const("A"), mk_bvar(1));
  CHECK(lam2->loose_bvars == 1);
}
