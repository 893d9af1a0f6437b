#include "hott/hit.hpp"

#include "hott/kernel.hpp"
#include "hott/pretty.hpp"

namespace hott {

namespace {

struct Tele {
  std::vector<TermPtr> fvars;
  std::vector<Binding> binds;

  TermPtr push(Binding b, Name n, TermPtr type) {
    TermPtr x = mk_fvar(next_unique_id(), std::move(n), std::move(type));
    fvars.push_back(x);
    binds.push_back(b);
    return x;
  }

  TermPtr pis(TermPtr body) const {
    for (size_t i = fvars.size(); i-- > 0;)
      body = mk_pi(binds[i], fvars[i]->hint, fvars[i]->a, abstract(body, fvars[i]->id));
    return body;
  }
};

TermPtr app(TermPtr f, std::initializer_list<TermPtr> args) {
  for (const auto& a : args) f = mk_app(f, a);
  return f;
}

void check_prerequisite(const Environment& env, const char* hit, const Name& name,
                        const std::vector<Name>& canonical_univs,
                        const TermPtr& expected) {
  const Declaration* d = env.find(name);
  if (!d)
    throw Error(ErrorClass::Prerequisite,
                std::string("hit ") + hit + ": prerequisite '" + name +
                    "' is not declared");
  if (d->univ_params.size() != canonical_univs.size())
    throw Error(ErrorClass::Prerequisite,
                std::string("hit ") + hit + ": prerequisite '" + name + "' takes " +
                    std::to_string(d->univ_params.size()) +
                    " universe parameters, expected " +
                    std::to_string(canonical_univs.size()));
  std::vector<Level> ls;
  for (const auto& u : canonical_univs) ls.push_back(Level::param(u));
  TermPtr declared = instantiate_level_params(d->type, d->univ_params, ls);
  TypeChecker tc(env);
  if (!tc.is_def_eq(declared, expected))
    throw Error(ErrorClass::Prerequisite,
                std::string("hit ") + hit + ": prerequisite '" + name +
                    "' has signature '" + term_to_string(declared) +
                    "', expected '" + term_to_string(expected) + "'");
}

Environment commit(Environment env, Declaration d) {
  TypeChecker tc(env);
  tc.sort_level_of(tc.infer(d.type));
  return env.extend(std::move(d));
}

}  // namespace

Environment init_quotient(const Environment& env) {
  Level u = Level::param("u");
  Level v = Level::param("v");
  Level l = Level::param("l");
  Level maxuv = Level::max(u, v);

  // Expected prerequisite signatures.
  {
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    t.push(Binding::Explicit, "a", A);
    t.push(Binding::Explicit, "a'", A);
    check_prerequisite(env, "quotient", "eq", {"u"}, t.pis(mk_sort(u)));
  }
  auto eq_app = [&](Level lvl, TermPtr A, TermPtr x, TermPtr y) {
    return app(mk_const("eq", {lvl}), {A, x, y});
  };
  {
    // pathover : Pi {A : Type.{u}} (C : A -> Type.{v}) {a : A} (x : C a)
    //              {a' : A} (p : eq a a') (y : C a'), Type.{max u v}
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr C = t.push(Binding::Explicit, "C",
                       mk_pi(Binding::Explicit, "a", A, mk_sort(v)));
    TermPtr a = t.push(Binding::Implicit, "a", A);
    t.push(Binding::Explicit, "x", mk_app(C, a));
    TermPtr a2 = t.push(Binding::Implicit, "a'", A);
    t.push(Binding::Explicit, "p", eq_app(u, A, a, a2));
    t.push(Binding::Explicit, "y", mk_app(C, a2));
    check_prerequisite(env, "quotient", "pathover", {"u", "v"}, t.pis(mk_sort(maxuv)));
  }
  auto pathover_app = [&](Level lu, Level lv, TermPtr A, TermPtr C, TermPtr a,
                          TermPtr x, TermPtr a2, TermPtr p, TermPtr y) {
    return app(mk_const("pathover", {lu, lv}), {A, C, a, x, a2, p, y});
  };
  {
    // apd : Pi {A : Type.{u}} {C : A -> Type.{v}} (f : Pi a, C a)
    //          {a a' : A} (p : eq a a'), pathover C (f a) p (f a')
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr C = t.push(Binding::Implicit, "C",
                       mk_pi(Binding::Explicit, "a", A, mk_sort(v)));
    Tele inner;
    TermPtr ia = inner.push(Binding::Explicit, "a", A);
    TermPtr f = t.push(Binding::Explicit, "f", inner.pis(mk_app(C, ia)));
    TermPtr a = t.push(Binding::Implicit, "a", A);
    TermPtr a2 = t.push(Binding::Implicit, "a'", A);
    TermPtr p = t.push(Binding::Explicit, "p", eq_app(u, A, a, a2));
    TermPtr body = pathover_app(u, v, A, C, a, mk_app(f, a), a2, p, mk_app(f, a2));
    check_prerequisite(env, "quotient", "apd", {"u", "v"}, t.pis(body));
  }

  Environment e = env;
  auto rel_type = [&](TermPtr A) {
    // A -> A -> Type.{v}
    Tele t;
    t.push(Binding::Explicit, "x", A);
    t.push(Binding::Explicit, "y", A);
    return t.pis(mk_sort(v));
  };

  // quotient : Pi {A : Type.{u}} (R : A -> A -> Type.{v}), Type.{max u v}
  {
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    t.push(Binding::Explicit, "R", rel_type(A));
    Declaration d{"quotient", {"u", "v"}, t.pis(mk_sort(maxuv)), DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }
  auto quotient_app = [&](TermPtr A, TermPtr R) {
    return app(mk_const("quotient", {u, v}), {A, R});
  };
  auto mk_app_q = [&](TermPtr A, TermPtr R, TermPtr a) {
    return app(mk_const("quotient.mk", {u, v}), {A, R, a});
  };

  // quotient.mk : Pi {A} {R}, A -> quotient R
  {
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr R = t.push(Binding::Implicit, "R", rel_type(A));
    t.push(Binding::Explicit, "a", A);
    Declaration d{"quotient.mk", {"u", "v"}, t.pis(quotient_app(A, R)),
                  DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }

  // quotient.eq_of_rel : Pi {A} {R} {x y}, R x y -> mk x = mk y
  {
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr R = t.push(Binding::Implicit, "R", rel_type(A));
    TermPtr x = t.push(Binding::Implicit, "x", A);
    TermPtr y = t.push(Binding::Implicit, "y", A);
    t.push(Binding::Explicit, "r", app(R, {x, y}));
    TermPtr body = eq_app(maxuv, quotient_app(A, R), mk_app_q(A, R, x), mk_app_q(A, R, y));
    Declaration d{"quotient.eq_of_rel", {"u", "v"}, t.pis(body), DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }

  // quotient.rec :
  //   Pi {A} {R} {P : quotient R -> Type.{l}}
  //      (f : Pi a, P (mk a))
  //      (h : Pi {x y} (r : R x y), pathover P (f x) (eq_of_rel r) (f y))
  //      (q : quotient R), P q
  TermPtr rec_type;
  {
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr R = t.push(Binding::Implicit, "R", rel_type(A));
    TermPtr Q = quotient_app(A, R);
    TermPtr P = t.push(Binding::Implicit, "P",
                       mk_pi(Binding::Explicit, "q", Q, mk_sort(l)));
    TermPtr f;
    {
      Tele ft;
      TermPtr a = ft.push(Binding::Explicit, "a", A);
      f = t.push(Binding::Explicit, "f", ft.pis(mk_app(P, mk_app_q(A, R, a))));
    }
    {
      Tele ht;
      TermPtr x = ht.push(Binding::Implicit, "x", A);
      TermPtr y = ht.push(Binding::Implicit, "y", A);
      TermPtr r = ht.push(Binding::Explicit, "r", app(R, {x, y}));
      TermPtr el = app(mk_const("quotient.eq_of_rel", {u, v}), {A, R, x, y, r});
      TermPtr body = pathover_app(maxuv, l, Q, P, mk_app_q(A, R, x), mk_app(f, x),
                                  mk_app_q(A, R, y), el, mk_app(f, y));
      t.push(Binding::Explicit, "h", ht.pis(body));
    }
    TermPtr q = t.push(Binding::Explicit, "q", Q);
    rec_type = t.pis(mk_app(P, q));
    Declaration d{"quotient.rec", {"l", "u", "v"}, rec_type, DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }

  // Point rule: quotient.rec A R P f h (quotient.mk A R a) ~> f a
  {
    HitRule rule;
    rule.elim = "quotient.rec";
    rule.elim_arity = 6;
    rule.major_pos = 5;
    rule.point_ctor = "quotient.mk";
    rule.ctor_arity = 3;
    rule.result_fn_pos = 3;
    rule.point_arg_positions = {2};
    rule.provenance = RuleProvenance::HitQuotient;
    e = e.add_hit_rule(std::move(rule));
  }

  // quotient.rec_eq : apd (quotient.rec f h) (eq_of_rel r) = h x y r   (axiom)
  {
    Level lq = Level::max(maxuv, l);
    Tele t;
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr R = t.push(Binding::Implicit, "R", rel_type(A));
    TermPtr Q = quotient_app(A, R);
    TermPtr P = t.push(Binding::Implicit, "P",
                       mk_pi(Binding::Explicit, "q", Q, mk_sort(l)));
    TermPtr f;
    {
      Tele ft;
      TermPtr a = ft.push(Binding::Explicit, "a", A);
      f = t.push(Binding::Explicit, "f", ft.pis(mk_app(P, mk_app_q(A, R, a))));
    }
    TermPtr h;
    {
      Tele ht;
      TermPtr x = ht.push(Binding::Implicit, "x", A);
      TermPtr y = ht.push(Binding::Implicit, "y", A);
      TermPtr r = ht.push(Binding::Explicit, "r", app(R, {x, y}));
      TermPtr el = app(mk_const("quotient.eq_of_rel", {u, v}), {A, R, x, y, r});
      TermPtr body = pathover_app(maxuv, l, Q, P, mk_app_q(A, R, x), mk_app(f, x),
                                  mk_app_q(A, R, y), el, mk_app(f, y));
      h = t.push(Binding::Explicit, "h", ht.pis(body));
    }
    TermPtr x = t.push(Binding::Implicit, "x", A);
    TermPtr y = t.push(Binding::Implicit, "y", A);
    TermPtr r = t.push(Binding::Explicit, "r", app(R, {x, y}));
    TermPtr el = app(mk_const("quotient.eq_of_rel", {u, v}), {A, R, x, y, r});
    TermPtr rec_partial = app(mk_const("quotient.rec", {l, u, v}), {A, R, P, f, h});
    TermPtr lhs = app(mk_const("apd", {maxuv, l}),
                      {Q, P, rec_partial, mk_app_q(A, R, x), mk_app_q(A, R, y), el});
    TermPtr rhs = app(h, {x, y, r});
    TermPtr pov = pathover_app(maxuv, l, Q, P, mk_app_q(A, R, x), mk_app(f, x),
                               mk_app_q(A, R, y), el, mk_app(f, y));
    TermPtr body = eq_app(lq, pov, lhs, rhs);
    Declaration d{"quotient.rec_eq", {"l", "u", "v"}, t.pis(body), DeclKind::HitConstant};
    d.axiomatic = true;
    e = commit(e, std::move(d));
  }

  return e;
}

Environment init_trunc(const Environment& env) {
  Level u = Level::param("u");
  Level l = Level::param("l");

  {
    check_prerequisite(env, "trunc", "trunc_index", {}, mk_sort(Level::zero()));
  }
  {
    // is_trunc : Pi (n : trunc_index) (A : Type.{u}), Type.{u}
    Tele t;
    t.push(Binding::Explicit, "n", mk_const("trunc_index"));
    t.push(Binding::Explicit, "A", mk_sort(u));
    check_prerequisite(env, "trunc", "is_trunc", {"u"}, t.pis(mk_sort(u)));
  }

  Environment e = env;
  TermPtr tidx = mk_const("trunc_index");

  // trunc : Pi (n : trunc_index) (A : Type.{u}), Type.{u}
  {
    Tele t;
    t.push(Binding::Explicit, "n", tidx);
    t.push(Binding::Explicit, "A", mk_sort(u));
    Declaration d{"trunc", {"u"}, t.pis(mk_sort(u)), DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }
  auto trunc_app = [&](TermPtr n, TermPtr A) {
    return app(mk_const("trunc", {u}), {n, A});
  };

  // tr : Pi {n} {A}, A -> trunc n A
  {
    Tele t;
    TermPtr n = t.push(Binding::Implicit, "n", tidx);
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    t.push(Binding::Explicit, "a", A);
    Declaration d{"tr", {"u"}, t.pis(trunc_app(n, A)), DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }

  // is_trunc_trunc : Pi (n) (A), is_trunc n (trunc n A)   (axiomatic, instance)
  {
    Tele t;
    TermPtr n = t.push(Binding::Explicit, "n", tidx);
    TermPtr A = t.push(Binding::Explicit, "A", mk_sort(u));
    TermPtr body = app(mk_const("is_trunc", {u}), {n, trunc_app(n, A)});
    Declaration d{"is_trunc_trunc", {"u"}, t.pis(body), DeclKind::HitConstant};
    d.axiomatic = true;
    e = commit(e, std::move(d));
    e = e.add_instance("is_trunc_trunc");
  }

  // trunc.rec : Pi {n} {A} {P : trunc n A -> Type.{l}}
  //                [H : Pi x, is_trunc n (P x)]
  //                (f : Pi a, P (tr a)) (x : trunc n A), P x
  {
    Tele t;
    TermPtr n = t.push(Binding::Implicit, "n", tidx);
    TermPtr A = t.push(Binding::Implicit, "A", mk_sort(u));
    TermPtr TnA = trunc_app(n, A);
    TermPtr P = t.push(Binding::Implicit, "P",
                       mk_pi(Binding::Explicit, "x", TnA, mk_sort(l)));
    {
      Tele ht;
      TermPtr x = ht.push(Binding::Explicit, "x", TnA);
      t.push(Binding::Inst, "H",
             ht.pis(app(mk_const("is_trunc", {l}), {n, mk_app(P, x)})));
    }
    {
      Tele ft;
      TermPtr a = ft.push(Binding::Explicit, "a", A);
      TermPtr tra = app(mk_const("tr", {u}), {n, A, a});
      t.push(Binding::Explicit, "f", ft.pis(mk_app(P, tra)));
    }
    TermPtr x = t.push(Binding::Explicit, "x", TnA);
    Declaration d{"trunc.rec", {"l", "u"}, t.pis(mk_app(P, x)), DeclKind::HitConstant};
    e = commit(e, std::move(d));
  }

  {
    HitRule rule;
    rule.elim = "trunc.rec";
    rule.elim_arity = 6;
    rule.major_pos = 5;
    rule.point_ctor = "tr";
    rule.ctor_arity = 3;
    rule.result_fn_pos = 4;
    rule.point_arg_positions = {2};
    rule.provenance = RuleProvenance::HitTrunc;
    e = e.add_hit_rule(std::move(rule));
  }

  return e;
}

}  // namespace hott
