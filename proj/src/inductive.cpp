#include "hott/inductive.hpp"

#include <algorithm>

#include "hott/kernel.hpp"
#include "hott/pretty.hpp"

namespace hott {

namespace {

// Builds Pi/Lam chains from fvar lists by abstracting in reverse order.
TermPtr close_pis(const std::vector<TermPtr>& fvars, const std::vector<Binding>& binds,
                  TermPtr body) {
  for (size_t i = fvars.size(); i-- > 0;) {
    body = mk_pi(binds[i], fvars[i]->hint, fvars[i]->a, abstract(body, fvars[i]->id));
  }
  return body;
}

TermPtr close_lams(const std::vector<TermPtr>& fvars, const std::vector<Binding>& binds,
                   TermPtr body) {
  for (size_t i = fvars.size(); i-- > 0;)
    body = mk_lam(binds[i], fvars[i]->hint, fvars[i]->a, abstract(body, fvars[i]->id));
  return body;
}

// Opens a stored telescope (de Bruijn, each entry seeing the previous ones
// plus `outer` fvars) into fvars.
std::vector<TermPtr> open_telescope(const std::vector<TelescopeEntry>& tele,
                                    const std::vector<TermPtr>& outer) {
  std::vector<TermPtr> fvars;
  for (const auto& e : tele) {
    std::vector<TermPtr> subst;
    for (auto it = fvars.rbegin(); it != fvars.rend(); ++it) subst.push_back(*it);
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) subst.push_back(*it);
    fvars.push_back(mk_fvar(next_unique_id(), e.name, instantiate(e.type, subst)));
  }
  return fvars;
}

std::vector<TermPtr> reversed_subst(const std::vector<TermPtr>& a,
                                    const std::vector<TermPtr>& b = {}) {
  std::vector<TermPtr> subst;
  for (auto it = b.rbegin(); it != b.rend(); ++it) subst.push_back(*it);
  for (auto it = a.rbegin(); it != a.rend(); ++it) subst.push_back(*it);
  return subst;
}

bool mentions(const TermPtr& t, const Name& n) {
  std::vector<Name> cs;
  collect_consts(t, cs);
  return std::find(cs.begin(), cs.end(), n) != cs.end();
}

std::vector<Level> param_levels(const std::vector<Name>& ps) {
  std::vector<Level> ls;
  ls.reserve(ps.size());
  for (const auto& p : ps) ls.push_back(Level::param(p));
  return ls;
}

}  // namespace

TermPtr inductive_type(const InductiveSpec& spec) {
  // Built de Bruijn-first: params ++ indices are already stored as one
  // well-scoped chain.
  TermPtr body = mk_sort(spec.result_level);
  auto fold = [&](const std::vector<TelescopeEntry>& tele) {
    for (size_t i = tele.size(); i-- > 0;)
      body = mk_pi(tele[i].bind, tele[i].name, tele[i].type, body);
  };
  fold(spec.indices);
  fold(spec.params);
  return body;
}

TermPtr constructor_type(const InductiveSpec& spec, size_t j) {
  const ConstructorSpec& c = spec.constructors[j];
  // T params result_indices, under the params ++ args telescope.
  uint32_t nargs = static_cast<uint32_t>(c.args.size());
  uint32_t nparams = static_cast<uint32_t>(spec.params.size());
  TermPtr head = mk_const(spec.name, param_levels(spec.univ_params));
  for (uint32_t p = 0; p < nparams; ++p)
    head = mk_app(head, mk_bvar(nparams + nargs - 1 - p));
  for (const auto& idx : c.result_indices) head = mk_app(head, idx);
  TermPtr body = head;
  for (size_t i = c.args.size(); i-- > 0;)
    body = mk_pi(c.args[i].bind, c.args[i].name, c.args[i].type, body);
  for (size_t i = spec.params.size(); i-- > 0;)
    body = mk_pi(spec.params[i].bind, spec.params[i].name, spec.params[i].type, body);
  return body;
}

InductiveSpec check_inductive(const Environment& env, InductiveSpec spec) {
  // The family constant must be visible while checking constructor types.
  Environment env_with_family = env.contains(spec.name)
      ? env
      : env.extend(Declaration{spec.name, spec.univ_params, inductive_type(spec),
                               DeclKind::Inductive});
  TypeChecker tc(env_with_family);

  std::vector<TermPtr> pfvars = open_telescope(spec.params, {});
  for (const auto& f : pfvars) tc.sort_level_of(tc.infer(f->a));
  std::vector<TermPtr> ifvars = open_telescope(spec.indices, pfvars);
  for (const auto& f : ifvars) tc.sort_level_of(tc.infer(f->a));

  for (auto& ctor : spec.constructors) {
    ctor.recursive_args.clear();
    std::vector<TermPtr> afvars;
    for (size_t ai = 0; ai < ctor.args.size(); ++ai) {
      TermPtr aty = instantiate(ctor.args[ai].type, reversed_subst(pfvars, afvars));
      Level aty_level = tc.sort_level_of(tc.infer(aty));

      if (mentions(aty, spec.name)) {
        // Must be a strictly positive occurrence:
        //   Pi (tele not mentioning T), T params index-terms
        TermPtr cur = aty;
        std::vector<TermPtr> yfvars;
        while (is_pi(tc.whnf_core(cur))) {
          cur = tc.whnf_core(cur);
          if (mentions(cur->a, spec.name))
            throw Error(ErrorClass::Positivity,
                        "positivity violation in constructor '" + ctor.name +
                            "', argument " + std::to_string(ai + 1) +
                            ": the family occurs to the left of an arrow");
          TermPtr y = mk_fvar(next_unique_id(), cur->hint, cur->a);
          yfvars.push_back(y);
          cur = instantiate(cur->b, y);
        }
        std::vector<TermPtr> hargs;
        TermPtr head = get_app_fn_args(tc.whnf_core(cur), hargs);
        if (head->kind != TermKind::Const || head->cname != spec.name ||
            hargs.size() != spec.params.size() + spec.indices.size())
          throw Error(ErrorClass::Positivity,
                      "positivity violation in constructor '" + ctor.name +
                          "', argument " + std::to_string(ai + 1) +
                          ": recursive occurrence is not of the form 'Pi tele, " +
                          spec.name + " params indices'");
        for (size_t p = 0; p < spec.params.size(); ++p)
          if (!(hargs[p]->kind == TermKind::FVar && hargs[p]->id == pfvars[p]->id))
            throw Error(ErrorClass::Positivity,
                        "constructor '" + ctor.name +
                            "' instantiates the family at non-parameter values");
        for (size_t k = spec.params.size(); k < hargs.size(); ++k)
          if (mentions(hargs[k], spec.name))
            throw Error(ErrorClass::Positivity,
                        "constructor '" + ctor.name +
                            "': recursive occurrence nested in an index term");
        // Predicativity applies to the telescope domains of recursive args.
        for (const auto& y : yfvars) {
          Level dl = tc.sort_level_of(tc.infer(y->a));
          if (!level_geq(spec.result_level, dl))
            throw Error(ErrorClass::Universe,
                        "universe violation in constructor '" + ctor.name +
                            "': argument telescope at level " + level_to_string(dl) +
                            " exceeds the family's level " +
                            level_to_string(spec.result_level));
        }
        ctor.recursive_args.push_back(static_cast<uint32_t>(ai));
      } else {
        if (!level_geq(spec.result_level, aty_level))
          throw Error(ErrorClass::Universe,
                      "universe violation in constructor '" + ctor.name +
                          "', argument " + std::to_string(ai + 1) + ": level " +
                          level_to_string(aty_level) + " exceeds the family's level " +
                          level_to_string(spec.result_level));
      }
      afvars.push_back(mk_fvar(next_unique_id(), ctor.args[ai].name, aty));
    }

    // Result indices must be well-typed and free of the family.
    if (ctor.result_indices.size() != spec.indices.size())
      throw Error(ErrorClass::Kernel,
                  "constructor '" + ctor.name + "' has " +
                      std::to_string(ctor.result_indices.size()) +
                      " result indices, family expects " +
                      std::to_string(spec.indices.size()));
    TermPtr result = mk_const(spec.name, param_levels(spec.univ_params));
    for (const auto& p : pfvars) result = mk_app(result, p);
    for (const auto& idx : ctor.result_indices) {
      TermPtr i = instantiate(idx, reversed_subst(pfvars, afvars));
      if (mentions(i, spec.name))
        throw Error(ErrorClass::Positivity,
                    "constructor '" + ctor.name +
                        "': the family occurs in a result index");
      result = mk_app(result, i);
    }
    tc.sort_level_of(tc.infer(result));  // ill-formed result head errors here
  }
  return spec;
}

GeneratedRecursor generate_recursor(const Environment& env, const InductiveSpec& spec) {
  Environment env_with_family = env.contains(spec.name)
      ? env
      : env.extend(Declaration{spec.name, spec.univ_params, inductive_type(spec),
                               DeclKind::Inductive});
  (void)env_with_family;

  Name motive_level_name = "l";
  while (std::find(spec.univ_params.begin(), spec.univ_params.end(),
                   motive_level_name) != spec.univ_params.end())
    motive_level_name += "'";
  std::vector<Name> rec_univs{motive_level_name};
  rec_univs.insert(rec_univs.end(), spec.univ_params.begin(), spec.univ_params.end());

  std::vector<Level> fam_levels = param_levels(spec.univ_params);
  auto fam_const = [&] { return mk_const(spec.name, fam_levels); };

  std::vector<TermPtr> fvars;   // full outer telescope, in order
  std::vector<Binding> binds;

  // Parameters (implicit).
  std::vector<TermPtr> pfvars = open_telescope(spec.params, {});
  for (const auto& p : pfvars) {
    fvars.push_back(p);
    binds.push_back(Binding::Implicit);
  }

  // Motive: Pi indices (x : T params indices), Sort l.
  TermPtr motive_type;
  {
    std::vector<TermPtr> ifv = open_telescope(spec.indices, pfvars);
    TermPtr fam_app = fam_const();
    for (const auto& p : pfvars) fam_app = mk_app(fam_app, p);
    for (const auto& i : ifv) fam_app = mk_app(fam_app, i);
    TermPtr x = mk_fvar(next_unique_id(), "x", fam_app);
    std::vector<TermPtr> all = ifv;
    all.push_back(x);
    motive_type =
        close_pis(all, std::vector<Binding>(all.size(), Binding::Explicit),
                  mk_sort(Level::param(motive_level_name)));
  }
  TermPtr motive = mk_fvar(next_unique_id(), "C", motive_type);
  fvars.push_back(motive);
  binds.push_back(Binding::Implicit);

  // Minor premises.
  for (const auto& ctor : spec.constructors) {
    std::vector<TermPtr> afvars;
    for (const auto& a : ctor.args) {
      TermPtr aty = instantiate(a.type, reversed_subst(pfvars, afvars));
      afvars.push_back(mk_fvar(next_unique_id(), a.name, aty));
    }
    // Induction hypotheses for recursive args.
    std::vector<TermPtr> ihs;
    for (uint32_t r : ctor.recursive_args) {
      TermPtr aty = afvars[r]->a;
      std::vector<TermPtr> yfvars;
      TermPtr cur = aty;
      while (is_pi(cur)) {
        // Recursive arg telescopes are syntactic Pis here by construction.
        TermPtr y = mk_fvar(next_unique_id(), cur->hint, cur->a);
        yfvars.push_back(y);
        cur = instantiate(cur->b, y);
      }
      std::vector<TermPtr> hargs;
      get_app_fn_args(cur, hargs);
      TermPtr ih_body = motive;
      for (size_t k = spec.params.size(); k < hargs.size(); ++k)
        ih_body = mk_app(ih_body, hargs[k]);
      TermPtr rec_call_arg = afvars[r];
      for (const auto& y : yfvars) rec_call_arg = mk_app(rec_call_arg, y);
      ih_body = mk_app(ih_body, rec_call_arg);
      ihs.push_back(close_pis(yfvars,
                              std::vector<Binding>(yfvars.size(), Binding::Explicit),
                              ih_body));
    }
    // Conclusion: C result_indices (c params args).
    TermPtr concl = motive;
    for (const auto& idx : ctor.result_indices)
      concl = mk_app(concl, instantiate(idx, reversed_subst(pfvars, afvars)));
    TermPtr capp = mk_const(ctor.name, fam_levels);
    for (const auto& p : pfvars) capp = mk_app(capp, p);
    for (const auto& a : afvars) capp = mk_app(capp, a);
    concl = mk_app(concl, capp);

    // minor := Pi args, Pi ih-types, concl  (ih binders are explicit).
    std::vector<TermPtr> ihf;
    for (size_t i = 0; i < ihs.size(); ++i)
      ihf.push_back(mk_fvar(next_unique_id(),
                            afvars[ctor.recursive_args[i]]->hint + "_ih", ihs[i]));
    TermPtr minor = close_pis(ihf, std::vector<Binding>(ihf.size(), Binding::Explicit), concl);
    minor = close_pis(afvars, std::vector<Binding>(afvars.size(), Binding::Explicit), minor);
    fvars.push_back(mk_fvar(next_unique_id(), ctor.name + "_case", minor));
    binds.push_back(Binding::Explicit);
  }

  // Indices (implicit) and major premise (explicit).
  std::vector<TermPtr> ifvars = open_telescope(spec.indices, pfvars);
  for (const auto& i : ifvars) {
    fvars.push_back(i);
    binds.push_back(Binding::Implicit);
  }
  TermPtr fam_app = fam_const();
  for (const auto& p : pfvars) fam_app = mk_app(fam_app, p);
  for (const auto& i : ifvars) fam_app = mk_app(fam_app, i);
  TermPtr major = mk_fvar(next_unique_id(), "x", fam_app);
  fvars.push_back(major);
  binds.push_back(Binding::Explicit);

  TermPtr result = motive;
  for (const auto& i : ifvars) result = mk_app(result, i);
  result = mk_app(result, major);

  TermPtr rec_type = close_pis(fvars, binds, result);

  auto info = std::make_shared<RecursorInfo>();
  info->name = spec.name + ".rec";
  info->ind_name = spec.name;
  info->univ_params = rec_univs;
  info->num_params = static_cast<uint32_t>(spec.params.size());
  info->num_indices = static_cast<uint32_t>(spec.indices.size());
  info->num_minors = static_cast<uint32_t>(spec.constructors.size());
  for (const auto& c : spec.constructors) info->ctor_order.push_back(c.name);

  Declaration d;
  d.name = info->name;
  d.univ_params = rec_univs;
  d.type = rec_type;
  d.kind = DeclKind::Recursor;
  d.parent = spec.name;
  d.rec = info;
  return {std::move(d), info};
}

Environment commit_inductive(const Environment& env, InductiveSpec spec) {
  if (env.contains(spec.name))
    throw Error(ErrorClass::Kernel, "duplicate declaration '" + spec.name + "'");
  {
    // Universe hygiene for the family's own data.
    Declaration probe{spec.name, spec.univ_params, inductive_type(spec),
                      DeclKind::Inductive};
    TypeChecker tc(env);
    tc.sort_level_of(tc.infer(probe.type));
  }
  spec = check_inductive(env, std::move(spec));

  auto spec_ptr = std::make_shared<const InductiveSpec>(spec);
  Declaration fam{spec.name, spec.univ_params, inductive_type(spec), DeclKind::Inductive};
  fam.ind = spec_ptr;
  Environment e = env.extend(std::move(fam));

  for (size_t j = 0; j < spec.constructors.size(); ++j) {
    Declaration c{spec.constructors[j].name, spec.univ_params,
                  constructor_type(spec, j), DeclKind::Constructor};
    c.parent = spec.name;
    TypeChecker tc(e);
    tc.sort_level_of(tc.infer(c.type));
    e = e.extend(std::move(c));
  }

  GeneratedRecursor gr = generate_recursor(e, spec);
  {
    // The generated recursor type itself must type-check.
    TypeChecker tc(e);
    tc.sort_level_of(tc.infer(gr.decl.type));
  }
  e = e.extend(std::move(gr.decl));
  e = e.add_recursor_rule(gr.info);
  return e;
}

}  // namespace hott
