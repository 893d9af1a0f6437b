#include "hott/kernel.hpp"

#include <algorithm>
#include <atomic>

#include "hott/inductive.hpp"
#include "hott/pretty.hpp"

namespace hott {

uint64_t next_unique_id() {
  static std::atomic<uint64_t> counter{1};
  return counter.fetch_add(1);
}

namespace {

[[noreturn]] void kernel_error(const std::string& msg) {
  throw Error(ErrorClass::Kernel, msg);
}

bool is_unfoldable(const Declaration* d) {
  return d && d->kind == DeclKind::Definition;
}

}  // namespace

TermPtr TypeChecker::unfold_definition(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr fn = get_app_fn_args(t, args);
  if (fn->kind != TermKind::Const) return nullptr;
  const Declaration* d = env_.find(fn->cname);
  if (!is_unfoldable(d)) return nullptr;
  if (d->univ_params.size() != fn->levels.size()) return nullptr;
  TermPtr val = instantiate_level_params(d->value, d->univ_params, fn->levels);
  return mk_app(std::move(val), args);
}

// Iota: `T.rec params motive minors indices (c params args) extra...`
// contracts to `minor args ihs extra...`.
TermPtr TypeChecker::reduce_rules(const TermPtr& fn, const std::vector<TermPtr>& args) {
  if (fn->kind != TermKind::Const) return nullptr;

  if (const HitRule* hr = env_.hit_rule(fn->cname)) {
    if (args.size() < hr->major_pos + 1) return nullptr;
    TermPtr major = whnf(args[hr->major_pos]);
    std::vector<TermPtr> cargs;
    TermPtr chead = get_app_fn_args(major, cargs);
    if (chead->kind != TermKind::Const || chead->cname != hr->point_ctor ||
        cargs.size() != hr->ctor_arity)
      return nullptr;
    TermPtr result = args[hr->result_fn_pos];
    for (uint32_t p : hr->point_arg_positions) result = mk_app(result, cargs[p]);
    for (size_t i = hr->major_pos + 1; i < args.size(); ++i)
      result = mk_app(result, args[i]);
    return result;
  }

  const RecursorInfo* ri = env_.recursor_rule(fn->cname);
  if (!ri) return nullptr;
  uint32_t major_pos = ri->major_pos();
  if (args.size() < major_pos + 1) return nullptr;
  TermPtr major = whnf(args[major_pos]);
  std::vector<TermPtr> cargs;
  TermPtr chead = get_app_fn_args(major, cargs);
  if (chead->kind != TermKind::Const) return nullptr;
  auto it = std::find(ri->ctor_order.begin(), ri->ctor_order.end(), chead->cname);
  if (it == ri->ctor_order.end()) return nullptr;
  size_t minor_idx = static_cast<size_t>(it - ri->ctor_order.begin());

  const Declaration& cdecl = env_.get(chead->cname);

  // Walk the constructor's type, instantiating with the actual arguments, to
  // recover each argument's type (recursive ones drive ih construction).
  TermPtr ctype = instantiate_level_params(cdecl.type, cdecl.univ_params, chead->levels);
  size_t total = cargs.size();
  if (total < ri->num_params) return nullptr;
  std::vector<TermPtr> arg_types;  // for non-param args only
  {
    size_t i = 0;
    TermPtr cur = ctype;
    for (; i < total; ++i) {
      cur = whnf(cur);
      if (!is_pi(cur)) return nullptr;  // over-saturated constructor: stuck
      if (i >= ri->num_params) arg_types.push_back(cur->a);
      cur = instantiate(cur->b, cargs[i]);
    }
    cur = whnf(cur);
    if (is_pi(cur)) return nullptr;  // under-applied constructor: stuck
  }

  TermPtr minor = args[ri->num_params + 1 + minor_idx];
  TermPtr result = minor;
  for (size_t i = ri->num_params; i < total; ++i) result = mk_app(result, cargs[i]);

  // Induction hypotheses, in argument order.
  for (size_t i = ri->num_params; i < total; ++i) {
    TermPtr at = arg_types[i - ri->num_params];
    // Peel the argument's Pi telescope; if the bottom is the family applied
    // to params + indices, this is a recursive argument.
    std::vector<TermPtr> tele;
    TermPtr bot = at;
    while (is_pi(bot)) {
      tele.push_back(bot);
      bot = bot->b;
    }
    std::vector<TermPtr> fargs;
    TermPtr fhead = get_app_fn_args(bot, fargs);
    if (fhead->kind != TermKind::Const || fhead->cname != ri->ind_name) continue;

    // ih = lam tele, rec levels params motive minors idx (arg y*)
    TermPtr body = fn;  // the recursor constant with its level args
    for (uint32_t p = 0; p < ri->num_params; ++p) body = mk_app(body, args[p]);
    body = mk_app(body, args[ri->num_params]);  // motive
    for (uint32_t m = 0; m < ri->num_minors; ++m)
      body = mk_app(body, args[ri->num_params + 1 + m]);
    for (size_t k = ri->num_params; k < fargs.size(); ++k)
      body = mk_app(body, fargs[k]);  // indices (scope: tele bvars)
    uint32_t depth = static_cast<uint32_t>(tele.size());
    TermPtr rec_arg = shift(cargs[i], depth);
    for (uint32_t y = 0; y < depth; ++y)
      rec_arg = mk_app(rec_arg, mk_bvar(depth - 1 - y));
    body = mk_app(body, rec_arg);
    for (size_t y = tele.size(); y-- > 0;)
      body = mk_lam(tele[y]->bind, tele[y]->hint, tele[y]->a, body);
    result = mk_app(result, body);
  }

  for (size_t i = major_pos + 1; i < args.size(); ++i)
    result = mk_app(result, args[i]);
  return result;
}

TermPtr TypeChecker::whnf_core(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::BVar:
    case TermKind::Sort:
    case TermKind::Const:
    case TermKind::Lam:
    case TermKind::Pi:
    case TermKind::FVar:
    case TermKind::Meta:
      return t;
    case TermKind::App:
      break;
  }
  std::vector<TermPtr> args;
  TermPtr fn = get_app_fn_args(t, args);
  fn = whnf_core(fn);
  if (is_lam(fn)) {
    // Contract as many beta redexes as there are lambdas.
    size_t n = 0;
    TermPtr body = fn;
    while (is_lam(body) && n < args.size()) {
      body = body->b;
      ++n;
    }
    std::vector<TermPtr> rev(args.begin(), args.begin() + n);
    std::reverse(rev.begin(), rev.end());
    TermPtr r = instantiate(body, rev);
    r = mk_app(r, std::span<const TermPtr>(args.data() + n, args.size() - n));
    if (counting_fuel_ && normalize_fuel_-- == 0)
      throw Error(ErrorClass::Kernel, "fuel exhausted during normalization");
    return whnf_core(r);
  }
  if (TermPtr r = reduce_rules(fn, args)) {
    if (counting_fuel_ && normalize_fuel_-- == 0)
      throw Error(ErrorClass::Kernel, "fuel exhausted during normalization");
    return whnf_core(r);
  }
  return mk_app(fn, args);
}

TermPtr TypeChecker::whnf(const TermPtr& t) {
  auto it = whnf_cache_.find(t.get());
  if (it != whnf_cache_.end()) return it->second.value;
  TermPtr r = t;
  for (;;) {
    r = whnf_core(r);
    TermPtr next = unfold_definition(r);
    if (!next) break;
    if (counting_fuel_ && normalize_fuel_-- == 0)
      throw Error(ErrorClass::Kernel, "fuel exhausted during normalization");
    r = next;
  }
  if (!counting_fuel_) {
    whnf_cache_[t.get()] = Entry{t, r};
    whnf_cache_[r.get()] = Entry{r, r};
  }
  return r;
}

bool TypeChecker::def_eq_args(const TermPtr& t, const TermPtr& u) {
  std::vector<TermPtr> ta, ua;
  TermPtr tf = get_app_fn_args(t, ta);
  TermPtr uf = get_app_fn_args(u, ua);
  if (ta.size() != ua.size()) return false;
  for (size_t i = ta.size(); i-- > 0;)
    if (!is_def_eq(ta[i], ua[i])) return false;
  // Heads compared by the caller.
  (void)tf;
  (void)uf;
  return true;
}

bool TypeChecker::is_def_eq(const TermPtr& t, const TermPtr& u) {
  if (t == u || term_eq(t, u)) return true;
  auto key = std::make_pair(t.get(), u.get());
  auto it = defeq_cache_.find(key);
  if (it != defeq_cache_.end()) return it->second.value;
  bool r = def_eq_core(t, u);
  defeq_cache_[key] = PairEntry{t, u, r};
  defeq_cache_[std::make_pair(u.get(), t.get())] = PairEntry{u, t, r};
  return r;
}

bool TypeChecker::def_eq_core(TermPtr t, TermPtr u) {
  t = whnf_core(t);
  u = whnf_core(u);

  for (;;) {
    if (t == u || term_eq(t, u)) return true;

    // Structural cases that decide without delta.
    if (t->kind == TermKind::Sort && u->kind == TermKind::Sort)
      return level_eq(t->level, u->level);
    if ((t->kind == TermKind::Lam && u->kind == TermKind::Lam) ||
        (t->kind == TermKind::Pi && u->kind == TermKind::Pi)) {
      if (!is_def_eq(t->a, u->a)) return false;
      TermPtr x = mk_fvar(next_unique_id(), t->hint, t->a);
      return is_def_eq(instantiate(t->b, x), instantiate(u->b, x));
    }
    if (t->kind == TermKind::Lam && u->kind != TermKind::Lam &&
        u->kind != TermKind::Pi && u->kind != TermKind::Sort) {
      // eta: compare t with (lam x, u x)
      TermPtr ue = mk_lam(t->bind, t->hint, t->a, mk_app(shift(u, 1), mk_bvar(0)));
      return def_eq_core(t, ue);
    }
    if (u->kind == TermKind::Lam && t->kind != TermKind::Lam &&
        t->kind != TermKind::Pi && t->kind != TermKind::Sort) {
      TermPtr te = mk_lam(u->bind, u->hint, u->a, mk_app(shift(t, 1), mk_bvar(0)));
      return def_eq_core(te, u);
    }

    const Term* th = get_app_fn(t.get());
    const Term* uh = get_app_fn(u.get());

    // Same constant head: try arguments first (cheap path), fall back to delta.
    if (th->kind == TermKind::Const && uh->kind == TermKind::Const &&
        th->cname == uh->cname) {
      bool levels_ok = th->levels.size() == uh->levels.size();
      for (size_t i = 0; levels_ok && i < th->levels.size(); ++i)
        levels_ok = level_eq(th->levels[i], uh->levels[i]);
      if (levels_ok && def_eq_args(t, u)) return true;
    }

    // Lazy delta: unfold the later declaration first.
    const Declaration* td = th->kind == TermKind::Const ? env_.find(th->cname) : nullptr;
    const Declaration* ud = uh->kind == TermKind::Const ? env_.find(uh->cname) : nullptr;
    bool tu = is_unfoldable(td);
    bool uu = is_unfoldable(ud);
    if (!tu && !uu) break;
    if (tu && uu) {
      uint32_t ti = *env_.decl_index(td->name);
      uint32_t ui = *env_.decl_index(ud->name);
      if (ti == ui) {
        t = whnf_core(unfold_definition(t));
        u = whnf_core(unfold_definition(u));
      } else if (ti > ui) {
        t = whnf_core(unfold_definition(t));
      } else {
        u = whnf_core(unfold_definition(u));
      }
    } else if (tu) {
      t = whnf_core(unfold_definition(t));
    } else {
      u = whnf_core(unfold_definition(u));
    }
  }

  // Irreducible heads.
  const Term* th = get_app_fn(t.get());
  const Term* uh = get_app_fn(u.get());
  if (th->kind != uh->kind) return false;
  switch (th->kind) {
    case TermKind::FVar:
      return th->id == uh->id && def_eq_args(t, u);
    case TermKind::Const: {
      if (th->cname != uh->cname || th->levels.size() != uh->levels.size())
        return false;
      for (size_t i = 0; i < th->levels.size(); ++i)
        if (!level_eq(th->levels[i], uh->levels[i])) return false;
      return def_eq_args(t, u);
    }
    case TermKind::BVar:
      return th->bvar_idx == uh->bvar_idx && def_eq_args(t, u);
    case TermKind::Meta:
      return th->id == uh->id && def_eq_args(t, u);
    default:
      return false;
  }
}

Level TypeChecker::sort_level_of(const TermPtr& type) {
  TermPtr s = whnf(type);
  if (!is_sort(s))
    kernel_error("type expected, got '" + term_to_string(s) + "'");
  return s->level;
}

TermPtr TypeChecker::infer(const TermPtr& t) {
  auto it = infer_cache_.find(t.get());
  if (it != infer_cache_.end()) return it->second.value;
  TermPtr r;
  switch (t->kind) {
    case TermKind::BVar:
      kernel_error("unbound variable");
    case TermKind::Meta:
      kernel_error("metavariable in kernel term");
    case TermKind::FVar:
      r = t->a;
      break;
    case TermKind::Sort:
      r = mk_sort(Level::succ(t->level));
      break;
    case TermKind::Const: {
      const Declaration& d = env_.get(t->cname);
      if (d.univ_params.size() != t->levels.size())
        kernel_error("wrong number of level arguments for '" + t->cname + "': expected " +
                     std::to_string(d.univ_params.size()) + ", got " +
                     std::to_string(t->levels.size()));
      r = instantiate_level_params(d.type, d.univ_params, t->levels);
      break;
    }
    case TermKind::App: {
      TermPtr ft = whnf(infer(t->a));
      if (!is_pi(ft))
        kernel_error("function expected at '" + term_to_string(t->a) +
                     "', has type '" + term_to_string(ft) + "'");
      TermPtr at = infer(t->b);
      if (!is_def_eq(at, ft->a))
        kernel_error("type mismatch at application '" + term_to_string(t) +
                     "': argument has type '" + term_to_string(at) +
                     "', expected '" + term_to_string(ft->a) + "'");
      r = instantiate(ft->b, t->b);
      break;
    }
    case TermKind::Lam: {
      sort_level_of(infer(t->a));
      TermPtr x = mk_fvar(next_unique_id(), t->hint, t->a);
      TermPtr bt = infer(instantiate(t->b, x));
      r = mk_pi(t->bind, t->hint, t->a, abstract(bt, x->id));
      break;
    }
    case TermKind::Pi: {
      Level l1 = sort_level_of(infer(t->a));
      TermPtr x = mk_fvar(next_unique_id(), t->hint, t->a);
      Level l2 = sort_level_of(infer(instantiate(t->b, x)));
      r = mk_sort(Level::max(l1, l2));
      break;
    }
  }
  infer_cache_[t.get()] = Entry{t, r};
  return r;
}

std::vector<TermPtr> open_context(const Context& ctx, std::vector<TermPtr*> terms) {
  std::vector<TermPtr> fvars;
  for (const auto& e : ctx) {
    std::vector<TermPtr> rev(fvars.rbegin(), fvars.rend());
    TermPtr ty = instantiate(e.type, rev);
    fvars.push_back(mk_fvar(next_unique_id(), e.name, ty));
  }
  std::vector<TermPtr> rev(fvars.rbegin(), fvars.rend());
  for (TermPtr* t : terms) *t = instantiate(*t, rev);
  return fvars;
}

TermPtr TypeChecker::infer_in_context(const Context& ctx, const TermPtr& t) {
  TermPtr body = t;
  open_context(ctx, {&body});
  return infer(body);
}

bool TypeChecker::is_def_eq_in_context(const Context& ctx, const TermPtr& t,
                                       const TermPtr& u) {
  TermPtr a = t, b = u;
  open_context(ctx, {&a, &b});
  return is_def_eq(a, b);
}

TermPtr TypeChecker::iota_reduce(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr fn = get_app_fn_args(t, args);
  if (fn->kind != TermKind::Const || !env_.recursor_rule(fn->cname)) return nullptr;
  return reduce_rules(fn, args);
}

TermPtr TypeChecker::hit_point_reduce(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr fn = get_app_fn_args(t, args);
  if (fn->kind != TermKind::Const || !env_.hit_rule(fn->cname)) return nullptr;
  return reduce_rules(fn, args);
}

TermPtr TypeChecker::normalize(const TermPtr& t, uint64_t fuel) {
  bool was_counting = counting_fuel_;
  if (!was_counting) {
    counting_fuel_ = true;
    normalize_fuel_ = fuel;
    // Memoized results could hide steps from the budget; flush.
    whnf_cache_.clear();
  }
  TermPtr r;
  try {
    r = whnf(t);
    switch (r->kind) {
      case TermKind::App: {
        std::vector<TermPtr> args;
        TermPtr fn = get_app_fn_args(r, args);
        for (auto& a : args) a = normalize(a, fuel);
        r = mk_app(fn, args);
        break;
      }
      case TermKind::Lam:
      case TermKind::Pi: {
        TermPtr dom = normalize(r->a, fuel);
        TermPtr x = mk_fvar(next_unique_id(), r->hint, dom);
        TermPtr body = abstract(normalize(instantiate(r->b, x), fuel), x->id);
        r = r->kind == TermKind::Lam ? mk_lam(r->bind, r->hint, dom, body)
                                     : mk_pi(r->bind, r->hint, dom, body);
        break;
      }
      default:
        break;
    }
  } catch (...) {
    if (!was_counting) counting_fuel_ = false;
    throw;
  }
  if (!was_counting) counting_fuel_ = false;
  return r;
}

namespace {

void check_no_metas_or_loose(const TermPtr& t, const Name& where) {
  if (t->has_meta)
    kernel_error("declaration '" + where + "' contains metavariables");
  if (t->loose_bvars != 0)
    kernel_error("declaration '" + where + "' is not closed");
}

void check_univ_params(const Declaration& d) {
  for (size_t i = 0; i < d.univ_params.size(); ++i)
    for (size_t j = i + 1; j < d.univ_params.size(); ++j)
      if (d.univ_params[i] == d.univ_params[j])
        throw Error(ErrorClass::Universe,
                    "universe parameter shadowing: '" + d.univ_params[i] +
                        "' declared twice in '" + d.name + "'");
  std::vector<Name> used;
  collect_level_params(d.type, used);
  if (d.value) collect_level_params(d.value, used);
  for (const auto& u : used)
    if (std::find(d.univ_params.begin(), d.univ_params.end(), u) ==
        d.univ_params.end())
      throw Error(ErrorClass::Universe, "undeclared universe parameter '" + u +
                                            "' in '" + d.name + "'");
}

}  // namespace

Environment check_declaration(const Environment& env, Declaration d) {
  if (env.contains(d.name))
    throw Error(ErrorClass::Kernel, "duplicate declaration '" + d.name + "'");

  if (d.kind == DeclKind::Inductive && d.ind)
    return commit_inductive(env, *d.ind);

  check_univ_params(d);
  check_no_metas_or_loose(d.type, d.name);
  TypeChecker tc(env);
  tc.sort_level_of(tc.infer(d.type));
  if (d.kind == DeclKind::Definition) {
    if (!d.value) kernel_error("definition '" + d.name + "' has no value");
    check_no_metas_or_loose(d.value, d.name);
    TermPtr vt = tc.infer(d.value);
    if (!tc.is_def_eq(vt, d.type))
      kernel_error("type mismatch in definition '" + d.name + "': body has type '" +
                   term_to_string(vt) + "', expected '" + term_to_string(d.type) + "'");
  } else if (d.kind == DeclKind::Axiom || d.kind == DeclKind::HitConstant) {
    if (d.value) kernel_error("axiom '" + d.name + "' must not have a value");
  }
  return env.extend(std::move(d));
}

std::vector<Name> collect_axioms(const Environment& env, const Name& name) {
  if (!env.contains(name))
    throw Error(ErrorClass::Kernel, "unknown name '" + name + "'");
  std::vector<Name> stack{name};
  std::unordered_set<Name> visited;
  std::vector<Name> axioms;
  while (!stack.empty()) {
    Name n = stack.back();
    stack.pop_back();
    if (!visited.insert(n).second) continue;
    const Declaration& d = env.get(n);
    if (d.kind == DeclKind::Axiom ||
        (d.kind == DeclKind::HitConstant && d.axiomatic))
      axioms.push_back(n);
    std::vector<Name> refs;
    collect_consts(d.type, refs);
    if (d.value) collect_consts(d.value, refs);
    if (d.ind) {
      for (const auto& p : d.ind->params) collect_consts(p.type, refs);
      for (const auto& i : d.ind->indices) collect_consts(i.type, refs);
      for (const auto& c : d.ind->constructors) {
        for (const auto& a : c.args) collect_consts(a.type, refs);
        for (const auto& r : c.result_indices) collect_consts(r, refs);
      }
    }
    for (auto& r : refs)
      if (!visited.count(r)) stack.push_back(std::move(r));
  }
  std::sort(axioms.begin(), axioms.end());
  return axioms;
}

}  // namespace hott
