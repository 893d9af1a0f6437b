#include "hott/elab.hpp"

#include <algorithm>

#include "hott/inductive.hpp"
#include "hott/pretty.hpp"

namespace hott {

namespace {

enum class UResult { Ok, Fail, Hou };

struct LocalEntry {
  Name name;
  TermPtr fvar;
  Binding vis = Binding::Explicit;
};

struct MetaEntry {
  TermPtr leaf_type;             // Pi over the spine context
  std::vector<TermPtr> spine;    // context fvars at creation
  TermPtr target_type;           // type of the occurrence
  TermPtr assignment;            // of leaf_type when set
  Span span;
};

struct ClassGoal {
  uint64_t meta_id;
  TermPtr goal_type;               // in the snapshot context
  std::vector<LocalEntry> locals;  // snapshot
  Span span;
};

}  // namespace

struct Elaborator::Impl {
  const Environment& env;
  ElabOptions opts;
  TypeChecker tc;

  std::map<uint64_t, MetaEntry> metas;
  std::map<uint64_t, std::optional<Level>> level_metas;
  std::vector<uint64_t> level_meta_order;
  std::vector<std::pair<Level, Level>> pending_levels;
  std::vector<ClassGoal> class_goals;
  std::vector<LocalEntry> locals;
  std::vector<Name> declared_univs;
  // Assignment trail for backtracking during instance search.
  std::vector<uint64_t> term_trail, level_trail;
  bool trailing = false;

  Impl(const Environment& e, ElabOptions o) : env(e), opts(o), tc(e) {}

  // ---- metas ---------------------------------------------------------------

  Level fresh_level_meta() {
    uint64_t id = next_unique_id();
    level_metas[id] = std::nullopt;
    level_meta_order.push_back(id);
    return Level::meta(id);
  }

  TermPtr fresh_meta(const TermPtr& target_type, Span span) {
    uint64_t id = next_unique_id();
    MetaEntry e;
    e.target_type = target_type;
    for (const auto& l : locals) e.spine.push_back(l.fvar);
    // leaf type = Pi over the spine
    TermPtr lt = target_type;
    for (size_t i = e.spine.size(); i-- > 0;) {
      const TermPtr& x = e.spine[i];
      lt = mk_pi(Binding::Explicit, x->hint, x->a, abstract(lt, x->id));
    }
    e.leaf_type = lt;
    e.span = span;
    TermPtr occ = mk_meta(id);
    for (const auto& x : e.spine) occ = mk_app(occ, x);
    metas.emplace(id, std::move(e));
    return occ;
  }

  TermPtr fresh_type_meta(Span span) {
    return fresh_meta(mk_sort(fresh_level_meta()), span);
  }

  bool is_assigned(uint64_t id) const {
    auto it = metas.find(id);
    return it != metas.end() && it->second.assignment != nullptr;
  }

  void assign_meta(uint64_t id, TermPtr val) {
    metas.at(id).assignment = std::move(val);
    if (trailing) term_trail.push_back(id);
  }

  void assign_level_meta(uint64_t id, Level l) {
    level_metas.at(id) = std::move(l);
    if (trailing) level_trail.push_back(id);
  }

  // ---- zonking -------------------------------------------------------------

  Level zonk_level(const Level& l) {
    if (!l.has_meta()) return l;
    switch (l.kind()) {
      case LevelKind::Meta: {
        auto& slot = level_metas.at(l.meta_id());
        if (slot) return zonk_level(*slot);
        return l;
      }
      case LevelKind::Succ:
        return Level::succ(zonk_level(l.arg0()));
      case LevelKind::Max:
        return Level::max(zonk_level(l.arg0()), zonk_level(l.arg1()));
      default:
        return l;
    }
  }

  TermPtr zonk(const TermPtr& t) {
    if (!t->has_meta) return t;
    switch (t->kind) {
      case TermKind::Meta: {
        const MetaEntry& e = metas.at(t->id);
        if (e.assignment) return zonk(e.assignment);
        return t;
      }
      case TermKind::Sort:
        return mk_sort(zonk_level(t->level));
      case TermKind::Const: {
        std::vector<Level> ls;
        ls.reserve(t->levels.size());
        for (const auto& l : t->levels) ls.push_back(zonk_level(l));
        return mk_const(t->cname, std::move(ls));
      }
      case TermKind::App: {
        // Zonk the spine; beta-reduce if the head got an assignment.
        std::vector<TermPtr> args;
        TermPtr fn = get_app_fn_args(t, args);
        for (auto& a : args) a = zonk(a);
        TermPtr zfn = zonk(fn);
        if (is_lam(zfn)) {
          size_t n = 0;
          TermPtr body = zfn;
          while (is_lam(body) && n < args.size()) {
            body = body->b;
            ++n;
          }
          std::vector<TermPtr> rev(args.begin(), args.begin() + n);
          std::reverse(rev.begin(), rev.end());
          TermPtr r = instantiate(body, rev);
          r = mk_app(r, std::span<const TermPtr>(args.data() + n, args.size() - n));
          return zonk(r);
        }
        return mk_app(zfn, args);
      }
      case TermKind::Lam:
      case TermKind::Pi: {
        TermPtr a = zonk(t->a);
        TermPtr b = zonk(t->b);
        return t->kind == TermKind::Lam ? mk_lam(t->bind, t->hint, a, b)
                                        : mk_pi(t->bind, t->hint, a, b);
      }
      default:
        return t;
    }
  }

  TermPtr zwhnf(const TermPtr& t) { return tc.whnf(zonk(t)); }

  // ---- level unification ---------------------------------------------------

  UResult unify_level_core(const Level& a0, const Level& b0) {
    Level a = zonk_level(a0), b = zonk_level(b0);
    if (level_eq(a, b)) return UResult::Ok;
    auto aa = level_atoms(a);
    auto ba = level_atoms(b);
    auto solve = [&](const std::vector<LevelAtom>& xs, const Level& other) -> int {
      // xs is a single bare meta atom: assign it.
      if (xs.size() == 1 && xs[0].is_meta && xs[0].offset == 0) {
        for (const auto& atom : level_atoms(other))
          if (atom.is_meta && atom.meta_id == xs[0].meta_id) return -1;
        assign_level_meta(xs[0].meta_id, other);
        return 1;
      }
      return 0;
    };
    int r = solve(aa, b);
    if (r == 1) return UResult::Ok;
    if (r == -1) return UResult::Fail;
    r = solve(ba, a);
    if (r == 1) return UResult::Ok;
    if (r == -1) return UResult::Fail;
    if (a.has_meta() || b.has_meta()) {
      pending_levels.emplace_back(a, b);
      return UResult::Ok;  // optimistically postponed
    }
    return UResult::Fail;
  }

  bool retry_pending_levels(bool final_pass) {
    for (size_t round = 0; round < pending_levels.size() + 1; ++round) {
      auto pend = std::move(pending_levels);
      pending_levels.clear();
      bool progress = false;
      for (auto& [a, b] : pend) {
        Level za = zonk_level(a), zb = zonk_level(b);
        if (level_eq(za, zb)) {
          progress = true;
          continue;
        }
        if (unify_level_core(za, zb) == UResult::Fail) return false;
      }
      if (!progress || pending_levels.empty()) break;
    }
    if (final_pass) {
      for (auto& [a, b] : pending_levels)
        if (!level_eq(zonk_level(a), zonk_level(b))) return false;
      pending_levels.clear();
    }
    return true;
  }

  // ---- term unification ------------------------------------------------------

  bool is_meta_headed(const TermPtr& t, uint64_t* id = nullptr) {
    const Term* h = get_app_fn(t.get());
    if (h->kind != TermKind::Meta) return false;
    if (id) *id = h->id;
    return true;
  }

  // The assignment binds exactly the applied arguments: leaf := lam args, v.
  UResult try_assign(uint64_t mid, const std::vector<TermPtr>& applied_args,
                     const TermPtr& value) {
    TermPtr v = zonk(value);
    // occurs check
    std::vector<uint64_t> ms;
    collect_metas(v, ms);
    if (std::find(ms.begin(), ms.end(), mid) != ms.end()) return UResult::Fail;
    // scope check: fvars(v) must be bound by the applied arguments
    std::vector<uint64_t> fvs;
    collect_fvars(v, fvs);
    std::vector<uint64_t> allowed;
    for (const auto& s : applied_args)
      if (s->kind == TermKind::FVar) allowed.push_back(s->id);
    for (uint64_t f : fvs)
      if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
        return UResult::Fail;
    std::vector<uint64_t> ids;
    for (const auto& s : applied_args) ids.push_back(s->id);
    TermPtr lam_val = abstract(v, ids);
    for (size_t i = applied_args.size(); i-- > 0;)
      lam_val = mk_lam(Binding::Explicit, applied_args[i]->hint, applied_args[i]->a,
                       lam_val);
    assign_meta(mid, lam_val);
    return UResult::Ok;
  }

  // flex = ?m applied to args (occurrences always carry the creation spine as
  // an application prefix).
  UResult solve_flex(const TermPtr& flex, const TermPtr& rigid) {
    std::vector<TermPtr> args;
    TermPtr leaf = get_app_fn_args(flex, args);
    uint64_t mid = leaf->id;

    // Pattern rule: all applied args distinct fvars.
    bool pattern = true;
    for (size_t i = 0; pattern && i < args.size(); ++i) {
      pattern = args[i]->kind == TermKind::FVar;
      for (size_t j = 0; pattern && j < i; ++j)
        pattern = args[j]->id != args[i]->id;
    }
    if (pattern && try_assign(mid, args, rigid) == UResult::Ok) return UResult::Ok;

    // First-order fallback: right-aligned spine decomposition against an
    // application.
    if (rigid->kind == TermKind::App && !args.empty()) {
      UResult r = unify_core(flex->b, rigid->b);
      if (r != UResult::Ok) return r;
      return unify_core(flex->a, rigid->a);
    }
    if (pattern && args.empty()) return UResult::Fail;  // bare meta, occurs/scope
    return UResult::Hou;
  }

  UResult unify_core(const TermPtr& t0, const TermPtr& u0) {
    TermPtr t = zonk(t0), u = zonk(u0);
    if (term_eq(t, u)) return UResult::Ok;
    t = tc.whnf_core(t);
    u = tc.whnf_core(u);
    if (term_eq(t, u)) return UResult::Ok;

    bool t_flex = is_meta_headed(t);
    bool u_flex = is_meta_headed(u);
    if (t_flex && u_flex) {
      // Prefer assigning the one that is a bare (spine-only) occurrence.
      UResult r = solve_flex(t, u);
      if (r == UResult::Ok) return r;
      return solve_flex(u, t);
    }
    if (t_flex) return solve_flex(t, u);
    if (u_flex) return solve_flex(u, t);

    // rigid-rigid
    if (t->kind == TermKind::Sort && u->kind == TermKind::Sort)
      return unify_level_core(t->level, u->level);
    if ((t->kind == TermKind::Lam && u->kind == TermKind::Lam) ||
        (t->kind == TermKind::Pi && u->kind == TermKind::Pi)) {
      UResult r = unify_core(t->a, u->a);
      if (r != UResult::Ok) return r;
      TermPtr x = mk_fvar(next_unique_id(), t->hint, zonk(t->a));
      return unify_core(instantiate(t->b, x), instantiate(u->b, x));
    }
    if (t->kind == TermKind::Lam && u->kind != TermKind::Lam) {
      TermPtr ue = mk_lam(t->bind, t->hint, t->a, mk_app(shift(u, 1), mk_bvar(0)));
      return unify_core(t, ue);
    }
    if (u->kind == TermKind::Lam && t->kind != TermKind::Lam) {
      TermPtr te = mk_lam(u->bind, u->hint, u->a, mk_app(shift(t, 1), mk_bvar(0)));
      return unify_core(te, u);
    }

    const Term* th = get_app_fn(t.get());
    const Term* uh = get_app_fn(u.get());

    if (th->kind == TermKind::Const && uh->kind == TermKind::Const &&
        th->cname == uh->cname && th->levels.size() == uh->levels.size()) {
      // Try argument-wise first; on failure fall back to unfolding.
      size_t trail_mark = term_trail.size(), ltrail_mark = level_trail.size();
      bool saved_trailing = trailing;
      trailing = true;
      UResult r = UResult::Ok;
      for (size_t i = 0; r == UResult::Ok && i < th->levels.size(); ++i)
        r = unify_level_core(th->levels[i], uh->levels[i]);
      if (r == UResult::Ok) r = unify_args(t, u);
      if (r == UResult::Ok) {
        trailing = saved_trailing;
        if (!saved_trailing) {
          term_trail.resize(trail_mark);
          level_trail.resize(ltrail_mark);
        }
        return UResult::Ok;
      }
      undo_to(trail_mark, ltrail_mark);
      trailing = saved_trailing;
      if (r == UResult::Hou) return r;
    }

    // Lazy delta.
    const Declaration* td =
        th->kind == TermKind::Const ? env.find(th->cname) : nullptr;
    const Declaration* ud =
        uh->kind == TermKind::Const ? env.find(uh->cname) : nullptr;
    bool tu = td && td->kind == DeclKind::Definition;
    bool uu = ud && ud->kind == DeclKind::Definition;
    if (tu || uu) {
      auto unfold = [&](const TermPtr& x) {
        std::vector<TermPtr> args;
        TermPtr fn = get_app_fn_args(x, args);
        const Declaration* d = env.find(fn->cname);
        TermPtr val = instantiate_level_params(d->value, d->univ_params, fn->levels);
        return tc.whnf_core(mk_app(val, args));
      };
      if (tu && uu) {
        uint32_t ti = *env.decl_index(td->name);
        uint32_t ui = *env.decl_index(ud->name);
        if (ti == ui) return unify_core(unfold(t), unfold(u));
        return ti > ui ? unify_core(unfold(t), u) : unify_core(t, unfold(u));
      }
      return tu ? unify_core(unfold(t), u) : unify_core(t, unfold(u));
    }

    if (th->kind != uh->kind) return UResult::Fail;
    switch (th->kind) {
      case TermKind::FVar:
        if (th->id != uh->id) return UResult::Fail;
        return unify_args(t, u);
      case TermKind::Const: {
        if (th->cname != uh->cname || th->levels.size() != uh->levels.size())
          return UResult::Fail;
        for (size_t i = 0; i < th->levels.size(); ++i)
          if (unify_level_core(th->levels[i], uh->levels[i]) != UResult::Ok)
            return UResult::Fail;
        return unify_args(t, u);
      }
      default:
        return UResult::Fail;
    }
  }

  UResult unify_args(const TermPtr& t, const TermPtr& u) {
    std::vector<TermPtr> ta, ua;
    get_app_args(t, ta);
    get_app_args(u, ua);
    if (ta.size() != ua.size()) return UResult::Fail;
    for (size_t i = ta.size(); i-- > 0;) {
      UResult r = unify_core(ta[i], ua[i]);
      if (r != UResult::Ok) return r;
    }
    return UResult::Ok;
  }

  void undo_to(size_t term_mark, size_t level_mark) {
    while (term_trail.size() > term_mark) {
      metas.at(term_trail.back()).assignment = nullptr;
      term_trail.pop_back();
    }
    while (level_trail.size() > level_mark) {
      level_metas.at(level_trail.back()) = std::nullopt;
      level_trail.pop_back();
    }
  }

  bool unify(const TermPtr& t, const TermPtr& u) {
    return unify_core(t, u) == UResult::Ok;
  }

  void unify_or_fail(const TermPtr& t, const TermPtr& u, Span span,
                     const std::string& what) {
    UResult r = unify_core(t, u);
    if (r == UResult::Ok) return;
    if (r == UResult::Hou)
      throw Error(ErrorClass::Elab,
                  what + ": requires higher-order unification — unsupported ('" +
                      term_to_string(zonk(t)) + "' =?= '" + term_to_string(zonk(u)) + "')",
                  span);
    throw Error(ErrorClass::Elab,
                what + ": type mismatch, '" + term_to_string(zonk(t)) +
                    "' =?= '" + term_to_string(zonk(u)) + "'",
                span);
  }

  // ---- elaborator-side type inference ---------------------------------------

  Level ensure_sort(const TermPtr& type, Span span) {
    TermPtr s = zwhnf(type);
    if (is_sort(s)) return s->level;
    if (is_meta_headed(s)) {
      Level l = fresh_level_meta();
      unify_or_fail(s, mk_sort(l), span, "expected a type");
      return l;
    }
    throw Error(ErrorClass::Elab, "type expected, got '" + term_to_string(s) + "'", span);
  }

  TermPtr infer(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::BVar:
        throw Error(ErrorClass::Internal, "loose bound variable during elaboration");
      case TermKind::FVar:
        return t->a;
      case TermKind::Meta:
        return metas.at(t->id).leaf_type;
      case TermKind::Sort:
        return mk_sort(Level::succ(t->level));
      case TermKind::Const: {
        const Declaration& d = env.get(t->cname);
        if (d.univ_params.size() != t->levels.size())
          throw Error(ErrorClass::Elab,
                      "wrong number of level arguments for '" + t->cname + "'");
        return instantiate_level_params(d.type, d.univ_params, t->levels);
      }
      case TermKind::App: {
        TermPtr ft = zwhnf(infer(t->a));
        if (!is_pi(ft))
          throw Error(ErrorClass::Elab, "function expected in application '" +
                                            term_to_string(zonk(t)) + "'");
        return instantiate(ft->b, t->b);
      }
      case TermKind::Lam: {
        TermPtr x = mk_fvar(next_unique_id(), t->hint, t->a);
        TermPtr bt = infer(instantiate(t->b, x));
        return mk_pi(t->bind, t->hint, t->a, abstract(bt, x->id));
      }
      case TermKind::Pi: {
        Level l1 = ensure_sort(infer(t->a), Span{});
        TermPtr x = mk_fvar(next_unique_id(), t->hint, t->a);
        Level l2 = ensure_sort(infer(instantiate(t->b, x)), Span{});
        return mk_sort(Level::max(l1, l2));
      }
    }
    throw Error(ErrorClass::Internal, "unreachable");
  }

  // ---- locals ---------------------------------------------------------------

  TermPtr push_local(const Name& n, const TermPtr& type, Binding vis) {
    TermPtr x = mk_fvar(next_unique_id(), n, type);
    locals.push_back(LocalEntry{n, x, vis});
    return x;
  }

  void pop_local() { locals.pop_back(); }

  TermPtr lookup_local(const Name& n) {
    for (auto it = locals.rbegin(); it != locals.rend(); ++it)
      if (it->name == n) return it->fvar;
    return nullptr;
  }

  // ---- coercions ------------------------------------------------------------

  // Wraps `e` (of type `actual`) in one registered coercion so that the result
  // unifies with `expected`; returns nullopt when no coercion applies.
  std::optional<std::pair<TermPtr, TermPtr>> insert_coercion(const TermPtr& e,
                                                             const TermPtr& actual,
                                                             const TermPtr& expected,
                                                             Span span) {
    TermPtr a = zwhnf(actual);
    const Term* head = get_app_fn(a.get());
    if (head->kind != TermKind::Const) return std::nullopt;
    auto it = env.coercions().find(head->cname);
    if (it == env.coercions().end()) return std::nullopt;
    size_t tmark = term_trail.size(), lmark = level_trail.size();
    bool saved = trailing;
    trailing = true;
    auto rollback = [&] {
      undo_to(tmark, lmark);
      trailing = saved;
    };
    const Declaration& cd = env.get(it->second);
    std::vector<Level> ls;
    for (size_t i = 0; i < cd.univ_params.size(); ++i) ls.push_back(fresh_level_meta());
    TermPtr c = mk_const(cd.name, ls);
    TermPtr cty = instantiate_level_params(cd.type, cd.univ_params, ls);
    // Apply implicit/instance leading binders as metas, then the coerced arg.
    for (;;) {
      cty = zwhnf(cty);
      if (!is_pi(cty)) {
        rollback();
        return std::nullopt;
      }
      if (cty->bind == Binding::Explicit) break;
      TermPtr m = fresh_meta(cty->a, span);
      c = mk_app(c, m);
      cty = instantiate(cty->b, m);
    }
    if (!unify(cty->a, actual)) {
      rollback();
      return std::nullopt;
    }
    c = mk_app(c, e);
    TermPtr rty = instantiate(cty->b, e);
    if (expected) {
      if (!unify(rty, expected)) {
        rollback();
        return std::nullopt;
      }
    } else {
      // function-position coercion: result must be a Pi
      if (!is_pi(zwhnf(rty))) {
        rollback();
        return std::nullopt;
      }
    }
    trailing = saved;
    if (!saved) {
      term_trail.resize(tmark);
      level_trail.resize(lmark);
    }
    return std::make_pair(c, rty);
  }

  // ---- instance resolution ----------------------------------------------------

  Name class_head_of(const TermPtr& goal, Span span, bool throw_on_fail) {
    TermPtr g = zonk(goal);
    while (is_pi(g)) {
      TermPtr x = mk_fvar(next_unique_id(), g->hint, g->a);
      g = zonk(instantiate(g->b, x));
    }
    g = zwhnf_no_delta_class(g);
    const Term* h = get_app_fn(g.get());
    if (h->kind == TermKind::Const && env.is_class(h->cname)) return h->cname;
    if (throw_on_fail)
      throw Error(ErrorClass::Instance,
                  "instance binder whose type head is not a class: '" +
                      term_to_string(g) + "'",
                  span);
    return "";
  }

  // Head normalization for class goals: beta/iota only, keeping class-defining
  // definitions (like add_semigroup := semigroup) visible.
  TermPtr zwhnf_no_delta_class(const TermPtr& t) {
    TermPtr r = zonk(t);
    for (;;) {
      r = tc.whnf_core(r);
      const Term* h = get_app_fn(r.get());
      if (h->kind == TermKind::Const) {
        if (env.is_class(h->cname)) return r;
        const Declaration* d = env.find(h->cname);
        if (d && d->kind == DeclKind::Definition) {
          std::vector<TermPtr> args;
          TermPtr fn = get_app_fn_args(r, args);
          r = mk_app(instantiate_level_params(d->value, d->univ_params, fn->levels),
                     args);
          continue;
        }
      }
      return r;
    }
  }

  TermPtr resolve_instance(const TermPtr& goal_type,
                           const std::vector<LocalEntry>& goal_locals, Span span,
                           unsigned depth, std::vector<Name>* tried) {
    if (depth > opts.max_class_depth)
      throw Error(ErrorClass::Instance,
                  "instance search depth limit (" +
                      std::to_string(opts.max_class_depth) + ") exceeded at goal '" +
                      term_to_string(zonk(goal_type)) + "'",
                  span);

    // Pi-shaped goals: introduce the telescope and chain on the conclusion.
    TermPtr g = zwhnf_no_delta_class(goal_type);
    if (is_pi(g)) {
      TermPtr x = mk_fvar(next_unique_id(), g->hint, g->a);
      std::vector<LocalEntry> inner = goal_locals;
      inner.push_back(LocalEntry{g->hint, x, Binding::Explicit});
      TermPtr sub = resolve_instance(instantiate(g->b, x), inner, span, depth, tried);
      return mk_lam(g->bind, g->hint, g->a, abstract(sub, x->id));
    }

    const Term* gh = get_app_fn(g.get());
    if (gh->kind != TermKind::Const || !env.is_class(gh->cname))
      throw Error(ErrorClass::Instance,
                  "instance goal head is not a class: '" + term_to_string(g) + "'",
                  span);

    // Local instance hypotheses first, innermost first.
    for (auto it = goal_locals.rbegin(); it != goal_locals.rend(); ++it) {
      if (it->vis != Binding::Inst) continue;
      if (tried) tried->push_back(it->name);
      size_t tmark = term_trail.size(), lmark = level_trail.size();
      bool saved = trailing;
      trailing = true;
      if (unify(it->fvar->a, g)) {
        trailing = saved;
        if (!saved) {
          term_trail.resize(tmark);
          level_trail.resize(lmark);
        }
        return it->fvar;
      }
      undo_to(tmark, lmark);
      trailing = saved;
    }

    // Global instances, most recent first.
    for (const Name& iname : env.instances_newest_first()) {
      const Declaration& d = env.get(iname);
      if (tried) tried->push_back(iname);
      size_t tmark = term_trail.size(), lmark = level_trail.size();
      bool saved = trailing;
      trailing = true;
      auto rollback = [&] {
        undo_to(tmark, lmark);
        trailing = saved;
      };

      std::vector<Level> ls;
      for (size_t i = 0; i < d.univ_params.size(); ++i) ls.push_back(fresh_level_meta());
      TermPtr cand = mk_const(d.name, ls);
      TermPtr cty = instantiate_level_params(d.type, d.univ_params, ls);
      struct Subgoal {
        TermPtr meta;
        TermPtr type;
      };
      std::vector<Subgoal> subgoals;
      for (;;) {
        cty = zwhnf_no_delta_class(cty);
        if (!is_pi(cty)) break;
        TermPtr m = fresh_meta(cty->a, span);
        if (cty->bind == Binding::Inst) subgoals.push_back({m, cty->a});
        cand = mk_app(cand, m);
        cty = instantiate(cty->b, m);
      }
      if (!unify(cty, g)) {
        rollback();
        continue;
      }
      bool ok = true;
      for (const auto& sg : subgoals) {
        TermPtr solved;
        try {
          solved = resolve_instance(zonk(sg.type), goal_locals, span, depth + 1, tried);
        } catch (const Error& err) {
          if (err.cls == ErrorClass::Instance &&
              std::string(err.what()).find("depth limit") != std::string::npos)
            throw;  // depth overflow aborts the whole search
          ok = false;
          break;
        }
        if (!solved || !unify(sg.meta, solved)) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        rollback();
        continue;
      }
      TermPtr result = zonk(cand);
      if (result->has_meta) {
        rollback();
        continue;
      }
      trailing = saved;
      if (!saved) {
        term_trail.resize(tmark);
        level_trail.resize(lmark);
      }
      return result;
    }

    return nullptr;
  }

  void solve_class_goals() {
    for (const auto& goal : class_goals) {
      if (is_assigned(goal.meta_id)) continue;
      TermPtr g = zonk(goal.goal_type);
      std::vector<uint64_t> ms;
      collect_metas(g, ms);
      if (!ms.empty())
        throw Error(ErrorClass::Instance,
                    "class goal '" + term_to_string(g) +
                        "' still contains metavariables at resolution time",
                    goal.span);
      std::vector<Name> tried;
      TermPtr solved = resolve_instance(g, goal.locals, goal.span, 1, &tried);
      if (!solved) {
        std::string heads;
        for (size_t i = 0; i < tried.size(); ++i)
          heads += (i ? ", " : "") + tried[i];
        throw Error(ErrorClass::Instance,
                    "no instance found for goal '" + term_to_string(g) +
                        "' (tried: " + (heads.empty() ? "nothing" : heads) + ")",
                    goal.span);
      }
      // Assign through the occurrence (spine application).
      MetaEntry& e = metas.at(goal.meta_id);
      TermPtr lam_val = solved;
      for (size_t i = e.spine.size(); i-- > 0;) {
        const TermPtr& x = e.spine[i];
        lam_val = mk_lam(Binding::Explicit, x->hint, x->a, abstract(lam_val, x->id));
      }
      assign_meta(goal.meta_id, lam_val);
    }
  }

  // ---- core elaboration -------------------------------------------------------

  TermPtr mk_class_meta(const TermPtr& goal_type, Span span) {
    TermPtr m = fresh_meta(goal_type, span);
    const Term* leaf = get_app_fn(m.get());
    class_goals.push_back(ClassGoal{leaf->id, goal_type, locals, span});
    return m;
  }

  std::pair<TermPtr, TermPtr> synth(const STPtr& t);

  TermPtr check(const STPtr& t, const TermPtr& expected) {
    if (t->kind == SurfKind::Lam) {
      TermPtr ex = zwhnf(expected);
      if (is_pi(ex)) {
        TermPtr dom = ex->a;
        if (t->binder.type) {
          TermPtr ann = elaborate_type(t->binder.type);
          unify_or_fail(ann, dom, t->binder.span, "binder annotation");
          dom = ann;
        }
        TermPtr x = push_local(t->binder.name, dom, t->binder.vis);
        TermPtr body = check(t->b, instantiate(ex->b, x));
        pop_local();
        return mk_lam(ex->bind, t->binder.name, dom, abstract(body, x->id));
      }
    }
    auto [e, ty] = synth(t);
    // Insert trailing implicit arguments unless the expected type itself
    // starts with a matching non-explicit binder.
    TermPtr ty_w = zwhnf(ty);
    TermPtr ex_w = zwhnf(expected);
    while (is_pi(ty_w) && ty_w->bind != Binding::Explicit &&
           !(is_pi(ex_w) && ex_w->bind == ty_w->bind)) {
      TermPtr m = ty_w->bind == Binding::Inst ? mk_class_meta(ty_w->a, t->span)
                                              : fresh_meta(ty_w->a, t->span);
      e = mk_app(e, m);
      ty_w = zwhnf(instantiate(ty_w->b, m));
    }
    {
      size_t tmark = term_trail.size(), lmark = level_trail.size();
      bool saved = trailing;
      trailing = true;
      if (unify(ty_w, expected)) {
        trailing = saved;
        if (!saved) {
          term_trail.resize(tmark);
          level_trail.resize(lmark);
        }
        return e;
      }
      undo_to(tmark, lmark);
      trailing = saved;
    }
    if (auto c = insert_coercion(e, ty_w, expected, t->span)) return c->first;
    unify_or_fail(ty_w, expected, t->span, "term '" + surface_to_string(t) + "'");
    return e;
  }

  TermPtr elaborate_type(const STPtr& t) {
    auto [e, ty] = synth(t);
    ensure_sort(ty, t->span);
    return e;
  }

  // Applies one argument, inserting leading implicit metas.
  void apply_arg(TermPtr& f, TermPtr& fty, const STPtr& arg, Span span) {
    for (;;) {
      fty = zwhnf(fty);
      if (is_pi(fty) && fty->bind != Binding::Explicit) {
        TermPtr m = fty->bind == Binding::Inst ? mk_class_meta(fty->a, span)
                                               : fresh_meta(fty->a, span);
        f = mk_app(f, m);
        fty = instantiate(fty->b, m);
        continue;
      }
      break;
    }
    if (!is_pi(fty)) {
      if (is_meta_headed(fty)) {
        // Invent the Pi shape.
        TermPtr dom = fresh_type_meta(span);
        TermPtr x = push_local("x", dom, Binding::Explicit);
        TermPtr cod = fresh_type_meta(span);
        pop_local();
        TermPtr pi = mk_pi(Binding::Explicit, "x", dom, abstract(cod, x->id));
        unify_or_fail(fty, pi, span, "application head");
        fty = pi;
      } else if (auto c = insert_coercion(f, fty, nullptr, span)) {
        f = c->first;
        fty = zwhnf(c->second);
        if (is_pi(fty) && fty->bind != Binding::Explicit) {
          apply_arg(f, fty, arg, span);
          return;
        }
      } else {
        throw Error(ErrorClass::Elab,
                    "function expected: '" + term_to_string(zonk(f)) +
                        "' has type '" + term_to_string(zonk(fty)) + "'",
                    span);
      }
    }
    TermPtr a = check(arg, fty->a);
    f = mk_app(f, a);
    fty = instantiate(fty->b, a);
  }
};

std::pair<TermPtr, TermPtr> Elaborator::Impl::synth(const STPtr& t) {
  switch (t->kind) {
    case SurfKind::Hole: {
      TermPtr ty = fresh_type_meta(t->span);
      TermPtr m = fresh_meta(ty, t->span);
      return {m, ty};
    }
    case SurfKind::Sort: {
      Level l = t->has_levels ? t->levels[0] : fresh_level_meta();
      return {mk_sort(l), mk_sort(Level::succ(l))};
    }
    case SurfKind::Var: {
      if (!t->has_levels) {
        if (TermPtr x = lookup_local(t->name)) return {x, x->a};
      }
      const Declaration* d = env.find(t->name);
      if (!d)
        throw Error(ErrorClass::Elab, "unknown identifier '" + t->name + "'", t->span);
      std::vector<Level> ls;
      if (t->has_levels) {
        if (t->levels.size() != d->univ_params.size())
          throw Error(ErrorClass::Elab,
                      "wrong number of level arguments for '" + t->name + "'", t->span);
        ls = t->levels;
      } else {
        for (size_t i = 0; i < d->univ_params.size(); ++i)
          ls.push_back(fresh_level_meta());
      }
      TermPtr c = mk_const(t->name, ls);
      return {c, instantiate_level_params(d->type, d->univ_params, ls)};
    }
    case SurfKind::App: {
      // Collect the spine so implicits are inserted per-argument.
      std::vector<const SurfaceTerm*> spine;
      const SurfaceTerm* cur = t.get();
      while (cur->kind == SurfKind::App) {
        spine.push_back(cur);
        cur = cur->a.get();
      }
      STPtr head(t, cur);
      auto [f, fty] = synth(head);
      for (auto it = spine.rbegin(); it != spine.rend(); ++it)
        apply_arg(f, fty, (*it)->b, (*it)->span);
      return {f, fty};
    }
    case SurfKind::ExplicitApp: {
      TermPtr f;
      TermPtr fty;
      if (TermPtr x = lookup_local(t->name)) {
        f = x;
        fty = x->a;
      } else {
        const Declaration* d = env.find(t->name);
        if (!d)
          throw Error(ErrorClass::Elab, "unknown identifier '" + t->name + "'", t->span);
        std::vector<Level> ls;
        if (t->has_levels) {
          if (t->levels.size() != d->univ_params.size())
            throw Error(ErrorClass::Elab,
                        "wrong number of level arguments for '" + t->name + "'",
                        t->span);
          ls = t->levels;
        } else {
          for (size_t i = 0; i < d->univ_params.size(); ++i)
            ls.push_back(fresh_level_meta());
        }
        f = mk_const(t->name, ls);
        fty = instantiate_level_params(d->type, d->univ_params, ls);
      }
      for (const auto& arg : t->args) {
        fty = zwhnf(fty);
        if (!is_pi(fty))
          throw Error(ErrorClass::Elab,
                      "too many arguments in '@" + t->name + "'", t->span);
        TermPtr a = check(arg, fty->a);
        f = mk_app(f, a);
        fty = instantiate(fty->b, a);
      }
      return {f, fty};
    }
    case SurfKind::Lam: {
      TermPtr dom = t->binder.type ? elaborate_type(t->binder.type)
                                   : fresh_type_meta(t->binder.span);
      TermPtr x = push_local(t->binder.name, dom, t->binder.vis);
      auto [body, bty] = synth(t->b);
      pop_local();
      return {mk_lam(t->binder.vis, t->binder.name, dom, abstract(body, x->id)),
              mk_pi(t->binder.vis, t->binder.name, dom, abstract(bty, x->id))};
    }
    case SurfKind::Pi: {
      TermPtr dom = t->binder.type ? elaborate_type(t->binder.type)
                                   : fresh_type_meta(t->binder.span);
      Level l1 = ensure_sort(infer(dom), t->binder.span);
      TermPtr x = push_local(t->binder.name, dom, t->binder.vis);
      auto [body, bty] = synth(t->b);
      Level l2 = ensure_sort(bty, t->b->span);
      pop_local();
      return {mk_pi(t->binder.vis, t->binder.name, dom, abstract(body, x->id)),
              mk_sort(Level::max(l1, l2))};
    }
    case SurfKind::Arrow:
    case SurfKind::Sugar:
      throw Error(ErrorClass::Internal, "sugar must be desugared before elaboration",
                  t->span);
  }
  throw Error(ErrorClass::Internal, "unreachable surface kind");
}

// ---- public entry points -----------------------------------------------------

Elaborator::Elaborator(const Environment& env, ElabOptions opts)
    : impl_(std::make_unique<Impl>(env, opts)) {}

Elaborator::~Elaborator() = default;

namespace {

// Unassigned-level-meta generalization: deterministic fresh names u_1, u_2, ...
struct Finalizer {
  Elaborator::Impl& el;

  void finish_levels(std::vector<TermPtr*> terms, std::vector<Name>& univ_params,
                     bool generalize) {
    if (!el.retry_pending_levels(true))
      throw Error(ErrorClass::Elab, "unsolvable universe level constraints");
    for (TermPtr* t : terms) *t = el.zonk(*t);
    // Collect unassigned level metas in traversal order.
    std::vector<uint64_t> order;
    for (TermPtr* t : terms) collect_level_metas(*t, order);
    if (!order.empty() && !generalize)
      throw Error(ErrorClass::Elab, "cannot infer universe level");
    unsigned counter = 0;
    for (uint64_t id : order) {
      Name n;
      do {
        n = "u_" + std::to_string(++counter);
      } while (std::find(univ_params.begin(), univ_params.end(), n) != univ_params.end());
      el.assign_level_meta(id, Level::param(n));
      univ_params.push_back(n);
    }
    for (TermPtr* t : terms) *t = el.zonk(*t);
    // Undeclared parameters are an error (catches stray Type.{v}).
    std::vector<Name> used;
    for (TermPtr* t : terms) collect_level_params(*t, used);
    for (const auto& u : used)
      if (std::find(univ_params.begin(), univ_params.end(), u) == univ_params.end())
        throw Error(ErrorClass::Universe, "undeclared universe parameter '" + u + "'");
  }

  void collect_level_metas(const TermPtr& t, std::vector<uint64_t>& out) {
    if (!t->has_meta) return;
    auto add_level = [&](const Level& l) { collect_from_level(l, out); };
    switch (t->kind) {
      case TermKind::Sort:
        add_level(t->level);
        break;
      case TermKind::Const:
        for (const auto& l : t->levels) add_level(l);
        break;
      case TermKind::App:
      case TermKind::Lam:
      case TermKind::Pi:
        collect_level_metas(t->a, out);
        collect_level_metas(t->b, out);
        break;
      default:
        break;
    }
  }

  void collect_from_level(const Level& l, std::vector<uint64_t>& out) {
    switch (l.kind()) {
      case LevelKind::Meta:
        if (std::find(out.begin(), out.end(), l.meta_id()) == out.end())
          out.push_back(l.meta_id());
        break;
      case LevelKind::Succ:
        collect_from_level(l.arg0(), out);
        break;
      case LevelKind::Max:
        collect_from_level(l.arg0(), out);
        collect_from_level(l.arg1(), out);
        break;
      default:
        break;
    }
  }

  void fail_on_metas(std::vector<TermPtr*> terms) {
    for (TermPtr* t : terms) {
      std::vector<uint64_t> ms;
      collect_metas(*t, ms);
      if (ms.empty()) continue;
      std::string msg = "unsolved metavariables:";
      for (uint64_t id : ms) {
        const auto& e = el.metas.at(id);
        msg += "\n  ?m" + std::to_string(id) + " : " +
               term_to_string(el.zonk(e.target_type));
      }
      throw Error(ErrorClass::Elab, msg, el.metas.at(ms[0]).span);
    }
  }
};

}  // namespace

std::pair<TermPtr, TermPtr> Elaborator::elaborate_term(const STPtr& t, bool generalize) {
  auto& el = *impl_;
  STPtr ds = desugar(t);
  auto [e, ty] = el.synth(ds);
  // Insert trailing implicits so e.g. a bare polymorphic constant is usable.
  TermPtr ty_w = el.zwhnf(ty);
  while (is_pi(ty_w) && ty_w->bind != Binding::Explicit) {
    TermPtr m = ty_w->bind == Binding::Inst ? el.mk_class_meta(ty_w->a, ds->span)
                                            : el.fresh_meta(ty_w->a, ds->span);
    e = mk_app(e, m);
    ty_w = el.zwhnf(instantiate(ty_w->b, m));
  }
  ty = ty_w;
  el.retry_pending_levels(false);
  el.solve_class_goals();
  Finalizer fin{el};
  std::vector<Name> univs;
  fin.finish_levels({&e, &ty}, univs, generalize);
  fin.fail_on_metas({&e, &ty});
  if (!univs.empty() && !generalize)
    throw Error(ErrorClass::Elab, "cannot infer universe level in term");
  return {e, ty};
}

ElabResult Elaborator::elaborate_declaration(const SurfaceDecl& d) {
  auto& el = *impl_;
  el.declared_univs = d.univ_params;

  auto process_binders = [&](const std::vector<SurfaceBinder>& bs) {
    std::vector<TermPtr> fvars;
    for (const auto& b : bs) {
      TermPtr ty = b.type ? el.elaborate_type(desugar(b.type))
                          : el.fresh_type_meta(b.span);
      fvars.push_back(el.push_local(b.name, ty, b.vis));
    }
    return fvars;
  };

  auto close_over = [&](const std::vector<TermPtr>& fvars,
                        const std::vector<SurfaceBinder>& bs, TermPtr body, bool as_pi) {
    for (size_t i = fvars.size(); i-- > 0;) {
      TermPtr dom = el.zonk(fvars[i]->a);
      TermPtr inner = abstract(el.zonk(body), fvars[i]->id);
      body = as_pi ? mk_pi(bs[i].vis, bs[i].name, dom, inner)
                   : mk_lam(bs[i].vis, bs[i].name, dom, inner);
    }
    return body;
  };

  auto validate_inst_binders = [&](const std::vector<SurfaceBinder>& bs,
                                   const std::vector<TermPtr>& fvars) {
    for (size_t i = 0; i < bs.size(); ++i)
      if (bs[i].vis == Binding::Inst)
        el.class_head_of(el.zonk(fvars[i]->a), bs[i].span, true);
  };

  switch (d.kind) {
    case DeclSyntaxKind::Definition:
    case DeclSyntaxKind::Axiom: {
      auto fvars = process_binders(d.binders);
      TermPtr type = el.elaborate_type(desugar(d.type));
      TermPtr value;
      if (d.kind == DeclSyntaxKind::Definition)
        value = el.check(desugar(d.value), type);
      el.retry_pending_levels(false);
      el.solve_class_goals();
      validate_inst_binders(d.binders, fvars);

      TermPtr full_type = close_over(fvars, d.binders, type, true);
      TermPtr full_value =
          value ? close_over(fvars, d.binders, value, false) : nullptr;
      el.locals.clear();

      Finalizer fin{el};
      std::vector<Name> univs = d.univ_params;
      std::vector<TermPtr*> terms{&full_type};
      if (full_value) terms.push_back(&full_value);
      fin.finish_levels(terms, univs, true);
      fin.fail_on_metas(terms);

      Declaration decl;
      decl.name = d.name;
      decl.univ_params = univs;
      decl.type = full_type;
      decl.kind = d.kind == DeclSyntaxKind::Definition ? DeclKind::Definition
                                                       : DeclKind::Axiom;
      decl.value = full_value;
      return {std::move(decl), d.attributes};
    }

    case DeclSyntaxKind::Inductive: {
      auto pfvars = process_binders(d.binders);

      // The result type is Pi indices, Sort; elaborate and decompose.
      TermPtr result = el.elaborate_type(desugar(d.type));
      std::vector<TermPtr> index_fvars;
      TermPtr sort = result;
      std::vector<Binding> index_binds;
      std::vector<Name> index_names;
      for (;;) {
        sort = el.zwhnf(sort);
        if (!is_pi(sort)) break;
        TermPtr x = el.push_local(sort->hint, sort->a, Binding::Explicit);
        index_fvars.push_back(x);
        index_binds.push_back(sort->bind);
        index_names.push_back(sort->hint);
        sort = instantiate(sort->b, x);
      }
      if (!is_sort(sort)) {
        Level l = el.fresh_level_meta();
        el.unify_or_fail(sort, mk_sort(l), d.span, "inductive result");
        sort = mk_sort(l);
      }
      // Remove the index locals again; constructors see params + the family.
      el.locals.resize(pfvars.size());

      // Family placeholder as a local.
      TermPtr fam_ty = sort;
      for (size_t i = index_fvars.size(); i-- > 0;)
        fam_ty = mk_pi(index_binds[i], index_names[i], el.zonk(index_fvars[i]->a),
                       abstract(fam_ty, index_fvars[i]->id));
      // Params prefix for the family type.
      {
        TermPtr t = fam_ty;
        for (size_t i = pfvars.size(); i-- > 0;)
          t = mk_pi(d.binders[i].vis, d.binders[i].name, el.zonk(pfvars[i]->a),
                    abstract(t, pfvars[i]->id));
        fam_ty = t;
      }
      TermPtr fam = el.push_local(d.name, fam_ty, Binding::Explicit);

      struct ElabCtor {
        Name name;
        TermPtr type;  // in scope of param fvars (family fvar replaced)
        Span span;
      };
      std::vector<ElabCtor> ctors;
      for (const auto& c : d.ctors) {
        TermPtr cty = el.elaborate_type(desugar(c.type));
        ctors.push_back({c.name, cty, c.span});
      }
      el.retry_pending_levels(false);
      el.solve_class_goals();

      // Infer the family's level when the sort was written bare: max of index
      // domain levels and constructor argument levels. Contributions at the
      // family's own level (recursive occurrences) are skipped; positivity
      // validation deals with the ill-formed ones.
      Level fam_level = el.zonk_level(sort->level);
      if (fam_level.kind() == LevelKind::Meta) {
        uint64_t fam_meta = fam_level.meta_id();
        Level acc = Level::zero();
        auto add = [&](const TermPtr& dom, Span span) {
          Level lv = el.zonk_level(el.ensure_sort(el.infer(dom), span));
          for (const auto& atom : level_atoms(lv))
            if (atom.is_meta && atom.meta_id == fam_meta) return;
          acc = Level::max(acc, lv);
        };
        for (const auto& ix : index_fvars) add(el.zonk(ix->a), d.span);
        for (const auto& c : ctors) {
          TermPtr cur = el.zonk(c.type);
          while (is_pi(cur)) {
            TermPtr dom = cur->a;
            if (contains_fvar(dom, fam->id)) {
              // recursive argument: telescope domains count
              TermPtr inner = dom;
              while (is_pi(inner)) {
                if (!contains_fvar(inner->a, fam->id)) add(inner->a, c.span);
                TermPtr y = mk_fvar(next_unique_id(), inner->hint, inner->a);
                inner = instantiate(inner->b, y);
              }
            } else {
              add(dom, c.span);
            }
            TermPtr x = mk_fvar(next_unique_id(), cur->hint, dom);
            cur = instantiate(cur->b, x);
          }
        }
        el.assign_level_meta(fam_meta, level_normalize(acc));
        fam_level = el.zonk_level(fam_level);
      }

      el.locals.clear();

      // Zonk everything, then swap the family fvar for the constant.
      Finalizer fin{el};
      std::vector<Name> univs = d.univ_params;
      std::vector<TermPtr> all;
      std::vector<TermPtr*> ptrs;
      std::vector<TermPtr> param_types, index_types, ctor_types;
      for (const auto& p : pfvars) param_types.push_back(p->a);
      for (const auto& ix : index_fvars) index_types.push_back(ix->a);
      for (const auto& c : ctors) ctor_types.push_back(c.type);
      for (auto& t : param_types) ptrs.push_back(&t);
      for (auto& t : index_types) ptrs.push_back(&t);
      for (auto& t : ctor_types) ptrs.push_back(&t);
      TermPtr sort_term = mk_sort(fam_level);
      ptrs.push_back(&sort_term);
      fin.finish_levels(ptrs, univs, true);
      fin.fail_on_metas(ptrs);
      fam_level = sort_term->level;

      InductiveSpec spec;
      spec.name = d.name;
      spec.univ_params = univs;
      spec.result_level = fam_level;

      // Replace the family fvar with the constant (applied levels).
      TermPtr fam_const = mk_const(d.name, [&] {
        std::vector<Level> ls;
        for (const auto& u : univs) ls.push_back(Level::param(u));
        return ls;
      }());
      auto subst_fam = [&](TermPtr t) {
        // The fvar occurs bare (applications handled structurally).
        struct Repl {
          uint64_t id;
          TermPtr repl;
          TermPtr go(const TermPtr& s) {
            if (!s->has_fvar) return s;
            if (s->kind == TermKind::FVar && s->id == id) return repl;
            if (s->kind == TermKind::App || s->kind == TermKind::Lam ||
                s->kind == TermKind::Pi) {
              TermPtr a = go(s->a), b = go(s->b);
              if (a == s->a && b == s->b) return s;
              if (s->kind == TermKind::App) return mk_app(a, b);
              return s->kind == TermKind::Lam ? mk_lam(s->bind, s->hint, a, b)
                                              : mk_pi(s->bind, s->hint, a, b);
            }
            return s;
          }
        } r{fam->id, fam_const};
        return r.go(t);
      };

      // Build de Bruijn telescopes by abstracting the fvar chains.
      auto build_tele = [&](const std::vector<TermPtr>& fv,
                            const std::vector<TermPtr>& types,
                            const std::vector<TermPtr>& outer,
                            const std::vector<Binding>& binds,
                            const std::vector<Name>& names) {
        std::vector<TelescopeEntry> tele;
        for (size_t i = 0; i < fv.size(); ++i) {
          TermPtr ty = subst_fam(types[i]);
          std::vector<uint64_t> ids;
          for (size_t j = i; j-- > 0;) ids.push_back(fv[j]->id);
          for (size_t j = outer.size(); j-- > 0;) ids.push_back(outer[j]->id);
          std::reverse(ids.begin(), ids.end());
          tele.push_back(TelescopeEntry{binds[i], names[i], abstract(ty, ids)});
        }
        return tele;
      };
      std::vector<Binding> pbinds;
      std::vector<Name> pnames;
      for (const auto& b : d.binders) {
        pbinds.push_back(b.vis);
        pnames.push_back(b.name);
      }
      spec.params = build_tele(pfvars, param_types, {}, pbinds, pnames);
      spec.indices = build_tele(index_fvars, index_types, pfvars, index_binds, index_names);

      // Constructors: peel the elaborated Pi telescope; the result must be the
      // family applied to params and indices.
      for (size_t ci = 0; ci < ctors.size(); ++ci) {
        ConstructorSpec cs;
        cs.name = ctors[ci].name;
        TermPtr cur = subst_fam(ctor_types[ci]);
        std::vector<TermPtr> afvars;
        std::vector<Binding> abinds;
        std::vector<Name> anames;
        std::vector<TermPtr> atypes;
        while (is_pi(cur)) {
          TermPtr x = mk_fvar(next_unique_id(), cur->hint, cur->a);
          afvars.push_back(x);
          abinds.push_back(cur->bind);
          anames.push_back(cur->hint);
          atypes.push_back(cur->a);
          cur = instantiate(cur->b, x);
        }
        cs.args = build_tele(afvars, atypes, pfvars, abinds, anames);
        std::vector<TermPtr> hargs;
        TermPtr head = get_app_fn_args(cur, hargs);
        if (head->kind != TermKind::Const || head->cname != d.name)
          throw Error(ErrorClass::Kernel,
                      "constructor '" + cs.name + "' must target '" + d.name + "'",
                      ctors[ci].span);
        if (hargs.size() != pfvars.size() + index_fvars.size())
          throw Error(ErrorClass::Kernel,
                      "constructor '" + cs.name + "' result has wrong arity",
                      ctors[ci].span);
        for (size_t p = 0; p < pfvars.size(); ++p)
          if (!(hargs[p]->kind == TermKind::FVar && hargs[p]->id == pfvars[p]->id))
            throw Error(ErrorClass::Kernel,
                        "constructor '" + cs.name +
                            "' must apply the family to its parameters",
                        ctors[ci].span);
        for (size_t k = pfvars.size(); k < hargs.size(); ++k) {
          std::vector<uint64_t> ids;
          for (size_t j = afvars.size(); j-- > 0;) ids.push_back(afvars[j]->id);
          for (size_t j = pfvars.size(); j-- > 0;) ids.push_back(pfvars[j]->id);
          std::reverse(ids.begin(), ids.end());
          cs.result_indices.push_back(abstract(hargs[k], ids));
        }
        spec.constructors.push_back(std::move(cs));
      }

      Declaration decl;
      decl.name = d.name;
      decl.univ_params = spec.univ_params;
      decl.type = inductive_type(spec);
      decl.kind = DeclKind::Inductive;
      decl.ind = std::make_shared<const InductiveSpec>(std::move(spec));
      return {std::move(decl), d.attributes};
    }

    default:
      throw Error(ErrorClass::Internal,
                  "elaborate_declaration: unsupported declaration kind", d.span);
  }
}

}  // namespace hott
