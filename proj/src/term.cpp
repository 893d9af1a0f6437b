#include "hott/term.hpp"

#include <algorithm>
#include <functional>

namespace hott {

namespace {

void seed_flags(Term& t) {
  uint32_t lb = 0;
  bool fv = false, mv = false;
  auto merge = [&](const TermPtr& c) {
    if (!c) return;
    lb = std::max(lb, c->loose_bvars);
    fv = fv || c->has_fvar;
    mv = mv || c->has_meta;
  };
  switch (t.kind) {
    case TermKind::BVar:
      lb = t.bvar_idx + 1;
      break;
    case TermKind::Sort:
      mv = t.level.has_meta();
      break;
    case TermKind::Const:
      for (const auto& l : t.levels) mv = mv || l.has_meta();
      break;
    case TermKind::App:
      merge(t.a);
      merge(t.b);
      break;
    case TermKind::Lam:
    case TermKind::Pi:
      merge(t.a);
      if (t.b) {
        lb = std::max(lb, t.b->loose_bvars > 0 ? t.b->loose_bvars - 1 : 0);
        fv = fv || t.b->has_fvar;
        mv = mv || t.b->has_meta;
      }
      for (const auto& l : t.levels) mv = mv || l.has_meta();
      break;
    case TermKind::FVar:
      fv = true;
      if (t.a) mv = mv || t.a->has_meta;
      break;
    case TermKind::Meta:
      mv = true;
      break;
  }
  t.loose_bvars = lb;
  t.has_fvar = fv;
  t.has_meta = mv;
}

TermPtr finish(std::shared_ptr<Term> t) {
  seed_flags(*t);
  return t;
}

}  // namespace

TermPtr mk_bvar(uint32_t idx) {
  auto t = std::make_shared<Term>(TermKind::BVar);
  t->bvar_idx = idx;
  return finish(std::move(t));
}

TermPtr mk_sort(Level l) {
  auto t = std::make_shared<Term>(TermKind::Sort);
  t->level = std::move(l);
  return finish(std::move(t));
}

TermPtr mk_const(Name n, std::vector<Level> levels) {
  auto t = std::make_shared<Term>(TermKind::Const);
  t->cname = std::move(n);
  t->levels = std::move(levels);
  return finish(std::move(t));
}

TermPtr mk_app(TermPtr fn, TermPtr arg) {
  auto t = std::make_shared<Term>(TermKind::App);
  t->a = std::move(fn);
  t->b = std::move(arg);
  return finish(std::move(t));
}

TermPtr mk_app(TermPtr fn, std::span<const TermPtr> args) {
  TermPtr r = std::move(fn);
  for (const auto& a : args) r = mk_app(r, a);
  return r;
}

TermPtr mk_lam(Binding b, Name hint, TermPtr dom, TermPtr body) {
  auto t = std::make_shared<Term>(TermKind::Lam);
  t->bind = b;
  t->hint = std::move(hint);
  t->a = std::move(dom);
  t->b = std::move(body);
  return finish(std::move(t));
}

TermPtr mk_pi(Binding b, Name hint, TermPtr dom, TermPtr body) {
  auto t = std::make_shared<Term>(TermKind::Pi);
  t->bind = b;
  t->hint = std::move(hint);
  t->a = std::move(dom);
  t->b = std::move(body);
  return finish(std::move(t));
}

TermPtr mk_arrow(TermPtr dom, TermPtr cod) {
  return mk_pi(Binding::Explicit, "_", std::move(dom), shift(cod, 1));
}

TermPtr mk_fvar(uint64_t id, Name hint, TermPtr type) {
  auto t = std::make_shared<Term>(TermKind::FVar);
  t->id = id;
  t->hint = std::move(hint);
  t->a = std::move(type);
  return finish(std::move(t));
}

TermPtr mk_meta(uint64_t id) {
  auto t = std::make_shared<Term>(TermKind::Meta);
  t->id = id;
  return finish(std::move(t));
}

bool is_sort(const TermPtr& t) { return t->kind == TermKind::Sort; }
bool is_pi(const TermPtr& t) { return t->kind == TermKind::Pi; }
bool is_lam(const TermPtr& t) { return t->kind == TermKind::Lam; }
bool is_app(const TermPtr& t) { return t->kind == TermKind::App; }
bool is_const(const TermPtr& t, const Name& n) {
  return t->kind == TermKind::Const && t->cname == n;
}

const Term* get_app_fn(const Term* t) {
  while (t->kind == TermKind::App) t = t->a.get();
  return t;
}

TermPtr get_app_fn(const TermPtr& t) {
  TermPtr r = t;
  while (r->kind == TermKind::App) r = r->a;
  return r;
}

void get_app_args(const TermPtr& t, std::vector<TermPtr>& args) {
  size_t n = 0;
  for (const Term* p = t.get(); p->kind == TermKind::App; p = p->a.get()) ++n;
  args.resize(n);
  TermPtr p = t;
  while (p->kind == TermKind::App) {
    args[--n] = p->b;
    p = p->a;
  }
}

TermPtr get_app_fn_args(const TermPtr& t, std::vector<TermPtr>& args) {
  get_app_args(t, args);
  return get_app_fn(t);
}

namespace {

// Generic bvar-aware rewrite. fn(term, depth) returns nullptr to recurse.
TermPtr transform(const TermPtr& t, uint32_t depth,
                  const std::function<TermPtr(const TermPtr&, uint32_t)>& fn) {
  if (TermPtr r = fn(t, depth)) return r;
  switch (t->kind) {
    case TermKind::BVar:
    case TermKind::Sort:
    case TermKind::Const:
    case TermKind::Meta:
      return t;
    case TermKind::FVar: {
      // FVar types are closed; no rewriting beneath.
      return t;
    }
    case TermKind::App: {
      TermPtr a = transform(t->a, depth, fn);
      TermPtr b = transform(t->b, depth, fn);
      if (a == t->a && b == t->b) return t;
      return mk_app(std::move(a), std::move(b));
    }
    case TermKind::Lam:
    case TermKind::Pi: {
      TermPtr a = transform(t->a, depth, fn);
      TermPtr b = transform(t->b, depth + 1, fn);
      if (a == t->a && b == t->b) return t;
      return t->kind == TermKind::Lam ? mk_lam(t->bind, t->hint, std::move(a), std::move(b))
                                      : mk_pi(t->bind, t->hint, std::move(a), std::move(b));
    }
  }
  return t;
}

}  // namespace

TermPtr instantiate(const TermPtr& t, std::span<const TermPtr> args) {
  if (args.empty() || t->loose_bvars == 0) return t;
  uint32_t n = static_cast<uint32_t>(args.size());
  return transform(t, 0, [&](const TermPtr& s, uint32_t depth) -> TermPtr {
    if (s->loose_bvars <= depth) return s;  // no loose vars to touch below
    if (s->kind == TermKind::BVar) {
      uint32_t i = s->bvar_idx;
      if (i < depth) return s;
      uint32_t k = i - depth;
      if (k < n) return shift(args[k], depth);
      return mk_bvar(i - n);
    }
    return nullptr;
  });
}

TermPtr instantiate(const TermPtr& t, const TermPtr& a) {
  return instantiate(t, std::span<const TermPtr>(&a, 1));
}

TermPtr abstract(const TermPtr& t, std::span<const uint64_t> fvar_ids) {
  if (fvar_ids.empty() || !t->has_fvar) return t;
  uint32_t n = static_cast<uint32_t>(fvar_ids.size());
  return transform(t, 0, [&](const TermPtr& s, uint32_t depth) -> TermPtr {
    if (s->kind == TermKind::FVar) {
      for (uint32_t i = 0; i < n; ++i)
        if (fvar_ids[i] == s->id) return mk_bvar(depth + (n - 1 - i));
      return s;
    }
    if (!s->has_fvar && s->loose_bvars <= depth) return s;
    if (s->kind == TermKind::BVar && s->bvar_idx >= depth)
      return mk_bvar(s->bvar_idx + n);
    return nullptr;
  });
}

TermPtr abstract(const TermPtr& t, uint64_t fvar_id) {
  return abstract(t, std::span<const uint64_t>(&fvar_id, 1));
}

TermPtr shift(const TermPtr& t, uint32_t by, uint32_t cutoff) {
  if (by == 0 || t->loose_bvars <= cutoff) return t;
  return transform(t, cutoff, [&](const TermPtr& s, uint32_t depth) -> TermPtr {
    if (s->loose_bvars <= depth) return s;
    if (s->kind == TermKind::BVar)
      return s->bvar_idx >= depth ? mk_bvar(s->bvar_idx + by) : s;
    return nullptr;
  });
}

TermPtr instantiate_level_params(const TermPtr& t, const std::vector<Name>& params,
                                 const std::vector<Level>& args) {
  if (params.empty()) return t;
  return transform(t, 0, [&](const TermPtr& s, uint32_t) -> TermPtr {
    if (s->kind == TermKind::Sort)
      return mk_sort(instantiate_level(s->level, params, args));
    if (s->kind == TermKind::Const && !s->levels.empty()) {
      std::vector<Level> ls;
      ls.reserve(s->levels.size());
      for (const auto& l : s->levels) ls.push_back(instantiate_level(l, params, args));
      return mk_const(s->cname, std::move(ls));
    }
    return nullptr;
  });
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::BVar: return a->bvar_idx == b->bvar_idx;
    case TermKind::Sort: return structurally_equal(a->level, b->level);
    case TermKind::Const: {
      if (a->cname != b->cname || a->levels.size() != b->levels.size()) return false;
      for (size_t i = 0; i < a->levels.size(); ++i)
        if (!structurally_equal(a->levels[i], b->levels[i])) return false;
      return true;
    }
    case TermKind::App: return term_eq(a->a, b->a) && term_eq(a->b, b->b);
    case TermKind::Lam:
    case TermKind::Pi:
      return term_eq(a->a, b->a) && term_eq(a->b, b->b);
    case TermKind::FVar: return a->id == b->id;
    case TermKind::Meta: return a->id == b->id;
  }
  return false;
}

size_t term_hash(const TermPtr& t) {
  auto mix = [](size_t h, size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  };
  size_t h = static_cast<size_t>(t->kind) * 131;
  switch (t->kind) {
    case TermKind::BVar: return mix(h, t->bvar_idx);
    case TermKind::Sort: return mix(h, std::hash<std::string>{}(level_to_string(level_normalize(t->level))));
    case TermKind::Const: {
      h = mix(h, std::hash<std::string>{}(t->cname));
      for (const auto& l : t->levels)
        h = mix(h, std::hash<std::string>{}(level_to_string(level_normalize(l))));
      return h;
    }
    case TermKind::App: return mix(mix(h, term_hash(t->a)), term_hash(t->b));
    case TermKind::Lam:
    case TermKind::Pi:
      return mix(mix(h, term_hash(t->a)), term_hash(t->b));
    case TermKind::FVar: return mix(h, t->id);
    case TermKind::Meta: return mix(h, t->id * 2654435761u);
  }
  return h;
}

namespace {
void walk(const TermPtr& t, const std::function<void(const TermPtr&)>& fn) {
  fn(t);
  switch (t->kind) {
    case TermKind::App:
    case TermKind::Lam:
    case TermKind::Pi:
      walk(t->a, fn);
      walk(t->b, fn);
      break;
    default:
      break;
  }
}
}  // namespace

void collect_fvars(const TermPtr& t, std::vector<uint64_t>& out) {
  if (!t->has_fvar) return;
  walk(t, [&](const TermPtr& s) {
    if (s->kind == TermKind::FVar &&
        std::find(out.begin(), out.end(), s->id) == out.end())
      out.push_back(s->id);
  });
}

bool contains_fvar(const TermPtr& t, uint64_t id) {
  if (!t->has_fvar) return false;
  switch (t->kind) {
    case TermKind::FVar: return t->id == id;
    case TermKind::App:
    case TermKind::Lam:
    case TermKind::Pi:
      return contains_fvar(t->a, id) || contains_fvar(t->b, id);
    default:
      return false;
  }
}

void collect_metas(const TermPtr& t, std::vector<uint64_t>& out) {
  if (!t->has_meta) return;
  walk(t, [&](const TermPtr& s) {
    if (s->kind == TermKind::Meta &&
        std::find(out.begin(), out.end(), s->id) == out.end())
      out.push_back(s->id);
  });
}

void collect_consts(const TermPtr& t, std::vector<Name>& out) {
  walk(t, [&](const TermPtr& s) {
    if (s->kind == TermKind::Const &&
        std::find(out.begin(), out.end(), s->cname) == out.end())
      out.push_back(s->cname);
  });
}

void collect_level_params(const TermPtr& t, std::vector<Name>& out) {
  walk(t, [&](const TermPtr& s) {
    if (s->kind == TermKind::Sort) hott::collect_level_params(s->level, out);
    if (s->kind == TermKind::Const)
      for (const auto& l : s->levels) hott::collect_level_params(l, out);
  });
}

size_t term_size(const TermPtr& t) {
  size_t n = 0;
  walk(t, [&](const TermPtr&) { ++n; });
  return n;
}

}  // namespace hott
