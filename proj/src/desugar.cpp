#include "hott/surface.hpp"

namespace hott {

namespace {
STPtr make(SurfKind k, Span s) {
  auto t = std::make_shared<SurfaceTerm>();
  t->kind = k;
  t->span = s;
  return t;
}
std::shared_ptr<SurfaceTerm> make_mut(SurfKind k, Span s) {
  auto t = std::make_shared<SurfaceTerm>();
  t->kind = k;
  t->span = s;
  return t;
}
}  // namespace

STPtr mk_svar(Name n, Span s, std::vector<Level> levels, bool has_levels) {
  auto t = make_mut(SurfKind::Var, s);
  t->name = std::move(n);
  t->levels = std::move(levels);
  t->has_levels = has_levels;
  return t;
}

STPtr mk_ssort(Span s, Level l, bool has_level) {
  auto t = make_mut(SurfKind::Sort, s);
  t->levels = {std::move(l)};
  t->has_levels = has_level;
  return t;
}

STPtr mk_sapp(STPtr f, STPtr a, Span s) {
  auto t = make_mut(SurfKind::App, s);
  t->a = std::move(f);
  t->b = std::move(a);
  return t;
}

STPtr mk_slam(SurfaceBinder b, STPtr body, Span s) {
  auto t = make_mut(SurfKind::Lam, s);
  t->binder = std::move(b);
  t->b = std::move(body);
  return t;
}

STPtr mk_spi(SurfaceBinder b, STPtr body, Span s) {
  auto t = make_mut(SurfKind::Pi, s);
  t->binder = std::move(b);
  t->b = std::move(body);
  return t;
}

STPtr mk_sarrow(STPtr dom, STPtr cod, Span s) {
  auto t = make_mut(SurfKind::Arrow, s);
  t->a = std::move(dom);
  t->b = std::move(cod);
  return t;
}

STPtr mk_sexplicit(Name head, std::vector<Level> levels, std::vector<STPtr> args, Span s) {
  auto t = make_mut(SurfKind::ExplicitApp, s);
  t->name = std::move(head);
  t->levels = std::move(levels);
  t->has_levels = !t->levels.empty();
  t->args = std::move(args);
  return t;
}

STPtr mk_shole(Span s) { return make(SurfKind::Hole, s); }

STPtr mk_ssugar(Name id, std::vector<STPtr> parts, Span s) {
  auto t = make_mut(SurfKind::Sugar, s);
  t->name = std::move(id);
  t->args = std::move(parts);
  return t;
}

STPtr desugar(const STPtr& t) {
  if (!t) return t;
  switch (t->kind) {
    case SurfKind::Var:
    case SurfKind::Sort:
    case SurfKind::Hole:
      return t;
    case SurfKind::App:
      return mk_sapp(desugar(t->a), desugar(t->b), t->span);
    case SurfKind::Lam:
    case SurfKind::Pi: {
      SurfaceBinder b = t->binder;
      b.type = desugar(b.type);
      return t->kind == SurfKind::Lam ? mk_slam(std::move(b), desugar(t->b), t->span)
                                      : mk_spi(std::move(b), desugar(t->b), t->span);
    }
    case SurfKind::Arrow: {
      SurfaceBinder b{"_", desugar(t->a), Binding::Explicit, t->a->span};
      return mk_spi(std::move(b), desugar(t->b), t->span);
    }
    case SurfKind::ExplicitApp: {
      std::vector<STPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(desugar(a));
      return mk_sexplicit(t->name, t->levels, std::move(args), t->span);
    }
    case SurfKind::Sugar: {
      std::vector<STPtr> parts;
      parts.reserve(t->args.size());
      for (const auto& a : t->args) parts.push_back(desugar(a));
      auto var = [&](const char* n) { return mk_svar(n, t->span); };
      auto apply = [&](STPtr head, std::initializer_list<STPtr> as) {
        for (const auto& x : as) head = mk_sapp(head, x, t->span);
        return head;
      };
      // Fixed table: a = b, p ⬝ q, p⁻¹, x =[p] y, p ▸ x, f ∘ g, A ≃ B,
      // A × B, a * b, a + b, Σ-binders.
      if (t->name == "pathover")
        return apply(var("pathover"), {mk_shole(t->span), parts[0], parts[1], parts[2]});
      if (t->name == "transport")  // p ▸ x  ↦  transport _ p x
        return apply(var("transport"), {mk_shole(t->span), parts[0], parts[1]});
      if (t->name == "inverse")
        return apply(var("inverse"), {parts[0]});
      if (t->name == "sigma")
        return apply(var("sigma"), {parts[0]});
      // Remaining notations are plain binary heads.
      return apply(var(t->name.c_str()), {parts[0], parts[1]});
    }
  }
  return t;
}

bool surface_eq(const STPtr& a, const STPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SurfKind::Var: {
      if (a->name != b->name || a->has_levels != b->has_levels ||
          a->levels.size() != b->levels.size())
        return false;
      for (size_t i = 0; i < a->levels.size(); ++i)
        if (!structurally_equal(a->levels[i], b->levels[i])) return false;
      return true;
    }
    case SurfKind::Sort:
      return a->has_levels == b->has_levels &&
             (!a->has_levels || structurally_equal(a->levels[0], b->levels[0]));
    case SurfKind::Hole:
      return true;
    case SurfKind::App:
    case SurfKind::Arrow:
      return surface_eq(a->a, b->a) && surface_eq(a->b, b->b);
    case SurfKind::Lam:
    case SurfKind::Pi:
      return a->binder.name == b->binder.name && a->binder.vis == b->binder.vis &&
             surface_eq(a->binder.type, b->binder.type) && surface_eq(a->b, b->b);
    case SurfKind::ExplicitApp: {
      if (a->name != b->name || a->args.size() != b->args.size() ||
          a->levels.size() != b->levels.size())
        return false;
      for (size_t i = 0; i < a->levels.size(); ++i)
        if (!structurally_equal(a->levels[i], b->levels[i])) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!surface_eq(a->args[i], b->args[i])) return false;
      return true;
    }
    case SurfKind::Sugar: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!surface_eq(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

const char* sugar_symbol(const Name& id) {
  if (id == "compose") return " ∘ ";
  if (id == "prod") return " × ";
  if (id == "mul") return " * ";
  if (id == "add") return " + ";
  if (id == "concat") return " ⬝ ";
  if (id == "transport") return " ▸ ";
  if (id == "eq") return " = ";
  if (id == "equiv") return " ≃ ";
  return nullptr;
}

std::string print_binder(const SurfaceBinder& b) {
  const char* open = b.vis == Binding::Explicit ? "(" : b.vis == Binding::Implicit ? "{" : "[";
  const char* close = b.vis == Binding::Explicit ? ")" : b.vis == Binding::Implicit ? "}" : "]";
  std::string s = open + b.name;
  if (b.type) s += " : " + surface_to_string(b.type);
  return s + close;
}

// Atoms print bare; everything else is parenthesized when embedded, which
// keeps reparsing exact.
bool is_atomic(const STPtr& t) {
  return t->kind == SurfKind::Var || t->kind == SurfKind::Sort ||
         t->kind == SurfKind::Hole;
}

std::string print_atom(const STPtr& t) {
  std::string s = surface_to_string(t);
  if (is_atomic(t)) return s;
  return "(" + s + ")";
}

}  // namespace

std::string surface_to_string(const STPtr& t) {
  switch (t->kind) {
    case SurfKind::Var: {
      std::string s = t->name;
      if (t->has_levels) {
        s += ".{";
        for (size_t i = 0; i < t->levels.size(); ++i) {
          if (i) s += " ";
          s += level_to_string(t->levels[i]);
        }
        s += "}";
      }
      return s;
    }
    case SurfKind::Sort:
      return t->has_levels ? "Type.{" + level_to_string(t->levels[0]) + "}" : "Type";
    case SurfKind::Hole:
      return "_";
    case SurfKind::App:
      return print_atom(t->a) + " " + print_atom(t->b);
    case SurfKind::Lam:
      return "λ" + print_binder(t->binder) + ", " + surface_to_string(t->b);
    case SurfKind::Pi:
      return "Π" + print_binder(t->binder) + ", " + surface_to_string(t->b);
    case SurfKind::Arrow:
      return print_atom(t->a) + " → " + surface_to_string(t->b);
    case SurfKind::ExplicitApp: {
      std::string s = "@" + t->name;
      if (t->has_levels) {
        s += ".{";
        for (size_t i = 0; i < t->levels.size(); ++i) {
          if (i) s += " ";
          s += level_to_string(t->levels[i]);
        }
        s += "}";
      }
      for (const auto& a : t->args) s += " " + print_atom(a);
      return s;
    }
    case SurfKind::Sugar: {
      if (t->name == "inverse") return print_atom(t->args[0]) + "⁻¹";
      if (t->name == "pathover")
        return print_atom(t->args[0]) + " =[" + surface_to_string(t->args[1]) + "] " +
               print_atom(t->args[2]);
      if (t->name == "sigma") {
        // Σ-sugar always wraps a lambda.
        const STPtr& lam = t->args[0];
        return "Σ" + print_binder(lam->binder) + ", " + surface_to_string(lam->b);
      }
      if (const char* sym = sugar_symbol(t->name))
        return print_atom(t->args[0]) + sym + print_atom(t->args[1]);
      return "?sugar:" + t->name;
    }
  }
  return "?";
}

std::string surface_decl_to_string(const SurfaceDecl& d) {
  std::string s;
  auto univs = [&] {
    if (d.univ_params.empty()) return std::string();
    std::string u = ".{";
    for (size_t i = 0; i < d.univ_params.size(); ++i) {
      if (i) u += " ";
      u += d.univ_params[i];
    }
    return u + "}";
  };
  auto attrs = [&] {
    std::string a;
    for (const auto& at : d.attributes) a += " [" + at + "]";
    return a;
  };
  auto binders = [&] {
    std::string b;
    for (const auto& bd : d.binders) b += " " + print_binder(bd);
    return b;
  };
  switch (d.kind) {
    case DeclSyntaxKind::Definition:
      s = "definition " + d.name + univs() + attrs() + binders() + " : " +
          surface_to_string(d.type) + " := " + surface_to_string(d.value);
      break;
    case DeclSyntaxKind::Axiom:
      s = "axiom " + d.name + univs() + attrs() + binders() + " : " +
          surface_to_string(d.type);
      break;
    case DeclSyntaxKind::Inductive: {
      s = "inductive " + d.name + univs() + attrs() + binders() + " : " +
          surface_to_string(d.type) + " :=";
      for (const auto& c : d.ctors)
        s += "\n| " + c.name + " : " + surface_to_string(c.type);
      break;
    }
    case DeclSyntaxKind::HitInit:
      s = "hit " + d.hit_kind;
      break;
    case DeclSyntaxKind::Attribute:
      s = "attribute " + d.name + attrs();
      break;
    case DeclSyntaxKind::Import:
      s = "import " + d.import_path;
      break;
    case DeclSyntaxKind::Directive:
      if (d.directive == "defeq")
        s = "#defeq " + print_atom(d.dir_t) + " " + print_atom(d.dir_u);
      else if (d.directive == "check")
        s = "#check " + print_atom(d.dir_t) + " : " + surface_to_string(d.dir_u);
      else if (d.directive == "print_axioms")
        s = "#print_axioms " + d.dir_name;
      else
        s = "#normalize " + surface_to_string(d.dir_t);
      break;
  }
  return s;
}

bool surface_decl_eq(const SurfaceDecl& a, const SurfaceDecl& b) {
  if (a.kind != b.kind || a.name != b.name || a.univ_params != b.univ_params ||
      a.attributes != b.attributes || a.hit_kind != b.hit_kind ||
      a.import_path != b.import_path || a.directive != b.directive ||
      a.dir_name != b.dir_name)
    return false;
  if (a.binders.size() != b.binders.size() || a.ctors.size() != b.ctors.size())
    return false;
  for (size_t i = 0; i < a.binders.size(); ++i) {
    if (a.binders[i].name != b.binders[i].name ||
        a.binders[i].vis != b.binders[i].vis ||
        !surface_eq(a.binders[i].type, b.binders[i].type))
      return false;
  }
  for (size_t i = 0; i < a.ctors.size(); ++i)
    if (a.ctors[i].name != b.ctors[i].name || !surface_eq(a.ctors[i].type, b.ctors[i].type))
      return false;
  return surface_eq(a.type, b.type) && surface_eq(a.value, b.value) &&
         surface_eq(a.dir_t, b.dir_t) && surface_eq(a.dir_u, b.dir_u);
}

}  // namespace hott
