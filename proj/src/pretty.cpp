#include "hott/pretty.hpp"

#include <vector>

namespace hott {

namespace {

struct Printer {
  bool with_levels;
  std::vector<Name> binders;  // innermost last

  Name fresh_hint(const Name& hint) {
    Name base = hint.empty() || hint == "_" ? "x" : hint;
    Name n = base;
    int i = 0;
    auto taken = [&](const Name& c) {
      for (const auto& b : binders)
        if (b == c) return true;
      return false;
    };
    while (taken(n)) n = base + "." + std::to_string(++i);
    return n;
  }

  void open_brackets(std::string& s, Binding b) {
    s += b == Binding::Explicit ? "(" : b == Binding::Implicit ? "{" : "[";
  }
  void close_brackets(std::string& s, Binding b) {
    s += b == Binding::Explicit ? ")" : b == Binding::Implicit ? "}" : "]";
  }

  // prec: 0 = top, 1 = application argument.
  std::string print(const TermPtr& t, int prec) {
    switch (t->kind) {
      case TermKind::BVar: {
        size_t i = t->bvar_idx;
        if (i < binders.size()) return binders[binders.size() - 1 - i];
        return "#" + std::to_string(i);
      }
      case TermKind::FVar:
        return (t->hint.empty() ? "x" : t->hint) + "!" + std::to_string(t->id);
      case TermKind::Meta:
        return "?m" + std::to_string(t->id);
      case TermKind::Sort: {
        if (t->level.is_zero()) return "Type";
        return "Type.{" + level_to_string(t->level) + "}";
      }
      case TermKind::Const: {
        if (!with_levels || t->levels.empty()) return t->cname;
        std::string s = t->cname + ".{";
        for (size_t i = 0; i < t->levels.size(); ++i) {
          if (i) s += " ";
          s += level_to_string(t->levels[i]);
        }
        return s + "}";
      }
      case TermKind::App: {
        std::string s = print(t->a, 1) + " " + print(t->b, 2);
        return prec >= 2 ? "(" + s + ")" : s;
      }
      case TermKind::Lam:
      case TermKind::Pi: {
        std::string s = t->kind == TermKind::Lam ? "λ" : "Π";
        Name n = fresh_hint(t->hint);
        open_brackets(s, t->bind);
        s += n + " : " + print(t->a, 0);
        close_brackets(s, t->bind);
        s += ", ";
        binders.push_back(n);
        s += print(t->b, 0);
        binders.pop_back();
        return prec >= 1 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }
};

}  // namespace

std::string term_to_string(const TermPtr& t, bool with_levels) {
  Printer p{with_levels, {}};
  return p.print(t, 0);
}

}  // namespace hott
