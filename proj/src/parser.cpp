#include "hott/parser.hpp"

#include <algorithm>

namespace hott {

namespace {

// Infix table. Application binds tighter than all of these; the postfix
// inverse binds tighter than application spine extension.
struct InfixOp {
  const char* symbol;
  int prec;
  bool right_assoc;
  const char* sugar;  // notation id
};

const InfixOp kInfix[] = {
    {"∘", 60, true, "compose"},   // ∘
    {"×", 59, true, "prod"},      // ×
    {"*", 58, false, "mul"},
    {"+", 57, false, "add"},
    {"⬝", 56, false, "concat"},   // ⬝ (left)
    {"▸", 55, true, "transport"}, // ▸
    {"=", 50, true, "eq"},
    {"≃", 50, true, "equiv"},     // ≃
};

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;

  const Token& peek(size_t k = 0) const {
    size_t i = std::min(pos + k, toks.size() - 1);
    return toks[i];
  }
  const Token& next() {
    const Token& t = toks[std::min(pos, toks.size() - 1)];
    if (pos < toks.size() - 1) ++pos;
    return t;
  }
  bool at_symbol(const char* s) const {
    return peek().kind == TokKind::Symbol && peek().canon == s;
  }
  bool at_keyword(const char* s) const {
    return peek().kind == TokKind::Keyword && peek().canon == s;
  }
  bool at_ident(const char* s) const {
    return peek().kind == TokKind::Ident && peek().canon == s;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string got = t.kind == TokKind::Eof ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorClass::Parse, "expected " + expected + ", found " + got, t.span);
  }
  Token expect_symbol(const char* s) {
    if (!at_symbol(s)) fail(std::string("'") + s + "'");
    return next();
  }
  Token expect_ident() {
    if (peek().kind != TokKind::Ident) fail("identifier");
    return next();
  }
  Span span_from(const Span& start) const {
    Span s = start;
    s.end = pos > 0 ? toks[pos - 1].span.end : start.end;
    return s;
  }

  // ---- levels -------------------------------------------------------------

  Level parse_level_atom() {
    if (peek().kind == TokKind::UnivLit)
      return Level::of_nat(static_cast<unsigned>(std::stoul(next().canon)));
    if (at_ident("max")) {
      next();
      Level a = parse_level_atom();
      Level b = parse_level_atom();
      return Level::max(a, b);
    }
    if (at_symbol("(")) {
      next();
      Level l = parse_level();
      expect_symbol(")");
      return l;
    }
    if (peek().kind == TokKind::Ident) return Level::param(next().canon);
    fail("universe level");
  }

  Level parse_level() {
    Level l = parse_level_atom();
    while (at_symbol("+")) {
      next();
      if (peek().kind != TokKind::UnivLit) fail("numeral after '+' in level");
      unsigned k = static_cast<unsigned>(std::stoul(next().canon));
      for (unsigned i = 0; i < k; ++i) l = Level::succ(l);
    }
    return l;
  }

  std::vector<Level> parse_level_args() {
    // caller consumed ".{"
    std::vector<Level> ls;
    while (!at_symbol("}")) ls.push_back(parse_level());
    expect_symbol("}");
    return ls;
  }

  // ---- binders ------------------------------------------------------------

  bool at_binder_open() const {
    return at_symbol("(") || at_symbol("{") || at_symbol("[");
  }

  // Parses one bracketed binder group, appending one SurfaceBinder per name.
  void parse_binder_group(std::vector<SurfaceBinder>& out) {
    Span start = peek().span;
    Binding vis = at_symbol("(")   ? Binding::Explicit
                  : at_symbol("{") ? Binding::Implicit
                                   : Binding::Inst;
    const char* close = vis == Binding::Explicit ? ")" : vis == Binding::Implicit ? "}" : "]";
    next();
    std::vector<Token> names;
    while (peek().kind == TokKind::Ident || at_symbol("_")) names.push_back(next());
    if (names.empty()) fail("binder name");
    STPtr type;
    if (at_symbol(":")) {
      next();
      type = parse_term_full();
    } else if (vis != Binding::Implicit) {
      fail("':' in binder");
    }
    expect_symbol(close);
    for (const auto& n : names)
      out.push_back(SurfaceBinder{n.canon == "_" ? "_" : n.canon, type, vis,
                                  span_from(start)});
  }

  // Lambda/Pi/Sigma binders also admit bare names (explicit, unannotated).
  std::vector<SurfaceBinder> parse_lambda_binders() {
    std::vector<SurfaceBinder> out;
    for (;;) {
      if (peek().kind == TokKind::Ident || at_symbol("_")) {
        Token t = next();
        out.push_back(SurfaceBinder{t.canon == "_" ? "_" : t.canon, nullptr,
                                    Binding::Explicit, t.span});
      } else if (at_binder_open()) {
        parse_binder_group(out);
      } else {
        break;
      }
    }
    if (out.empty()) fail("binder");
    check_distinct(out);
    return out;
  }

  void check_distinct(const std::vector<SurfaceBinder>& bs) {
    for (size_t i = 0; i < bs.size(); ++i)
      for (size_t j = i + 1; j < bs.size(); ++j)
        if (bs[i].name != "_" && bs[i].name == bs[j].name)
          throw Error(ErrorClass::Parse,
                      "duplicate binder name '" + bs[i].name + "' in telescope",
                      bs[j].span);
  }

  // ---- terms --------------------------------------------------------------

  STPtr parse_atom() {
    Span start = peek().span;
    if (at_symbol("(")) {
      next();
      STPtr t = parse_term_full();
      expect_symbol(")");
      return t;
    }
    if (at_symbol("_")) {
      next();
      return mk_shole(span_from(start));
    }
    if (at_keyword("Type")) {
      next();
      if (at_symbol(".{")) {
        next();
        Level l = parse_level();
        expect_symbol("}");
        return mk_ssort(span_from(start), l, true);
      }
      return mk_ssort(span_from(start));
    }
    if (at_symbol("@")) {
      next();
      Token name = expect_ident();
      std::vector<Level> levels;
      if (at_symbol(".{")) {
        next();
        levels = parse_level_args();
      }
      std::vector<STPtr> args;
      while (at_atom_start()) args.push_back(parse_atom_postfix());
      return mk_sexplicit(name.canon, std::move(levels), std::move(args),
                          span_from(start));
    }
    if (peek().kind == TokKind::Ident) {
      Token name = next();
      if (at_symbol(".{")) {
        next();
        std::vector<Level> levels = parse_level_args();
        return mk_svar(name.canon, span_from(start), std::move(levels), true);
      }
      return mk_svar(name.canon, span_from(start));
    }
    fail("term");
  }

  bool at_atom_start() const {
    return at_symbol("(") || at_symbol("_") || at_symbol("@") || at_keyword("Type") ||
           peek().kind == TokKind::Ident;
  }

  // atom with postfix inverses applied
  STPtr parse_atom_postfix() {
    STPtr t = parse_atom();
    while (at_symbol("⁻¹")) {
      Token op = next();
      t = mk_ssugar("inverse", {t}, Span{t->span.start, op.span.end, op.span.file_id});
    }
    return t;
  }

  STPtr parse_app() {
    Span start = peek().span;
    STPtr t = parse_atom_postfix();
    while (at_atom_start()) {
      STPtr arg = parse_atom_postfix();
      t = mk_sapp(t, arg, span_from(start));
    }
    return t;
  }

  const InfixOp* infix_at() const {
    if (peek().kind != TokKind::Symbol) return nullptr;
    for (const auto& op : kInfix)
      if (peek().canon == op.symbol) return &op;
    return nullptr;
  }

  STPtr parse_infix(int min_prec) {
    Span start = peek().span;
    STPtr lhs = parse_app();
    for (;;) {
      // x =[p] y : same precedence tier as `=`.
      if (at_symbol("=[") && 50 >= min_prec) {
        next();
        STPtr p = parse_term_full();
        expect_symbol("]");
        STPtr rhs = parse_infix(50 + 1);
        lhs = mk_ssugar("pathover", {lhs, p, rhs}, span_from(start));
        continue;
      }
      const InfixOp* op = infix_at();
      if (!op || op->prec < min_prec) break;
      next();
      STPtr rhs = parse_infix(op->right_assoc ? op->prec : op->prec + 1);
      lhs = mk_ssugar(op->sugar, {lhs, rhs}, span_from(start));
    }
    return lhs;
  }

  STPtr parse_term_full() {
    Span start = peek().span;
    if (at_symbol("λ")) {  // λ
      next();
      auto binders = parse_lambda_binders();
      expect_symbol(",");
      STPtr body = parse_term_full();
      for (size_t i = binders.size(); i-- > 0;)
        body = mk_slam(binders[i], body, span_from(start));
      return body;
    }
    if (at_symbol("Π")) {  // Π
      next();
      auto binders = parse_lambda_binders();
      expect_symbol(",");
      STPtr body = parse_term_full();
      for (size_t i = binders.size(); i-- > 0;)
        body = mk_spi(binders[i], body, span_from(start));
      return body;
    }
    if (at_symbol("Σ")) {  // Σ
      next();
      auto binders = parse_lambda_binders();
      expect_symbol(",");
      STPtr body = parse_term_full();
      for (size_t i = binders.size(); i-- > 0;) {
        STPtr lam = mk_slam(binders[i], body, span_from(start));
        body = mk_ssugar("sigma", {lam}, span_from(start));
      }
      return body;
    }
    STPtr t = parse_infix(0);
    if (at_symbol("→")) {  // →, right associative, lowest
      next();
      STPtr cod = parse_term_full();
      return mk_sarrow(t, cod, span_from(start));
    }
    return t;
  }

  // ---- declarations -------------------------------------------------------

  std::vector<Name> parse_univ_params() {
    std::vector<Name> us;
    if (at_symbol(".{")) {
      next();
      while (peek().kind == TokKind::Ident) us.push_back(next().canon);
      expect_symbol("}");
      if (us.empty()) fail("universe parameter name");
      for (size_t i = 0; i < us.size(); ++i)
        for (size_t j = i + 1; j < us.size(); ++j)
          if (us[i] == us[j])
            throw Error(ErrorClass::Parse, "duplicate universe parameter '" + us[i] + "'",
                        peek().span);
    }
    return us;
  }

  // `[class]` / `[instance]` / `[coercion]` immediately after the name.
  std::vector<Name> parse_inline_attrs() {
    std::vector<Name> attrs;
    while (at_symbol("[") &&
           (peek(1).canon == "class" || peek(1).canon == "instance" ||
            peek(1).canon == "coercion") &&
           peek(2).kind == TokKind::Symbol && peek(2).canon == "]") {
      next();
      attrs.push_back(next().canon);
      next();
    }
    return attrs;
  }

  SurfaceDecl parse_decl() {
    Span start = peek().span;
    SurfaceDecl d;
    d.span = start;

    if (peek().kind == TokKind::Directive) {
      Token dir = next();
      d.kind = DeclSyntaxKind::Directive;
      if (dir.canon == "#defeq") {
        d.directive = "defeq";
        // Two terms: the first is a single atom (parenthesize compounds), the
        // second extends to the end of the directive.
        d.dir_t = parse_atom_postfix();
        d.dir_u = parse_term_full();
      } else if (dir.canon == "#check") {
        d.directive = "check";
        d.dir_t = parse_infix(0);
        if (at_symbol("→")) fail("':' (the checked term binds above '->')");
        expect_symbol(":");
        d.dir_u = parse_term_full();
      } else if (dir.canon == "#print_axioms") {
        d.directive = "print_axioms";
        d.dir_name = expect_ident().canon;
      } else {
        d.directive = "normalize";
        d.dir_t = parse_term_full();
      }
      d.span = span_from(start);
      return d;
    }

    if (at_keyword("import")) {
      next();
      d.kind = DeclSyntaxKind::Import;
      if (peek().kind != TokKind::Ident) fail("module path");
      d.import_path = next().canon;
      d.span = span_from(start);
      return d;
    }

    if (at_keyword("hit")) {
      next();
      d.kind = DeclSyntaxKind::HitInit;
      if (!at_ident("quotient") && !at_ident("trunc")) fail("'quotient' or 'trunc'");
      d.hit_kind = next().canon;
      d.span = span_from(start);
      return d;
    }

    if (at_keyword("attribute")) {
      next();
      d.kind = DeclSyntaxKind::Attribute;
      d.name = expect_ident().canon;
      d.attributes = parse_inline_attrs();
      if (d.attributes.empty()) fail("attribute '[class]', '[instance]' or '[coercion]'");
      d.span = span_from(start);
      return d;
    }

    if (at_keyword("definition") || at_keyword("axiom")) {
      bool is_def = at_keyword("definition");
      next();
      d.kind = is_def ? DeclSyntaxKind::Definition : DeclSyntaxKind::Axiom;
      d.name = expect_ident().canon;
      d.univ_params = parse_univ_params();
      d.attributes = parse_inline_attrs();
      while (at_binder_open()) parse_binder_group(d.binders);
      check_distinct(d.binders);
      expect_symbol(":");
      d.type = parse_term_full();
      if (is_def) {
        expect_symbol(":=");
        d.value = parse_term_full();
      }
      d.span = span_from(start);
      return d;
    }

    if (at_keyword("inductive")) {
      next();
      d.kind = DeclSyntaxKind::Inductive;
      d.name = expect_ident().canon;
      d.univ_params = parse_univ_params();
      d.attributes = parse_inline_attrs();
      while (at_binder_open()) parse_binder_group(d.binders);
      check_distinct(d.binders);
      expect_symbol(":");
      d.type = parse_term_full();
      expect_symbol(":=");
      while (at_symbol("|")) {
        next();
        SurfaceCtor c;
        Span cstart = peek().span;
        c.name = expect_ident().canon;
        expect_symbol(":");
        c.type = parse_term_full();
        c.span = span_from(cstart);
        d.ctors.push_back(std::move(c));
      }
      d.span = span_from(start);
      return d;
    }

    fail("declaration");
  }
};

}  // namespace

std::vector<SurfaceDecl> parse_module(const std::vector<Token>& tokens) {
  Parser p{tokens};
  std::vector<SurfaceDecl> decls;
  while (p.peek().kind != TokKind::Eof) decls.push_back(p.parse_decl());
  return decls;
}

STPtr parse_term(const std::vector<Token>& tokens) {
  Parser p{tokens};
  STPtr t = p.parse_term_full();
  if (p.peek().kind != TokKind::Eof) p.fail("end of input");
  return t;
}

}  // namespace hott
