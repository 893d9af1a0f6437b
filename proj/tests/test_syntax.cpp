#include "doctest.h"

#include "hott/parser.hpp"
#include "hott/surface.hpp"
#include "hott/token.hpp"

using namespace hott;

namespace {
std::vector<std::string> token_texts(const std::string& src) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(src))
    if (t.kind != TokKind::Eof) out.push_back(t.canon);
  return out;
}
}  // namespace

TEST_CASE("tokenize examples") {
  // "λ(x : A), x" -> [λ, (, x, :, A, ), `,`, x]
  auto ts = token_texts("λ(x : A), x");
  CHECK(ts == std::vector<std::string>{"λ", "(", "x", ":", "A", ")", ",", "x"});

  // "Type.{u + 1}" -> [Type, .{, u, +, 1, }]
  ts = token_texts("Type.{u + 1}");
  CHECK(ts == std::vector<std::string>{"Type", ".{", "u", "+", "1", "}"});

  // comments are skipped
  ts = token_texts("-- comment\nnat");
  CHECK(ts == std::vector<std::string>{"nat"});
  ts = token_texts("/- block /- nested -/ -/ nat");
  CHECK(ts == std::vector<std::string>{"nat"});
}

TEST_CASE("ascii alternatives normalize but keep source text") {
  auto toks = tokenize("A -> B");
  CHECK(toks[1].text == "->");
  CHECK(toks[1].canon == "→");

  CHECK(token_texts("p \\. q") == std::vector<std::string>{"p", "⬝", "q"});
  CHECK(token_texts("p-1") == std::vector<std::string>{"p", "⁻¹"});
  CHECK(token_texts("p⁻¹") == std::vector<std::string>{"p", "⁻¹"});
  CHECK(token_texts("\\Pi \\Sigma \\lam") ==
        std::vector<std::string>{"Π", "Σ", "λ"});
  CHECK(token_texts("A ~= B") == std::vector<std::string>{"A", "≃", "B"});
  CHECK(token_texts("p |> x") == std::vector<std::string>{"p", "▸", "x"});
}

TEST_CASE("token spans are monotone, non-overlapping and text-faithful") {
  std::string src =
      "definition id {A : Type} (a : A) : A := a\n"
      "-- note\n"
      "inductive path {A : Type} (R : A -> A -> Type) : A -> A -> Type :=\n"
      "| of_rel : Π{a a' : A}, R a a' -> path R a a'\n";
  auto toks = tokenize(src);
  uint32_t prev_end = 0;
  for (const auto& t : toks) {
    if (t.kind == TokKind::Eof) break;
    CHECK(src.substr(t.span.start, t.span.end - t.span.start) == t.text);
    CHECK(t.span.start >= prev_end);
    prev_end = t.span.end;
  }
}

TEST_CASE("lex errors carry spans") {
  CHECK_THROWS_AS((void)tokenize("/- unterminated"), Error);
  CHECK_THROWS_AS((void)tokenize("a $ b"), Error);
  try {
    (void)tokenize("abc $ b");
  } catch (const Error& e) {
    CHECK(e.cls == ErrorClass::Lex);
    CHECK(e.span.start == 4);
    CHECK(e.span.end <= 7);
  }
}

TEST_CASE("parse a minimal definition") {
  auto decls = parse_module(tokenize("definition id {A : Type} (a : A) : A := a"));
  REQUIRE(decls.size() == 1);
  const SurfaceDecl& d = decls[0];
  CHECK(d.kind == DeclSyntaxKind::Definition);
  CHECK(d.name == "id");
  REQUIRE(d.binders.size() == 2);
  CHECK(d.binders[0].vis == Binding::Implicit);
  CHECK(d.binders[0].name == "A");
  CHECK(d.binders[1].vis == Binding::Explicit);
  CHECK(d.binders[1].name == "a");
}

TEST_CASE("parse the add.assoc block with mixed binders") {
  auto decls = parse_module(tokenize(
      "definition add.assoc {A : Type} [s : add_semigroup A] (a b c : A) : "
      "(a + b) + c = a + (b + c) := @mul.assoc A s a b c"));
  REQUIRE(decls.size() == 1);
  const SurfaceDecl& d = decls[0];
  REQUIRE(d.binders.size() == 5);
  CHECK(d.binders[0].vis == Binding::Implicit);
  CHECK(d.binders[1].vis == Binding::Inst);
  CHECK(d.binders[2].vis == Binding::Explicit);
  CHECK(d.binders[3].vis == Binding::Explicit);
  CHECK(d.binders[4].vis == Binding::Explicit);
  CHECK(d.value->kind == SurfKind::ExplicitApp);
  CHECK(d.value->args.size() == 5);
}

TEST_CASE("parse an inductive family with constructors") {
  auto decls = parse_module(tokenize(R"(
inductive path {A : Type} (R : A -> A -> Type) : A -> A -> Type :=
| of_rel : Π{a a' : A}, R a a' -> path R a a'
| of_path : Π{a a' : A}, a = a' -> path R a a'
| symm : Π{a a' : A}, path R a a' -> path R a' a
| trans : Π{a a' a'' : A}, path R a a' -> path R a' a'' -> path R a a''
)"));
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].ctors.size() == 4);
  CHECK(decls[0].ctors[0].name == "of_rel");
  CHECK(decls[0].ctors[3].name == "trans");
}

TEST_CASE("parse errors report span and expectation") {
  try {
    (void)parse_module(tokenize("definition := x"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.cls == ErrorClass::Parse);
    CHECK(std::string(e.what()).find("expected") != std::string::npos);
  }
  CHECK_THROWS_AS(
      (void)parse_module(tokenize("definition f (a a : A) : A := a")), Error);
}

TEST_CASE("desugar: fixed notation table") {
  auto d1 = desugar(parse_term(tokenize("a1 = a2")));
  auto expect1 = parse_term(tokenize("eq a1 a2"));
  CHECK(surface_eq(d1, desugar(expect1)));

  // Σ (A : Type) (a : A), a = a  ->  sigma (λ A, sigma (λ a, eq a a))
  auto d2 = desugar(parse_term(tokenize("Σ (A : Type) (a : A), a = a")));
  auto expect2 = desugar(parse_term(
      tokenize("sigma (λ(A : Type), sigma (λ(a : A), eq a a))")));
  CHECK(surface_eq(d2, expect2));

  // A -> B  ->  Π(_ : A), B
  auto d3 = desugar(parse_term(tokenize("A -> B")));
  CHECK(d3->kind == SurfKind::Pi);
  CHECK(d3->binder.name == "_");

  // the rest of the table
  CHECK(surface_eq(desugar(parse_term(tokenize("p ⬝ q"))),
                   desugar(parse_term(tokenize("concat p q")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("p⁻¹"))),
                   desugar(parse_term(tokenize("inverse p")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("x =[p] y"))),
                   desugar(parse_term(tokenize("pathover _ x p y")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("p |> x"))),
                   desugar(parse_term(tokenize("transport _ p x")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("f ∘ g"))),
                   desugar(parse_term(tokenize("compose f g")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("A ~= B"))),
                   desugar(parse_term(tokenize("equiv A B")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("A × B"))),
                   desugar(parse_term(tokenize("prod A B")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("a * b"))),
                   desugar(parse_term(tokenize("mul a b")))));
  CHECK(surface_eq(desugar(parse_term(tokenize("a + b"))),
                   desugar(parse_term(tokenize("add a b")))));
}

TEST_CASE("desugar is idempotent") {
  const char* samples[] = {
      "a = b",
      "Σ (A : Type) (a : A), a = a",
      "p ⬝ q⁻¹ |> x",
      "A -> B -> A × B",
      "Π(f : A -> B), f ∘ g = h",
  };
  for (const char* s : samples) {
    auto once = desugar(parse_term(tokenize(s)));
    auto twice = desugar(once);
    CHECK(surface_eq(once, twice));
  }
}

TEST_CASE("precedence: application tightest; path operators associate as fixed") {
  // a ⬝ b ⬝ c parses left-associated: (a ⬝ b) ⬝ c
  auto t = parse_term(tokenize("a ⬝ b ⬝ c"));
  REQUIRE(t->kind == SurfKind::Sugar);
  CHECK(t->name == "concat");
  CHECK(t->args[0]->kind == SurfKind::Sugar);
  CHECK(t->args[0]->name == "concat");

  // f x = g y applies before comparing
  auto e = parse_term(tokenize("f x = g y"));
  REQUIRE(e->name == "eq");
  CHECK(e->args[0]->kind == SurfKind::App);

  // ▸ is right-associative
  auto r = parse_term(tokenize("p |> q |> x"));
  REQUIRE(r->name == "transport");
  CHECK(r->args[1]->kind == SurfKind::Sugar);

  // ⁻¹ binds tighter than ⬝
  auto i = parse_term(tokenize("p ⬝ q⁻¹"));
  REQUIRE(i->name == "concat");
  CHECK(i->args[1]->name == "inverse");
}

TEST_CASE("print/parse idempotence on surface trees") {
  const char* samples[] = {
      "definition id {A : Type} (a : A) : A := a",
      "axiom fx.{u v} : Π(A : Type.{u}), Type.{v}",
      "definition k {A : Type} [s : cls A] (a b : A) : a = b -> b = a := "
      "λ(p : a = b), p⁻¹",
      "inductive box (A : Type) : Type := | box.mk : A -> box A",
      "definition s : Type := Σ (A : Type), A × A",
      "#defeq (f x) (g y)",
      "#check (λ(x : A), x) : A -> A",
      "#print_axioms foo",
      "#normalize concat p q",
      "hit quotient",
      "attribute foo [class]",
      "definition tr2 {A : Type} (x y : A) (p : x = y) (q : y = x) : x = x := "
      "p ⬝ q ⬝ p ⬝ q⁻¹ ⬝ q⁻¹",
  };
  for (const char* s : samples) {
    auto d1 = parse_module(tokenize(s));
    REQUIRE(d1.size() == 1);
    std::string printed = surface_decl_to_string(d1[0]);
    CAPTURE(printed);
    auto d2 = parse_module(tokenize(printed));
    REQUIRE(d2.size() == 1);
    CHECK(surface_decl_eq(d1[0], d2[0]));
  }
}

TEST_CASE("every error span lies within the source bounds") {
  const char* bad_sources[] = {
      "definition f : A :=",
      "inductive x : Type",
      "definition g (a : ) : A := a",
      "λ x",
  };
  for (const char* s : bad_sources) {
    try {
      (void)parse_module(tokenize(s));
    } catch (const Error& e) {
      CHECK(e.span.start <= std::string(s).size());
      CHECK(e.span.end <= std::string(s).size());
    }
  }
}
