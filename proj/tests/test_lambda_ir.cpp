#include <gtest/gtest.h>

#include "skic/eval.hpp"
#include "skic/parser.hpp"
#include "skic/printer.hpp"
#include "support.hpp"

namespace skic {
namespace {

TEST(ParseProgram, Identity) {
  TermPtr t = parse_term("\\x. x");
  ASSERT_TRUE(t->is<Lam>());
  EXPECT_EQ(t->as<Lam>()->param, "x");
  EXPECT_EQ(t->as<Lam>()->body->as<Var>()->name, "x");
}

TEST(ParseProgram, DefinitionAndMain) {
  Program p = parse_program("add := \\x.\\y. #add x y; add 2 3");
  ASSERT_EQ(p.defs.size(), 1u);
  EXPECT_EQ(p.defs[0].name, "add");
  ASSERT_TRUE(p.main);
  EXPECT_TRUE(alpha_equivalent(*p.main, *apps(var("add"), {int_lit(2), int_lit(3)})));
}

TEST(ParseProgram, MultiBinderSugar) {
  EXPECT_TRUE(alpha_equivalent(*parse_term("\\x y. x"), *parse_term("\\a.\\b. a")));
}

TEST(ParseProgram, CommentsAndBooleans) {
  Program p = parse_program("-- leading comment\nf := \\b. #if b 1 -1; -- trailing\nf true");
  ASSERT_EQ(p.defs.size(), 1u);
  EXPECT_EQ(pretty_print(*p.defs[0].body), "\\b. #if b 1 -1");
}

TEST(ParseProgram, UnboundIdentifier) {
  try {
    parse_program("\\x. y");
    FAIL() << "expected UnboundIdentifier";
  } catch (const UnboundIdentifier& e) {
    EXPECT_EQ(e.name(), "y");
  }
}

TEST(ParseProgram, ForwardAndSelfReferenceAreUnbound) {
  EXPECT_THROW(parse_program("f := \\x. f x; f 1"), UnboundIdentifier);
  EXPECT_THROW(parse_program("f := \\x. g x; g := \\x. x;"), UnboundIdentifier);
}

TEST(ParseProgram, DuplicateDefinition) {
  EXPECT_THROW(parse_program("f := 1; f := 2;"), DuplicateDefinition);
}

TEST(ParseProgram, SyntaxErrorCarriesPosition) {
  try {
    parse_program("f := \\x. x;\n  g := (f");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_program("\\. x"), SyntaxError);
  EXPECT_THROW(parse_program("(1"), SyntaxError);
  EXPECT_THROW(parse_program("f := 1"), SyntaxError);
  EXPECT_THROW(parse_program("#nope 1"), LexicalError);
  EXPECT_THROW(parse_program("99999999999999999999"), SyntaxError);
}

TEST(PrettyPrint, CanonicalForms) {
  EXPECT_EQ(pretty_print(*lam("x", var("x"))), "\\x. x");
  EXPECT_EQ(pretty_print(*apps(prim(PrimOp::Add), {int_lit(1), int_lit(2)})), "#add 1 2");
  TermPtr f = lam("f", lam("a", lam("b", apps(var("f"), {var("a"), var("b")}))));
  EXPECT_EQ(pretty_print(*f), "\\f.\\a.\\b. f a b");
  EXPECT_EQ(pretty_print(*app(var("f"), app(var("g"), var("x")))), "f (g x)");
  EXPECT_EQ(pretty_print(*app(lam("x", var("x")), int_lit(-5))), "(\\x. x) -5");
  EXPECT_EQ(pretty_print(*app(var("f"), lam("x", var("x")))), "f (\\x. x)");
}

TEST(PrettyPrint, ParseRoundTripProperty) {
  testing::UntypedTermGen gen(1234);
  for (int i = 0; i < 500; ++i) {
    TermPtr t = gen.closed(6);
    std::string text = pretty_print(*t);
    TermPtr back = parse_term(text);
    ASSERT_TRUE(alpha_equivalent(*t, *back)) << text;
    EXPECT_EQ(pretty_print(*back), text);
  }
}

TEST(PrettyPrint, ProgramRoundTrip) {
  const char* src = "one := 1;\ninc := \\x. #add x one;\ninc (inc 3)\n";
  Program p = parse_program(src);
  EXPECT_EQ(pretty_print(p), src);
}

TEST(AlphaEquivalent, Examples) {
  EXPECT_TRUE(alpha_equivalent(*parse_term("\\x. x"), *parse_term("\\y. y")));
  EXPECT_FALSE(alpha_equivalent(*parse_term("\\x.\\y. x"), *parse_term("\\x.\\y. y")));
  EXPECT_FALSE(alpha_equivalent(*var("a"), *var("b")));
  EXPECT_FALSE(alpha_equivalent(*lam("x", var("y")), *lam("y", var("y"))));
  testing::UntypedTermGen gen(99);
  for (int i = 0; i < 100; ++i) {
    TermPtr t = gen.closed(5);
    EXPECT_TRUE(alpha_equivalent(*t, *t));
  }
}

TEST(BetaReduce, Examples) {
  auto r = beta_reduce(parse_term("(\\x. x) 5"));
  ASSERT_FALSE(r.exhausted);
  EXPECT_TRUE(alpha_equivalent(*r.term, *int_lit(5)));

  r = beta_reduce(parse_term("(\\x.\\y. #add x y) 2 3"));
  ASSERT_FALSE(r.exhausted);
  EXPECT_TRUE(alpha_equivalent(*r.term, *int_lit(5)));

  r = beta_reduce(parse_term("(\\x. x x)(\\x. x x)"), 1000);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.steps, 1000u);
}

TEST(BetaReduce, DeltaRules) {
  auto nf = [](const char* src) { return pretty_print(*beta_reduce(parse_term(src)).term); };
  EXPECT_EQ(nf("#sub 2 5"), "-3");
  EXPECT_EQ(nf("#mul -4 5"), "-20");
  EXPECT_EQ(nf("#eq 3 3"), "true");
  EXPECT_EQ(nf("#eq true false"), "false");
  EXPECT_EQ(nf("#eq 1 true"), "#eq 1 true");
  EXPECT_EQ(nf("#if true 1 2"), "1");
  EXPECT_EQ(nf("#if (#eq 1 2) 1 2"), "2");
  EXPECT_EQ(nf("#addZ 2 3"), "5");
  EXPECT_EQ(nf("#addR 2 3"), "5");
  EXPECT_EQ(nf("#if 0 1 2"), "#if 0 1 2");
  EXPECT_EQ(nf("\\x. #add x ((\\y. y) 1)"), "\\x. #add x 1");
  EXPECT_EQ(nf("#add 1"), "#add 1");
}

TEST(BetaReduce, NormalOrderFindsNormalFormDespiteDivergentArgument) {
  auto r = beta_reduce(parse_term("(\\x.\\y. y) ((\\x. x x)(\\x. x x)) 7"));
  ASSERT_FALSE(r.exhausted);
  EXPECT_EQ(pretty_print(*r.term), "7");
  // #if only forces its condition.
  r = beta_reduce(parse_term("#if true 1 ((\\x. x x)(\\x. x x))"));
  ASSERT_FALSE(r.exhausted);
  EXPECT_EQ(pretty_print(*r.term), "1");
}

TEST(BetaReduce, CaptureAvoidance) {
  // (\x.\y. x) y  must not capture the free y.
  TermPtr t = app(lam("x", lam("y", var("x"))), var("y"));
  auto r = beta_reduce(t);
  ASSERT_TRUE(r.term->is<Lam>());
  EXPECT_NE(r.term->as<Lam>()->param, "y");
  EXPECT_TRUE(alpha_equivalent(*r.term, *lam("z", var("y"))));
  // Renamed binders stay valid identifiers.
  EXPECT_NO_THROW(parse_program("y := 1;" + pretty_print(*r.term)));
}

TEST(BetaReduce, OverflowIsAnEvaluationError) {
  EXPECT_THROW(beta_reduce(parse_term("#add 9223372036854775807 1")), EvalError);
  EXPECT_THROW(beta_reduce(parse_term("#mul 4611686018427387904 2")), EvalError);
  EXPECT_THROW(beta_reduce(parse_term("#sub -9223372036854775807 2")), EvalError);
}

TEST(BetaReduce, ZeroFuel) {
  EXPECT_FALSE(beta_reduce(int_lit(3), 0).exhausted);
  EXPECT_TRUE(beta_reduce(parse_term("(\\x. x) 1"), 0).exhausted);
}

TEST(BetaReduce, NormalFormsHaveNoRedexProperty) {
  testing::UntypedTermGen gen(77);
  int normalized = 0;
  for (int i = 0; i < 400; ++i) {
    TermPtr t = gen.closed(6);
    try {
      auto r = beta_reduce(t, 2000);
      if (r.exhausted) continue;
      ++normalized;
      EXPECT_FALSE(has_redex(*r.term)) << pretty_print(*t) << " -> " << pretty_print(*r.term);
      // Normal forms are fixed points.
      auto again = beta_reduce(r.term, 2000);
      EXPECT_EQ(again.steps, 0u);
    } catch (const EvalError&) {
    }
  }
  EXPECT_GT(normalized, 300);
}

TEST(BetaReduce, Deterministic) {
  testing::TypedTermGen gen(5);
  for (int i = 0; i < 50; ++i) {
    TermPtr t = gen.program(2, 5);
    EXPECT_EQ(pretty_print(*beta_reduce(t).term), pretty_print(*beta_reduce(t).term));
  }
}

TEST(Program, InlineMainClosesTerm) {
  Program p = parse_program("one := 1; two := #add one one; \\x. #add x two");
  TermPtr m = inline_main(p);
  EXPECT_TRUE(free_vars(*m).empty());
  EXPECT_EQ(pretty_print(*beta_reduce(app(m, int_lit(3))).term), "5");
}

TEST(Program, InliningRespectsShadowing) {
  Program p = parse_program("f := 10; \\f. f");
  EXPECT_EQ(pretty_print(*inline_main(p)), "\\f. f");
}

}  // namespace
}  // namespace skic
