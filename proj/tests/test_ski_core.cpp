#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "skic/equivalence.hpp"
#include "skic/gael.hpp"
#include "skic/parser.hpp"
#include "skic/printer.hpp"
#include "support.hpp"

namespace skic {
namespace {

std::size_t app_nodes(const SkiTerm& t) {
  if (const auto* a = t.as<SkiApp>()) return 1 + app_nodes(*a->fun) + app_nodes(*a->arg);
  return 0;
}

TEST(SkiReduce, CombinatorLaws) {
  SkiPtr v = sfree("v");
  EXPECT_EQ(*ski_reduce(sapps(S(), {K(), K(), v})).term, *v);
  EXPECT_EQ(*ski_reduce(sapps(K(), {sfree("a"), sfree("b")})).term, *sfree("a"));
  EXPECT_EQ(*ski_reduce(sapp(I(), sint(7))).term, *sint(7));
  EXPECT_EQ(gael_print(*ski_reduce(sapps(S(), {sfree("x"), sfree("y"), sfree("z")})).term), "x z (y z)");
}

TEST(SkiReduce, DeltaAndStuckTerms) {
  EXPECT_EQ(gael_print(*ski_reduce(parse_gael("#add (I 2) (K 3 4)")).term), "5");
  EXPECT_EQ(gael_print(*ski_reduce(parse_gael("#if (#eq 1 1) (I 8) 9")).term), "8");
  EXPECT_EQ(gael_print(*ski_reduce(parse_gael("#add p (I 1)")).term), "#add p 1");
  EXPECT_EQ(gael_print(*ski_reduce(parse_gael("K (I 1)")).term), "K 1");
  EXPECT_THROW(ski_reduce(parse_gael("#mul 4611686018427387904 2")), EvalError);
}

TEST(SkiReduce, DivergenceExhaustsFuel) {
  auto r = ski_reduce(parse_gael("S I I (S I I)"), 1000);
  EXPECT_TRUE(r.exhausted);
  // Normal order discards the divergent argument.
  r = ski_reduce(parse_gael("K 1 (S I I (S I I))"), 1000);
  ASSERT_FALSE(r.exhausted);
  EXPECT_EQ(gael_print(*r.term), "1");
}

TEST(BracketAbstract, IdentityWithI) {
  EXPECT_EQ(*bracket_abstract(*parse_term("\\x. x"), RuleSet::WithI), *I());
  EXPECT_EQ(gael_print(*bracket_abstract(*parse_term("\\x. x"), RuleSet::Naive)), "S K K");
  EXPECT_EQ(*bracket_abstract(*parse_term("\\x. x"), RuleSet::EtaOptimized), *I());
}

TEST(BracketAbstract, ConstantFunctionEtaOptimized) {
  TermPtr src = parse_term("\\x.\\y. x");
  SkiPtr enc = bracket_abstract(*src, RuleSet::EtaOptimized);
  EXPECT_EQ(*enc, *K());
  // Probe oracle: every pair of probes gives the same normal form on both sides.
  for (const auto& probe : probe_tuples(ProbeConfig{}, 2)) {
    auto lhs = ski_reduce(sapps(enc, {sint(probe[0]), sint(probe[1])}));
    auto rhs = beta_reduce(apps(src, {int_lit(probe[0]), int_lit(probe[1])}));
    ASSERT_TRUE(lhs.term->is<IntLit>());
    EXPECT_EQ(lhs.term->as<IntLit>()->value, rhs.term->as<IntLit>()->value);
  }
}

TEST(BracketAbstract, EtaIsStrictlySmallerForCurriedPrimitive) {
  TermPtr src = parse_term("\\x.\\y. #add x y");
  SkiPtr naive = bracket_abstract(*src, RuleSet::Naive);
  SkiPtr eta = bracket_abstract(*src, RuleSet::EtaOptimized);
  EXPECT_EQ(gael_print(*eta), "#add");
  EXPECT_LT(app_nodes(*eta), app_nodes(*naive));
  EXPECT_EQ(behavioral_equal(src, naive).kind, Verdict::Kind::Equal);
  EXPECT_EQ(behavioral_equal(src, eta).kind, Verdict::Kind::Equal);
}

TEST(BracketAbstract, ShadowedBinders) {
  TermPtr src = parse_term("\\x.\\x. x");
  for (RuleSet r : kAllRuleSets) {
    EXPECT_EQ(behavioral_equal(src, bracket_abstract(*src, r)).kind, Verdict::Kind::Equal) << rule_set_name(r);
  }
}

TEST(BracketAbstract, OpenTermError) {
  try {
    bracket_abstract(*lam("x", var("y")), RuleSet::WithI);
    FAIL() << "expected OpenTermError";
  } catch (const OpenTermError& e) {
    EXPECT_EQ(e.name(), "y");
  }
  // Globals survive as symbols.
  SkiPtr s = bracket_abstract(*lam("x", app(var("g"), var("x"))), RuleSet::EtaOptimized, {"g"});
  EXPECT_EQ(gael_print(*s), "g");
}

TEST(BracketAbstract, EncodeVerifyProperty) {
  testing::TypedTermGen gen(2024);
  for (int i = 0; i < 150; ++i) {
    TermPtr t = gen.program(static_cast<std::size_t>(i % 4), 5);
    for (RuleSet r : kAllRuleSets) {
      SkiPtr s = bracket_abstract(*t, r);
      Verdict v = behavioral_equal(t, s);
      ASSERT_EQ(v.kind, Verdict::Kind::Equal) << rule_set_name(r) << " " << pretty_print(*t) << " => " << gael_print(*s);
    }
  }
}

TEST(BracketAbstract, SizeMonotoneAcrossRuleSets) {
  testing::UntypedTermGen gen(31337);
  for (int i = 0; i < 1000; ++i) {
    TermPtr t = gen.closed(7);
    auto naive = bracket_abstract(*t, RuleSet::Naive)->size();
    auto with_i = bracket_abstract(*t, RuleSet::WithI)->size();
    auto eta = bracket_abstract(*t, RuleSet::EtaOptimized)->size();
    EXPECT_LE(eta, with_i) << pretty_print(*t);
    EXPECT_LE(with_i, naive) << pretty_print(*t);
  }
}

TEST(SkiDecode, Definitions) {
  EXPECT_EQ(pretty_print(*ski_decode(*I())), "\\x. x");
  EXPECT_EQ(pretty_print(*ski_decode(*K())), "\\x.\\y. x");
  EXPECT_EQ(pretty_print(*ski_decode(*S())), "\\x.\\y.\\z. x z (y z)");
  TermPtr k5 = ski_decode(*sapp(K(), sint(5)));
  EXPECT_EQ(pretty_print(*k5), "(\\x.\\y. x) 5");
  EXPECT_TRUE(alpha_equivalent(*beta_reduce(k5).term, *parse_term("\\y. 5")));
}

TEST(SkiDecode, ConsistencyProperty) {
  testing::SkiTermGen gen(8, /*with_symbols=*/false);
  std::size_t equal = 0;
  std::size_t unknown = 0;
  for (int i = 0; i < 300; ++i) {
    SkiPtr s = gen.term(6);
    Verdict v = behavioral_equal(ski_decode(*s), s);
    ASSERT_NE(v.kind, Verdict::Kind::Different) << gael_print(*s);
    (v.kind == Verdict::Kind::Equal ? equal : unknown)++;
  }
  EXPECT_GT(equal, 280u);
}

TEST(BehavioralEqual, SkkIsI) {
  ProbeConfig cfg;
  cfg.values = {-3, -2, -1, 0, 1, 2, 3, 4};
  Verdict v = behavioral_equal(sapps(S(), {K(), K()}), I(), cfg);
  EXPECT_EQ(v.kind, Verdict::Kind::Equal);
  EXPECT_EQ(v.probes, 8u);
}

TEST(BehavioralEqual, KAndIDifferWithFirstWitness) {
  Verdict v = behavioral_equal(K(), I());
  ASSERT_EQ(v.kind, Verdict::Kind::Different);
  EXPECT_EQ(v.witness, (Probe{-2, -2}));
  ProbeConfig cfg;
  cfg.values = {0, 1};
  cfg.arity = 2;
  v = behavioral_equal(K(), I(), cfg);
  ASSERT_EQ(v.kind, Verdict::Kind::Different);
  EXPECT_EQ(v.witness, (Probe{0, 0}));
}

TEST(BehavioralEqual, UnknownOnDivergence) {
  SkiPtr omega = parse_gael("S I I (S I I)");
  Verdict v = behavioral_equal(omega, omega, ProbeConfig{}, ReduceOptions{500});
  EXPECT_EQ(v.kind, Verdict::Kind::Unknown);
  // A mismatch on a later probe still wins over earlier unknowns.
  TermPtr t = parse_term("\\x. #if (#eq x 0) ((\\y. y y)(\\y. y y)) x");
  v = behavioral_equal(t, I(), ProbeConfig{}, ReduceOptions{500});
  EXPECT_EQ(v.kind, Verdict::Kind::Unknown);
  TermPtr u = parse_term("\\x. #if (#eq x 0) ((\\y. y y)(\\y. y y)) 1");
  v = behavioral_equal(u, I(), ProbeConfig{}, ReduceOptions{500});
  ASSERT_EQ(v.kind, Verdict::Kind::Different);
  EXPECT_EQ(v.witness, Probe{-2});
}

TEST(BehavioralEqual, EtaVariantsAgree) {
  TermPtr t = parse_term("\\x. (\\y.\\z. #add y z) x");
  for (RuleSet r : kAllRuleSets) {
    EXPECT_EQ(behavioral_equal(t, bracket_abstract(*t, r)).kind, Verdict::Kind::Equal);
  }
}

TEST(BehavioralEqual, ZeroProbesIsVacuouslyEqual) {
  ProbeConfig cfg;
  cfg.max_tuples = 0;
  Verdict v = behavioral_equal(K(), I(), cfg);
  EXPECT_EQ(v.kind, Verdict::Kind::Equal);
  EXPECT_EQ(v.probes, 0u);
}

TEST(ProbeTuples, CapSamplesAcrossTheProduct) {
  ProbeConfig cfg;
  EXPECT_EQ(probe_tuples(cfg, 3).size(), 216u);
  EXPECT_EQ(probe_tuples(cfg, 0).size(), 1u);
  auto four = probe_tuples(cfg, 4);
  ASSERT_EQ(four.size(), 216u);
  EXPECT_EQ(four.front(), (Probe{-2, -2, -2, -2}));
  std::set<std::int64_t> leading;
  for (const auto& p : four) leading.insert(p[0]);
  EXPECT_EQ(leading.size(), 6u);
}

TEST(Gael, PrintParseRoundTripProperty) {
  testing::SkiTermGen gen(55);
  for (int i = 0; i < 300; ++i) {
    SkiPtr s = gen.term(7);
    std::string text = gael_print(*s);
    EXPECT_EQ(*parse_gael(text), *s) << text;
  }
  EXPECT_EQ(gael_print(*sapps(S(), {K(), K()})), "S K K");
  EXPECT_EQ(gael_print(*sapp(S(), sapp(K(), I()))), "S (K I)");
  EXPECT_THROW(parse_gael("S (K"), SyntaxError);
  EXPECT_THROW(parse_gael("\\x. x"), LexicalError);
}

TEST(Gael, AddFixtureActualBehavior) {
  std::ifstream in(std::string(SKIC_SOURCE_DIR) + "/tests/fixtures/sii_add.gael");
  std::stringstream buf;
  buf << in.rdbuf();
  GaelProgram p = parse_gael_program(buf.str());
  ASSERT_EQ(p.defs.size(), 1u);
  EXPECT_EQ(gael_print(*p.defs[0].body), "S I (S K I)");
  auto r = ski_reduce(inline_main(p));
  ASSERT_FALSE(r.exhausted);
  EXPECT_EQ(gael_print(*r.term), "2 2 3");
  // It is not two-argument addition.
  EXPECT_EQ(behavioral_equal(p.defs[0].body, sprim(PrimOp::Add), ProbeConfig{{1, 2}, 2, 216}).kind,
            Verdict::Kind::Different);
}

}  // namespace
}  // namespace skic
