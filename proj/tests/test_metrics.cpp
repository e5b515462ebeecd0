#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "skic/lexer.hpp"
#include "skic/metrics.hpp"
#include "skic/printer.hpp"
#include "skic/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace skic {
namespace {

std::vector<std::string> lexemes(const TokenSeq& seq) {
  std::vector<std::string> out;
  for (const auto& t : seq.tokens) out.push_back(t.lexeme);
  return out;
}

TEST(Tokenize, Examples) {
  auto src = tokenize("\\x. #add x 1", Dialect::Source);
  EXPECT_EQ(src.length(), 6u);
  EXPECT_EQ(lexemes(src), (std::vector<std::string>{"\\", "x", ".", "#add", "x", "1"}));
  EXPECT_EQ(src.tokens[3].cls, TokenClass::Primitive);
  EXPECT_EQ(src.tokens[5].cls, TokenClass::Integer);

  auto g = tokenize("S (K I)", Dialect::Gael);
  EXPECT_EQ(g.length(), 5u);
  EXPECT_EQ(g.tokens[0].cls, TokenClass::Combinator);

  EXPECT_EQ(tokenize("", Dialect::Source).length(), 0u);
  EXPECT_EQ(tokenize("  -- only a comment\n", Dialect::Gael).length(), 0u);
}

TEST(Tokenize, Errors) {
  try {
    tokenize("x := #nope 1", Dialect::Source);
    FAIL();
  } catch (const LexicalError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(tokenize("\\x. x", Dialect::Gael), LexicalError);
  EXPECT_THROW(tokenize("Sx", Dialect::Gael), LexicalError);
  EXPECT_THROW(tokenize("x ? y", Dialect::Source), LexicalError);
}

TEST(Tokenize, IdempotentOnGeneratedPrograms) {
  testing::TypedTermGen gen(31);
  for (int i = 0; i < 200; ++i) {
    std::string text = pretty_print(*gen.program(static_cast<std::size_t>(i % 4), 5));
    auto first = tokenize(text, Dialect::Source);
    std::string joined;
    for (const auto& t : first.tokens) joined += t.lexeme + " ";
    auto second = tokenize(joined, Dialect::Source);
    ASSERT_EQ(first.length(), second.length());
    for (std::size_t k = 0; k < first.length(); ++k) {
      EXPECT_EQ(first.tokens[k].cls, second.tokens[k].cls);
      EXPECT_EQ(first.tokens[k].lexeme, second.tokens[k].lexeme);
    }
  }
}

TEST(CompressionRate, Algebra) {
  EXPECT_EQ(compression_rate(217, 1000), 0.783);
  EXPECT_EQ(compression_rate(40, 40), 0.0);
  EXPECT_EQ(compression_rate(80, 40), -1.0);
  EXPECT_EQ(compression_rate(0, 5), 1.0);
  EXPECT_THROW(compression_rate(3, 0), Error);
  for (std::size_t b = 1; b < 60; b += 7) {
    for (std::size_t a = 0; a < 130; a += 11) {
      EXPECT_TRUE(testing::is_rounded_quotient(compression_rate(a, b), static_cast<double>(b) - static_cast<double>(a),
                                               static_cast<double>(b)))
          << a << "/" << b;
      EXPECT_NEAR(compression_rate(a, b), 1.0 - static_cast<double>(a) / static_cast<double>(b), 1e-15);
    }
  }
}

TEST(SplitMix, KnownSequence) {
  // First outputs for seed 0 of the reference SplitMix64.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

// Goldens cross-checked against Python's zlib with the same raw stream settings.
TEST(ApproxKolmogorov, Goldens) {
  EXPECT_EQ(approx_kolmogorov(std::string(4096, 'a')), 22u);
  auto noise = prng_bytes(42, 4096);
  EXPECT_EQ(approx_kolmogorov(noise), 4101u);
  EXPECT_EQ(approx_kolmogorov(std::string("x")), 3u);
  EXPECT_THROW(approx_kolmogorov(std::string()), Error);
  EXPECT_EQ(approx_kolmogorov(noise), approx_kolmogorov(noise));
}

TEST(SymbolicDensity, Fixtures) {
  auto rep = symbolic_density(std::string(4096, 'a'));
  EXPECT_LE(rep.rho, 0.05);
  EXPECT_EQ(rep.byte_length, 4096u);

  auto noise = symbolic_density(prng_bytes(42, 4096));
  EXPECT_GE(noise.rho, 0.9);
  EXPECT_GE(noise.bound_slack, 0.0);
  EXPECT_DOUBLE_EQ(noise.c_constant, 16.0);
  EXPECT_DOUBLE_EQ(noise.bound_slack, 4101.0 - (4096.0 - 16.0 * 12.0));

  EXPECT_THROW(symbolic_density(std::string()), Error);
  EXPECT_THROW(symbolic_density(std::string("ab"), -1.0), Error);
}

TEST(SymbolicDensity, ReportIdentity) {
  SplitMix64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::string s(1 + rng.below(300), ' ');
    for (auto& ch : s) ch = static_cast<char>('a' + rng.below(1 + i % 26));
    auto rep = symbolic_density(s);
    EXPECT_DOUBLE_EQ(rep.rho * static_cast<double>(rep.byte_length), static_cast<double>(rep.k_approx));
    EXPECT_EQ(rep.k_approx, approx_kolmogorov(s));
  }
}

TEST(SymbolicDensity, SelfConcatenationOfRepetitivePatterns) {
  for (std::string unit : {"ab", "abc", "\\x. x", "S K K", "0123456789"}) {
    std::string data;
    while (data.size() < 2048) data += unit;
    EXPECT_LE(symbolic_density(data + data).rho, symbolic_density(data).rho + 0.02) << unit;
  }
}

}  // namespace
}  // namespace skic
