#include <gtest/gtest.h>

#include <random>

#include "apseq/analysis.hpp"
#include "apseq/generators.hpp"
#include "oracles.hpp"

using namespace apseq;

namespace {

const Alphabet kBin = Alphabet::binary();
Word W(std::string_view s) { return Word::parse(kBin, s); }

std::string str(const Sequence& x, Length n) { return prefix(x, n).str(); }

}  // namespace

TEST(Periodic, PrefixesAndBounds) {
  EXPECT_EQ(str(periodic(W("01")), 6), "010101");
  EXPECT_EQ(str(eventually_periodic(W("1"), W("0")), 5), "10000");
  auto p = periodic(W("01"));
  ASSERT_TRUE(p.certified_bound());
  EXPECT_EQ((*p.certified_bound())(1), 2u);
  EXPECT_EQ((*p.certified_bound())(2), 3u);
  EXPECT_TRUE(p.info().almost_periodic);
  EXPECT_EQ(p.info().period, 2u);
  EXPECT_THROW(periodic(Word(kBin)), InvalidArgument);
}

TEST(ThueMorse, PrintedPrefixAndDefinitions) {
  EXPECT_EQ(str(thue_morse(), 32), "01101001100101101001011001101001");
  EXPECT_EQ(thue_morse(ThueMorseDefinition::digit_sum).at(5), 0);
  const auto ref = oracle::thue_morse(100000);
  for (auto d : {ThueMorseDefinition::recurrence, ThueMorseDefinition::digit_sum, ThueMorseDefinition::morphic})
    EXPECT_EQ(str(thue_morse(d), 100000), ref);
}

TEST(ThueMorse, ShippedBoundValues) {
  const auto f = *thue_morse().certified_bound();
  // f(1) = 3; f(n) = 10·2^ceil(log2(n-1)) - 1 for n >= 2.
  const std::vector<Length> expected{3, 9, 19, 39, 39, 79, 79, 79, 79};
  for (std::size_t n = 1; n <= expected.size(); ++n) EXPECT_EQ(f(n), expected[n - 1]) << n;
}

TEST(Mechanical, Examples) {
  EXPECT_EQ(str(mechanical(inverse_golden_squared(), inverse_golden_squared()), 21), "010010100100101001010");
  EXPECT_EQ(str(mechanical(Rational(0), Rational(0)), 5), "00000");
  EXPECT_EQ(str(mechanical(Rational(1, 2), Rational(0)), 6), "010101");
  EXPECT_FALSE(mechanical(Rational(1, 2), Rational(0)).certified_bound());
}

TEST(Mechanical, UpperVariantDiffersOnlyAtTies) {
  auto lo = mechanical(Rational(1, 3), Rational(0), MechanicalVariant::lower);
  auto hi = mechanical(Rational(1, 3), Rational(0), MechanicalVariant::upper);
  // floor vs ceil of n/3: lower = 001001..., upper = 100100...
  EXPECT_EQ(str(lo, 6), "001001");
  EXPECT_EQ(str(hi, 6), "100100");
}

TEST(Fibonacci, PrefixAndAgreement) {
  auto fib = fibonacci();
  EXPECT_EQ(str(fib, 21), "010010100100101001010");
  EXPECT_EQ(subword_complexity(fib, 1, 10000).count, 2u);
  EXPECT_EQ(str(fib, 10000), oracle::fibonacci(10000));
  EXPECT_FALSE(agreement_length(fib, mechanical(inverse_golden_squared(), inverse_golden_squared()), 10000));
}

TEST(Fibonacci, BoundDominatesMeasuredRegulator) {
  auto fib = fibonacci();
  ASSERT_TRUE(fib.certified_bound());
  for (std::size_t n = 1; n <= 8; ++n)
    EXPECT_LE(empirical_regulator(fib, n, 200000).value, (*fib.certified_bound())(n)) << n;
  const auto s = prefix(fib, 3000).str();
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(empirical_regulator(fib, n, 3000).value, oracle::regulator(s, n).value) << n;
}

TEST(Morphic, Examples) {
  EXPECT_EQ(str(morphic(Morphism::endo(kBin, {"01", "10"}), 0), 16), "0110100110010110");
  EXPECT_EQ(str(morphic(Morphism::endo(kBin, {"01", "0"}), 0), 8), "01001010");
  auto a = Alphabet::from_chars("a");
  // a -> a never grows past the seed.
  EXPECT_THROW(morphic(Morphism::endo(a, {"a"}), 0), ImageCollapse);
  EXPECT_EQ(str(morphic(Morphism::endo(a, {"aa"}), 0), 4), "aaaa");
}

TEST(Morphic, AgreesWithIterationOracle) {
  auto abc = Alphabet::from_chars("abc");
  auto x = morphic(Morphism::endo(abc, {"abc", "ac", "b"}), 0);
  EXPECT_EQ(str(x, 5000), oracle::iterate_morphism({{'a', "abc"}, {'b', "ac"}, {'c', "b"}}, 'a', 5000));
}

TEST(Morphic, CodingAndErasing) {
  auto abc = Alphabet::from_chars("abc");
  Morphism coding(abc, kBin, {W("0"), W("1"), W("1")});
  auto x = morphic(Morphism::endo(abc, {"abc", "ac", "b"}), 0, coding);
  EXPECT_EQ(str(x, 8), "01101101");
  // b is mortal; a -> ab keeps growing through a.
  auto ab = Alphabet::from_chars("ab");
  auto e = morphic(Morphism(ab, ab, {Word::parse(ab, "aab"), Word(ab)}, true), 0);
  EXPECT_EQ(str(e, 7), "aabaaba");
  EXPECT_THROW(morphic(Morphism(ab, ab, {Word::parse(ab, "ab"), Word(ab)}, true), 0), ImageCollapse);
}

TEST(Automatic, Examples) {
  DFAO tm(2, {{0, 1}, {1, 0}}, {0, 1}, kBin);
  EXPECT_EQ(str(automatic(tm), 32), "01101001100101101001011001101001");
  // 1 exactly at the powers of two.
  DFAO pow2(2, {{0, 1}, {1, 2}, {2, 2}}, {0, 1, 0}, kBin);
  EXPECT_EQ(str(automatic(pow2), 16), "0110100010000000");
  DFAO c(3, {{0, 0, 0}}, {1}, kBin);
  EXPECT_EQ(str(automatic(c), 6), "111111");
}

TEST(BlockProduct, WordAlgebra) {
  EXPECT_EQ(block_product_word(W("01"), W("01")).str(), "0110");
  EXPECT_TRUE(block_product_word(W("001"), Word(kBin)).empty());
  std::mt19937_64 rng(3);
  auto rnd = [&](bool lead0) {
    std::string s = lead0 ? "0" : "";
    const std::size_t n = rng() % 8 + (lead0 ? 0 : 1);
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % 2);
    return W(s);
  };
  for (int t = 0; t < 40; ++t) {
    auto u = rnd(true), v = rnd(true), w = rnd(true);
    EXPECT_EQ(block_product_word(u, v + w), block_product_word(u, v) + block_product_word(u, w));
    EXPECT_EQ(block_product_word(u, block_product_word(v, w)), block_product_word(block_product_word(u, v), w));
  }
}

TEST(BlockProduct, KeaneAndAlternatingExample) {
  EXPECT_EQ(str(keane(), 25), "0010011100010011101101100");
  auto alt = alternating_prefix_example();
  auto direct = block_product_seq([](std::size_t k) { return Word::parse(Alphabet::binary(), k == 0 ? "001" : "0111"); });
  EXPECT_FALSE(agreement_length(alt, direct, 10000));
  Word u = W("001");
  for (int m = 0; m <= 6; ++m) {
    const long long imbalance = static_cast<long long>(u.count(0)) - static_cast<long long>(u.count(1));
    EXPECT_EQ(imbalance, (m % 2 ? -1 : 1) * (1LL << m)) << m;
    u = block_product_word(u, W("0111"));
  }
}

TEST(BlockProduct, ShippedBoundDominatesRegulator) {
  for (auto x : {keane(), alternating_prefix_example(), block_product_seq({W("01")}, W("011"))}) {
    ASSERT_TRUE(x.certified_bound()) << x.provenance();
    for (std::size_t n = 1; n <= 6; ++n)
      EXPECT_LE(empirical_regulator(x, n, 300000).value, (*x.certified_bound())(n)) << x.provenance() << " n=" << n;
  }
}

TEST(Toeplitz, Examples) {
  EXPECT_EQ(str(toeplitz(ToeplitzPattern::parse("1□0□")), 32), "11011001110010011101100011001001");
  EXPECT_EQ(str(toeplitz(ToeplitzPattern::parse("1?0?")), 32), "11011001110010011101100011001001");
  // 1? : T^0 = 1?1?..., each fill writes the pattern stream itself, so every hole becomes 1.
  EXPECT_EQ(str(toeplitz(ToeplitzPattern::parse("1?")), 8), "11111111");
  EXPECT_THROW(ToeplitzPattern::parse("10"), InvalidArgument);
  EXPECT_THROW(ToeplitzPattern::parse("??"), InvalidArgument);
}

namespace {

/// Reference construction: x = lim T^d where holes of the pattern stream are
/// filled, in order, by the stream of the previous level.
std::string toeplitz_reference(const std::string& p, std::size_t n) {
  std::string base;
  for (std::size_t i = 0; i < n; ++i) base += p[i % p.size()];
  std::string x = base;
  for (int round = 0; round < 40; ++round) {
    std::string next = base;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (next[i] == '?') next[i] = x[k++];
    x = next;
  }
  return x;
}

}  // namespace

TEST(Toeplitz, ClosedFormMatchesIterativeFilling) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    std::string p = "1";
    const std::size_t len = rng() % 5 + 2;
    for (std::size_t i = 1; i < len; ++i) p += "01?"[rng() % 3];
    if (p.find('?') == std::string::npos) p.back() = '?';
    auto x = toeplitz(ToeplitzPattern::parse(p));
    EXPECT_EQ(str(x, 10000), toeplitz_reference(p, 10000)) << p;
  }
}

TEST(Kolakoski, PrefixSelfSimilarityAndSystem) {
  auto k = kolakoski();
  EXPECT_EQ(str(k, 23), "22112122122112112212112");
  auto p = prefix(k, 100000).letters();
  std::vector<Symbol> rle;
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    rle.push_back(static_cast<Symbol>(j - i - 1));
    i = j;
  }
  rle.pop_back();
  for (std::size_t i = 0; i < rle.size(); ++i) ASSERT_EQ(rle[i], p[i]) << i;
  EXPECT_FALSE(agreement_length(k, alternating_morphic(kolakoski_system()), 100000));
  EXPECT_FALSE(k.certified_bound());
}

TEST(AlternatingMorphic, IterationTable) {
  auto sys = kolakoski_system();
  auto a = kolakoski_alphabet();
  EXPECT_EQ(alternating_apply(sys, Word::parse(a, "2211")).str(), "221121");
  EXPECT_EQ(alternating_apply(sys, Word::parse(a, "221121221")).str(), "22112122122112");
  AlternatingMorphismSystem tm{{Morphism::endo(kBin, {"01", "10"})}, 0};
  EXPECT_EQ(str(alternating_morphic(tm), 64), oracle::thue_morse(64));
}

TEST(ProgressionRewrite, Examples) {
  auto levels = [](std::size_t k) { return Length{1} << (2 * k + 2); };
  auto c = progression_rewrite(constant(kBin, 0), levels);
  EXPECT_EQ(str(c, 1000), std::string(1000, '0'));
  auto base = random_sequence(kBin, 42);
  auto z = progression_rewrite(base, levels);
  auto zs = z.symbols(0, 100000);
  auto bs = base.symbols(0, 100000);
  for (std::size_t k = 0; k <= 3; ++k) {
    const std::size_t nk = levels(k), nk1 = levels(k + 1);
    for (std::size_t i = 0; i * nk1 + nk <= 100000; ++i)
      for (std::size_t j = 0; j < nk; ++j) ASSERT_EQ(zs[i * nk1 + j], zs[j]) << k << " " << i;
  }
  // Positions no step writes keep the base symbol.
  for (std::size_t p = 0; p < 100000; ++p) {
    bool written = false;
    for (std::size_t k = 0; levels(k + 1) <= p; ++k) written = written || (p % levels(k + 1) < levels(k));
    if (!written) ASSERT_EQ(zs[p], bs[p]) << p;
  }
  EXPECT_THROW(progression_rewrite(base, [](std::size_t k) { return Length{3} * (k + 1); })
                   .at(100),
               InvalidArgument);
  EXPECT_FALSE(z.certified_bound());
  ASSERT_TRUE(z.info().prefix_bound);
}

TEST(AperiodicityWitness, TableAndPrefix) {
  auto phi = aperiodicity_morphism(5);
  const std::vector<std::string> rows{"01310", "12421", "23032", "34143", "40204"};
  for (Symbol i = 0; i < 5; ++i) EXPECT_EQ(phi.image(i).str(), rows[i]);
  EXPECT_EQ(str(aperiodicity_witness(5), 30), "013101242134143124210131012421");
  EXPECT_EQ(aperiodicity_morphism(3).image(0).str(), "010");
  EXPECT_THROW(aperiodicity_witness(2), InvalidArgument);
}
