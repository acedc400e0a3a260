#include <gtest/gtest.h>

#include "apseq/analysis.hpp"
#include "apseq/generators.hpp"
#include "apseq/scheme.hpp"
#include "oracles.hpp"

using namespace apseq;

namespace {

const Alphabet kBin = Alphabet::binary();
Word W(std::string_view s) { return Word::parse(kBin, s); }

std::vector<Word> words(std::initializer_list<const char*> ws) {
  std::vector<Word> out;
  for (auto w : ws) out.push_back(W(w));
  return out;
}

Scheme aabba() {
  return Scheme::self_similar(SchemeKind::gap, kBin, words({"0", "1"}), {{0, 0, 1, 1, 0}, {1, 1, 0, 0, 1}}, "aabba");
}

int violated(const Scheme& s, std::size_t depth = 1) {
  auto r = scheme_validate(s, depth);
  return r.ok() ? 0 : r.violation->condition;
}

}  // namespace

TEST(Scheme, ThueMorseSchemeValidatesAndGeneratesThueMorse) {
  auto s = thue_morse_scheme();
  EXPECT_TRUE(scheme_validate(s, 8).ok());
  EXPECT_EQ(s.level(3).l, 8u);
  EXPECT_EQ(s.level(3).B.size(), 2u);
  auto x = scheme_generate(s, GenerationMode::ap);
  EXPECT_EQ(prefix(x, 4096).str(), oracle::thue_morse(4096));
  EXPECT_THROW(scheme_generate(s, GenerationMode::gap), InvalidArgument);
}

TEST(Scheme, SelfSimilarGapSchemeIsFixedPoint) {
  auto s = aabba();
  EXPECT_TRUE(scheme_validate(s, 5).ok());
  auto x = scheme_generate(s);
  EXPECT_EQ(prefix(x, 3125).str(), oracle::iterate_morphism({{'0', "00110"}, {'1', "11001"}}, '0', 3125));
  ASSERT_TRUE(x.certified_bound());
  for (std::size_t n = 1; n <= 6; ++n)
    EXPECT_LE(empirical_regulator(x, n, 200000).value, (*x.certified_bound())(n)) << n;
}

TEST(Scheme, LeadWordPrefixesGapGeneration) {
  auto base = aabba();
  Scheme s = Scheme::self_similar(SchemeKind::gap, kBin, words({"0", "1"}), {{0, 0, 1, 1, 0}, {1, 1, 0, 0, 1}}, "led",
                                  W("111"));
  auto x = scheme_generate(s);
  EXPECT_EQ(prefix(x, 8).str(), "111" + prefix(scheme_generate(base), 5).str());
  EXPECT_FALSE(x.info().almost_periodic);
  EXPECT_EQ((*x.certified_bound())(1), 3u + 2u * 5u);
}

TEST(Scheme, ViolationsNameTheCondition) {
  auto level0 = [](std::vector<Word> B, std::vector<Word> C) { return SchemeLevel::make(1, std::move(B), C); };
  auto one = [&](SchemeLevel a) { return Scheme::explicit_levels(SchemeKind::gap, kBin, {std::move(a)}); };

  EXPECT_EQ(violated(one(level0(words({"0", "1"}), words({"01", "10"})))), 0);
  EXPECT_EQ(violated(one(SchemeLevel::make(1, words({"0", "11"}), words({"00"})))), 1);
  EXPECT_EQ(violated(one(level0(words({"0", "1"}), words({"011"})))), 2);
  EXPECT_EQ(violated(one(level0(words({"0", "1"}), words({"00"})))), 2);
  // 1 is never a second component.
  EXPECT_EQ(violated(one(level0(words({"0", "1"}), words({"00", "10"})))), 2);

  auto two = [](SchemeLevel a, SchemeLevel b) {
    return Scheme::explicit_levels(SchemeKind::gap, kBin, {std::move(a), std::move(b)});
  };
  // B_1 word built from a non-B_0 block.
  EXPECT_EQ(violated(two(level0(words({"0"}), words({"00"})), SchemeLevel::make(2, words({"01"}), words({"0101"})))), 3);
  // 00 is missing from both B_1 words.
  EXPECT_EQ(violated(two(level0(words({"0", "1"}), words({"01", "10", "00"})),
                         SchemeLevel::make(2, words({"01", "10"}), words({"0110", "1001"})))),
            3);
  // 010|010 straddles with 00, which is not in C_0.
  auto r = scheme_validate(two(level0(words({"0", "1"}), words({"01", "10"})),
                               SchemeLevel::make(3, words({"010", "101"}), words({"010010", "101101"}))),
                           1);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violation->condition, 4);
  EXPECT_EQ(r.violation->level, 0u);
  EXPECT_EQ(r.violation->words.front().str(), "010010");
}

TEST(Scheme, ApContainmentRule) {
  auto s = Scheme::explicit_levels(SchemeKind::ap, kBin,
                                   {SchemeLevel::make(1, words({"0", "1"}), {}), SchemeLevel::make(2, words({"00"}), {})});
  EXPECT_EQ(violated(s), 3);
  EXPECT_THROW(scheme_validate(s, 0), InvalidArgument);
}

TEST(Scheme, LookaheadAvoidsDeadEnds) {
  // B_0 = {0, 1}; every later level holds only 1^(2^n), so choosing 0 first is a dead end.
  Scheme s(SchemeKind::ap, kBin,
           [](std::size_t n) {
             if (n == 0) return SchemeLevel::make(1, words({"0", "1"}), {});
             return SchemeLevel::make(Length{1} << n, {Word(kBin, std::vector<Symbol>(std::size_t{1} << n, 1))}, {});
           },
           "ones");
  EXPECT_EQ(prefix(scheme_generate(s, GenerationMode::ap, ChoicePolicy::least(), 2), 64).str(), std::string(64, '1'));
  EXPECT_THROW(prefix(scheme_generate(s, GenerationMode::ap, ChoicePolicy::least(), 0), 64), GenerationStuck);
  auto finite = Scheme::explicit_levels(SchemeKind::ap, kBin, {SchemeLevel::make(1, words({"0", "1"}), {})});
  EXPECT_THROW(prefix(scheme_generate(finite, GenerationMode::ap), 2), GenerationStuck);
}

TEST(Scheme, PoliciesChooseAmongValidExtensions) {
  auto s = thue_morse_scheme();
  const auto tm = oracle::thue_morse(1024);
  std::string co = tm;
  for (auto& c : co) c = c == '0' ? '1' : '0';
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto p = prefix(scheme_generate(s, GenerationMode::ap, ChoicePolicy::random(seed)), 1024).str();
    EXPECT_TRUE(p == tm || p == co) << seed;
    EXPECT_EQ(p, prefix(scheme_generate(s, GenerationMode::ap, ChoicePolicy::random(seed)), 1024).str());
  }
  auto last_first = ChoicePolicy::callback([](std::size_t, std::vector<std::size_t>& c, const SchemeLevel&) {
    std::reverse(c.begin(), c.end());
  });
  EXPECT_EQ(prefix(scheme_generate(s, GenerationMode::ap, last_first), 1024).str(), co);
}
