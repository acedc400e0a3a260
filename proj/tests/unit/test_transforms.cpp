#include <gtest/gtest.h>

#include <random>

#include "apseq/analysis.hpp"
#include "apseq/generators.hpp"
#include "apseq/transducer.hpp"
#include "oracles.hpp"

using namespace apseq;

namespace {

const Alphabet kBin = Alphabet::binary();
Word W(std::string_view s) { return Word::parse(kBin, s); }

struct MachineTable {
  std::vector<std::vector<std::string>> out;
  std::vector<std::vector<std::size_t>> next;
};

MachineTable random_table(std::mt19937_64& rng, std::size_t states, bool uniform) {
  MachineTable t;
  t.out.resize(states);
  t.next.resize(states);
  for (std::size_t q = 0; q < states; ++q)
    for (int a = 0; a < 2; ++a) {
      std::string w;
      const std::size_t len = uniform ? 1 : rng() % 3 + 1;
      for (std::size_t i = 0; i < len; ++i) w += static_cast<char>('0' + rng() % 2);
      t.out[q].push_back(w);
      t.next[q].push_back(rng() % states);
    }
  return t;
}

Transducer build(const MachineTable& t) {
  std::vector<std::string> names;
  std::vector<std::vector<Word>> lam(t.out.size());
  for (std::size_t q = 0; q < t.out.size(); ++q) {
    names.push_back("q" + std::to_string(q));
    for (const auto& w : t.out[q]) lam[q].push_back(W(w));
  }
  return Transducer(kBin, kBin, names, 0, lam, t.next);
}

std::string simulate(const MachineTable& t, const std::string& in) {
  std::string out;
  std::size_t q = 0;
  for (char c : in) {
    out += t.out[q][c - '0'];
    q = t.next[q][c - '0'];
  }
  return out;
}

/// Depth-counting model of the two-mode pushdown machine.
std::string pushdown_model(const std::string& in) {
  char mode = 'a';
  std::size_t depth = 0;
  std::string out;
  for (char c : in) {
    out += mode;
    const bool push = (mode == 'a') == (c == '0');
    if (push) {
      ++depth;
    } else if (depth > 0) {
      if (--depth == 0) mode = mode == 'a' ? 'b' : 'a';
    } else {
      mode = mode == 'a' ? 'b' : 'a';
      depth = 1;
    }
  }
  return out;
}

std::size_t longest_run(const std::string& s) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return best;
}

}  // namespace

TEST(BoundFormulas, HandComputedLinearCase) {
  BoundFunction g([](Length n) { return 2 * n; }, "2n");
  auto f = bound_formulas(g, 2, 2);
  // h(n) = (g+1)^2(n) - 1 = 4n + 2.
  EXPECT_EQ(f.reversible_bound(5), 22u);
  EXPECT_EQ(f.image_bound(5), 4u * 22u + 2u);
  EXPECT_EQ(f.prefix_bound, 2u + 4u);
  ASSERT_TRUE(f.linear_bound);
  EXPECT_EQ((*f.linear_bound)(5), 16u * 5u + 15u);
  EXPECT_THROW(bound_formulas(g, 0), InvalidArgument);
}

TEST(Transducer, IdentityAndRejections) {
  auto tm = thue_morse();
  auto y = transduce(Transducer::identity(kBin), tm);
  EXPECT_EQ(prefix(y, 5000), prefix(tm, 5000));
  ASSERT_TRUE(y.certified_bound());
  for (Length n = 1; n <= 20; ++n) EXPECT_EQ((*y.certified_bound())(n), (*tm.certified_bound())(n));
  EXPECT_THROW(Transducer(kBin, kBin, {"q"}, 0, {{W("0"), Word(kBin)}}, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(Transducer(kBin, kBin, {"q"}, 1, {{W("0"), W("1")}}, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(Transducer(kBin, kBin, {"q"}, 0, {{W("0")}}, {{0}}), InvalidArgument);
  EXPECT_THROW(transduce(Transducer::identity(kBin), kolakoski()), AlphabetMismatch);
}

TEST(Transducer, MatchesSimulationOnRandomMachines) {
  std::mt19937_64 rng(21);
  const auto in = oracle::thue_morse(4000);
  for (int t = 0; t < 30; ++t) {
    auto table = random_table(rng, rng() % 4 + 1, t % 2 == 0);
    auto y = transduce(build(table), thue_morse());
    const auto want = simulate(table, in);
    EXPECT_EQ(prefix(y, 4000).str(), want.substr(0, 4000)) << t;
  }
}

TEST(Transducer, DecompositionComposesBack) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    auto m = build(random_table(rng, rng() % 4 + 1, false));
    auto [tagger, phi] = decompose(m);
    EXPECT_TRUE(tagger.is_uniform());
    auto x = fibonacci();
    EXPECT_EQ(prefix(apply_morphism(phi, transduce(tagger, x)), 3000), prefix(transduce(m, x), 3000)) << t;
  }
}

TEST(Transducer, UniformImagesStayWithinTheirBound) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 8; ++t) {
    auto m = build(random_table(rng, rng() % 3 + 1, true));
    for (auto x : {thue_morse(), fibonacci()}) {
      auto y = transduce(m, x);
      ASSERT_TRUE(y.certified_bound());
      for (std::size_t n = 1; n <= 5; ++n)
        EXPECT_LE(empirical_regulator(y, n, 100000).value, (*y.certified_bound())(n)) << t << " n=" << n;
    }
  }
}

TEST(Transducer, ReversibleMachinesGetTheTighterBound) {
  // Running parity: both letters permute the two states.
  Transducer parity(kBin, kBin, {"e", "o"}, 0, {{W("0"), W("1")}, {W("1"), W("0")}}, {{0, 1}, {1, 0}});
  EXPECT_TRUE(parity.is_reversible());
  auto x = thue_morse();
  auto y = transduce(parity, x);
  auto f = bound_formulas(*x.certified_bound(), 2);
  for (Length n = 1; n <= 12; ++n) EXPECT_EQ((*y.certified_bound())(n), f.reversible_bound(n));
  // Reset on 1: only 0 permutes the states.
  Transducer reset(kBin, kBin, {"p", "r"}, 0, {{W("0"), W("1")}, {W("1"), W("0")}}, {{1, 0}, {0, 0}});
  EXPECT_FALSE(reset.is_reversible());
  EXPECT_TRUE(reset.is_almost_reversible({0}));
  auto z = transduce(reset, x);
  for (Length n = 1; n <= 12; ++n) EXPECT_EQ((*z.certified_bound())(n), f.image_bound(n));
}

TEST(Transducer, NonuniformAndUnboundedInputsCarryNoBound) {
  Transducer dbl(kBin, kBin, {"q"}, 0, {{W("00"), W("1")}}, {{0, 0}});
  EXPECT_FALSE(transduce(dbl, thue_morse()).certified_bound());
  EXPECT_FALSE(transduce(Transducer::identity(kolakoski_alphabet()), kolakoski()).certified_bound());
}

TEST(Transducer, ErasingMachineCollapses) {
  Transducer drop(kBin, kBin, {"q"}, 0, {{Word(kBin), W("1")}}, {{0, 0}}, true);
  auto y = transduce(drop, constant(kBin, 0));
  EXPECT_THROW(y.at(0), Error);
  EXPECT_EQ(prefix(transduce(drop, periodic(W("01"))), 5).str(), "11111");
}

TEST(Transducer, StateStreamAndStateEmitting) {
  Transducer parity(kBin, kBin, {"e", "o"}, 0, {{W("0"), W("1")}, {W("1"), W("0")}}, {{0, 1}, {1, 0}});
  auto states = run_states(parity, periodic(W("1")));
  EXPECT_EQ(prefix(states, 4).str(), "eoeo");
  EXPECT_EQ(prefix(transduce(parity.state_emitting(), periodic(W("1"))), 4).str(), "eoeo");
}

TEST(MorphismImage, ThueMorseIsItsOwnImage) {
  auto tm = thue_morse();
  EXPECT_EQ(prefix(apply_morphism(Morphism::endo(kBin, {"01", "10"}), tm), 8192), prefix(tm, 8192));
  EXPECT_FALSE(apply_morphism(Morphism::endo(kBin, {"01", "10"}), tm).certified_bound());
}

TEST(Product, PairsAndPeriodicBound) {
  auto tm = thue_morse();
  auto p = product(tm, periodic(W("01")));
  auto q = product(tm, shift(periodic(W("10")), 1));
  EXPECT_EQ(prefix(p, 1000), prefix(q, 1000));
  EXPECT_EQ(p.alphabet().name(p.at(2)), "1:0");
  ASSERT_TRUE(p.certified_bound());
  EXPECT_TRUE(q.certified_bound());
  EXPECT_FALSE(product(tm, fibonacci()).certified_bound());
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_LE(empirical_regulator(p, n, 100000).value, (*p.certified_bound())(n));
  auto c = cyclic(tm, 3);
  EXPECT_EQ(c.alphabet().name(c.at(4)), "1:1");
  EXPECT_EQ(c.alphabet().name(c.at(5)), "0:2");
}

TEST(Split, BlocksDecodeBackToTheSequence) {
  auto fib = fibonacci();
  auto r = split(fib, 1, 2000);
  EXPECT_EQ(r.first_block.str(), "01");
  std::string rebuilt = r.first_block.str();
  const Length m = r.blocks.horizon_cap();
  for (auto s : r.blocks.symbols(0, m)) rebuilt += r.decode[s].str();
  EXPECT_EQ(rebuilt, oracle::fibonacci(rebuilt.size()));
  EXPECT_EQ(r.decode.size(), 2u);
  EXPECT_THROW(r.blocks.at(m), HorizonExhausted);
  EXPECT_THROW(split(constant(kBin, 0), 1, 100), InvalidArgument);
}

TEST(Pushdown, CounterexampleMatchesModel) {
  auto pm = counterexample_machine();
  EXPECT_EQ(prefix(pushdown_transduce(pm, periodic(W("01"))), 9).str(), "aabababab");
  const auto in = prefix(alternating_prefix_example(), 100000).str();
  const auto out = prefix(pushdown_transduce(pm, alternating_prefix_example()), 100000).str();
  EXPECT_EQ(out, pushdown_model(in));
  // Runs of one mode keep growing although the input is almost periodic.
  EXPECT_GT(longest_run(out), 4 * longest_run(out.substr(0, 10000)));
}

TEST(Pushdown, FiniteStateMachinesEmbed) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 10; ++t) {
    auto table = random_table(rng, rng() % 3 + 1, false);
    auto m = build(table);
    EXPECT_EQ(prefix(pushdown_transduce(PushdownTransducer::from_transducer(m), thue_morse()), 2000),
              prefix(transduce(m, thue_morse()), 2000));
  }
}
