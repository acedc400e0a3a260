#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apseq/analysis.hpp"
#include "apseq/generators.hpp"
#include "oracles.hpp"

using namespace apseq;

namespace {

const Alphabet kBin = Alphabet::binary();
Word W(std::string_view s) { return Word::parse(kBin, s); }

std::string random_binary(std::mt19937_64& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % 2);
  return s;
}

std::set<std::string> minimal_tilings(const std::string& u) {
  const std::size_t L = u.size();
  std::set<std::string> best;
  std::size_t best_cells = L + 1;
  for (std::uint32_t mask = 0; mask < (1u << (L - 1)); ++mask) {
    std::string p(1, u[0]);
    std::size_t cells = 1;
    for (std::size_t d = 1; d < L; ++d) {
      const bool cell = mask & (1u << (d - 1));
      p += cell ? u[d] : '?';
      cells += cell;
    }
    while (p.back() == '?') p.pop_back();
    if (cells > best_cells || !oracle::tiles(u, p)) continue;
    if (cells < best_cells) best.clear();
    best_cells = cells;
    best.insert(p);
  }
  return best;
}

/// Brute force r'(n): every window of length l inside s contains s[0, n).
std::size_t prefix_regulator_oracle(const std::string& s, std::size_t n) {
  const std::string u = s.substr(0, n);
  for (std::size_t l = n;; ++l) {
    bool ok = true;
    for (std::size_t i = 0; i + l <= s.size() && ok; ++i) ok = s.substr(i, l).find(u) != std::string::npos;
    if (ok) return l;
  }
}

}  // namespace

TEST(Complexity, SturmianAndThueMorseCounts) {
  auto fib = fibonacci();
  for (std::size_t n = 1; n <= 30; ++n) EXPECT_EQ(subword_complexity(fib, n, 50000).count, n + 1) << n;
  const auto s = oracle::thue_morse(20000);
  auto tm = thue_morse();
  for (std::size_t n = 1; n <= 16; ++n) {
    auto r = subword_complexity(tm, n, 20000);
    EXPECT_EQ(r.count, oracle::factors(s, n).size()) << n;
  }
  EXPECT_EQ(subword_complexity(tm, 3, 100000).count, 6u);
  EXPECT_TRUE(subword_complexity(tm, 3, 100000).exact);
  EXPECT_FALSE(subword_complexity(tm, 3, 10).exact);
  EXPECT_EQ(subword_complexity(periodic(W("001")), 5, 1000).count, 3u);
}

TEST(Regulator, EmpiricalMatchesWindowScan) {
  std::mt19937_64 rng(31);
  std::vector<Sequence> xs{thue_morse(), fibonacci(), keane(), periodic(W("0010")), eventually_periodic(W("11"), W("01"))};
  for (auto& x : xs) {
    const auto s = prefix(x, 1200).str();
    for (std::size_t n = 1; n <= 5; ++n) {
      auto r = empirical_regulator(x, n, 1200);
      auto o = oracle::regulator(s, n);
      EXPECT_EQ(r.value, o.value) << x.provenance() << " n=" << n;
      EXPECT_EQ(r.finitely_occurring.size(), o.finite.size()) << x.provenance() << " n=" << n;
      EXPECT_EQ(r.kind, RegulatorKind::empirical_lower);
    }
  }
  for (int t = 0; t < 10; ++t) {
    const auto s = random_binary(rng, 400);
    auto w = Word::parse(kBin, s);
    Sequence x(kBin, [w](std::size_t b, std::span<Symbol> out, const Sequence::View&) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = b + k < w.size() ? w[b + k] : 0;
    }, {}, 400);
    for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(empirical_regulator(x, n, 400).value, oracle::regulator(s, n).value);
  }
  EXPECT_THROW(empirical_regulator(thue_morse(), 10, 39), InvalidArgument);
  EXPECT_THROW(empirical_regulator(thue_morse(), 0, 100), InvalidArgument);
}

TEST(Regulator, PreperiodicFactorsAreFinite) {
  auto x = eventually_periodic(W("11"), W("01"));
  auto r = empirical_regulator(x, 2, 1000);
  ASSERT_EQ(r.finitely_occurring.size(), 1u);
  EXPECT_EQ(r.finitely_occurring[0].str(), "11");
  EXPECT_EQ(r.cutoff, 1u);
}

TEST(Regulator, CertifiedValuesForThueMorse) {
  // Hand check: 3 for n = 1 because 000 and 111 are absent; 9 for n = 2.
  const std::vector<Length> expected{3, 9, 11, 21, 22, 41, 42, 43};
  auto tm = thue_morse();
  for (std::size_t n = 1; n <= expected.size(); ++n) {
    auto c = certified_regulator(tm, n);
    EXPECT_EQ(c.value, expected[n - 1]) << n;
    EXPECT_EQ(c.kind, RegulatorKind::certified_exact);
    EXPECT_EQ(empirical_regulator(tm, n, 1000000).value, c.value) << n;
    EXPECT_LE(c.value, (*tm.certified_bound())(n));
  }
}

TEST(Regulator, CertifiedPeriodicAndRefusals) {
  auto p = periodic(W("01"));
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(certified_regulator(p, n).value, n + 1);
  EXPECT_THROW(certified_regulator(kolakoski(), 1), NoCertifiedBound);
  const Length old = default_horizon_cap();
  set_default_horizon_cap(50);
  auto tm = thue_morse();
  set_default_horizon_cap(old);
  EXPECT_THROW(certified_regulator(tm, 4), CostRefusal);
  EXPECT_EQ(certified_horizon(*thue_morse().certified_bound(), 1), 2u * 19u + 1u);
}

TEST(Regulator, PrefixRegulatorMatchesBruteForce) {
  EXPECT_EQ(prefix_regulator(periodic(W("01")), 2, 100), 3u);
  const auto s = oracle::thue_morse(3000);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(prefix_regulator(thue_morse(), n, 3000), prefix_regulator_oracle(s, n)) << n;
  const auto f = oracle::fibonacci(3000);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(prefix_regulator(fibonacci(), n, 3000), prefix_regulator_oracle(f, n)) << n;
  EXPECT_THROW(prefix_regulator(eventually_periodic(W("11"), W("0")), 2, 100), HorizonExhausted);
}

TEST(ApCoefficient, FibonacciRatios) {
  auto rep = ap_coefficient(fibonacci(), 10, 3000);
  const auto s = oracle::fibonacci(3000);
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_EQ(rep.r[n - 1], oracle::regulator(s, n).value) << n;
    EXPECT_EQ(rep.rd[n - 1], rep.r[n - 1] - n + 1);
  }
  EXPECT_DOUBLE_EQ(rep.max_rd_ratio, 3.0);
  EXPECT_EQ(rep.argmax_rd, 1u);
}

TEST(Balance, ThueMorseAndSturmian) {
  auto r = is_balanced(thue_morse(), 10, 1000);
  EXPECT_FALSE(r.balanced);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.u->str(), "00");
  EXPECT_EQ(r.v->str(), "11");
  EXPECT_TRUE(is_balanced(fibonacci(), 60, 100000).balanced);
  EXPECT_TRUE(is_balanced(mechanical(inverse_golden(), Rational(0)), 40, 20000).balanced);
  EXPECT_THROW(is_balanced(aperiodicity_witness(3), 3, 100), InvalidArgument);
}

TEST(Powers, MatchBruteForce) {
  std::mt19937_64 rng(32);
  std::vector<std::pair<Sequence, std::string>> xs{{thue_morse(), oracle::thue_morse(600)},
                                                   {fibonacci(), oracle::fibonacci(600)}};
  for (int t = 0; t < 4; ++t) {
    auto s = random_binary(rng, 600);
    auto w = Word::parse(kBin, s);
    xs.emplace_back(Sequence(kBin, [w](std::size_t b, std::span<Symbol> out, const Sequence::View&) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = b + k < w.size() ? w[b + k] : 0;
    }, {}, 600), s);
  }
  const PowerKind kinds[] = {PowerKind::square, PowerKind::cube, PowerKind::overlap};
  for (auto& [x, s] : xs)
    for (int k = 0; k < 3; ++k) {
      std::set<std::pair<std::size_t, std::size_t>> got;
      for (auto o : detect_powers(x, 600, kinds[k], 40)) got.insert({o.position, o.period});
      EXPECT_EQ(got, oracle::powers(s, k, 40)) << x.provenance() << " kind " << k;
    }
}

TEST(Powers, ThueMorseAvoidsOverlaps) {
  EXPECT_TRUE(detect_powers(thue_morse(), 100000, PowerKind::cube).empty());
  EXPECT_TRUE(detect_powers(thue_morse(), 100000, PowerKind::overlap).empty());
  EXPECT_FALSE(detect_powers(thue_morse(), 100000, PowerKind::square).empty());
  auto sq = detect_powers(periodic(W("01")), 8, PowerKind::square);
  EXPECT_EQ(sq.front(), (PowerOccurrence{0, 2}));
}

TEST(Aperiodicity, DensitiesAndEstimates) {
  EXPECT_DOUBLE_EQ(besicovitch_density(thue_morse(), thue_morse(), 1000), 0.0);
  EXPECT_DOUBLE_EQ(besicovitch_density(periodic(W("01")), periodic(W("10")), 1000), 1.0);
  auto am = am_estimate(aperiodicity_witness(5), 64, 20000);
  EXPECT_NEAR(am.min, 0.6, 0.01);
  EXPECT_EQ(am_estimate(periodic(W("011")), 10, 999).min, 0.0);
  EXPECT_EQ(am_estimate(periodic(W("011")), 10, 999).argmin, 3u);
  // Shift 1 of TM: the fraction of i with t(i) = t(i+1) is 1/3.
  EXPECT_NEAR(am_estimate(thue_morse(), 1, 300000).min, 2.0 / 3.0, 0.001);
}

TEST(Frequencies, CountsAndLimits) {
  auto fib = fibonacci();
  auto f = frequency(fib, W("0"), 0, 20);
  EXPECT_EQ(f.count, 13u);
  EXPECT_EQ(f.density, Rational(13, 21));
  auto tm = thue_morse();
  const auto t = oracle::thue_morse(1026);
  const auto c = oracle::occurrences(t, "01").size() - (t.compare(1024, 2, "01") == 0 ? 1 : 0);
  EXPECT_EQ(frequency(tm, W("01"), 0, 1023).density, Rational(static_cast<std::int64_t>(c), 1024));
  auto ce = cesaro_estimate(fib, W("0"), 100000);
  EXPECT_NEAR(ce.back().second, 2.0 / (1.0 + std::sqrt(5.0)), 1e-4);
  EXPECT_EQ(ce.front().first, 1u);
  EXPECT_THROW(frequency(fib, W("0"), 5, 4), InvalidArgument);
}

TEST(Entropy, ZeroForSturmianAndPositiveForRandom) {
  EXPECT_NEAR(entropy_estimate(fibonacci(), 20, 100000), std::log2(21.0) / 20, 1e-12);
  EXPECT_NEAR(entropy_estimate(random_sequence(kBin, 9), 10, 200000), 1.0, 0.01);
}

TEST(Quasiperiods, MatchBruteForce) {
  auto a = Alphabet::from_chars("ab");
  auto r = quasiperiods(Word::parse(a, "abaaba"));
  EXPECT_EQ(r.minimal.str(), "aba");
  EXPECT_TRUE(r.quasiperiodic);
  EXPECT_FALSE(quasiperiods(Word::parse(a, "abb")).quasiperiodic);
  std::mt19937_64 rng(33);
  for (int t = 0; t < 200; ++t) {
    std::string s = random_binary(rng, rng() % 14 + 1);
    if (t % 3 == 0) s = s.substr(0, s.size() / 2 + 1) + s.substr(0, s.size() / 2 + 1);
    auto got = quasiperiods(W(s));
    std::vector<std::string> names;
    for (auto& q : got.all) names.push_back(q.str());
    EXPECT_EQ(names, oracle::quasiperiods(s)) << s;
    for (auto& q : got.superprimitive)
      for (auto& p : oracle::quasiperiods(q.str())) EXPECT_TRUE(p == q.str()) << s;
  }
}

TEST(Tiling, ExamplesAndExhaustiveComparison) {
  EXPECT_TRUE(is_tiling_period(W("0011"), "0?1"));
  EXPECT_TRUE(is_tiling_period(W("0101"), "01"));
  EXPECT_FALSE(is_tiling_period(W("0110"), "01"));
  std::mt19937_64 rng(34);
  for (int t = 0; t < 80; ++t) {
    const std::string s = random_binary(rng, rng() % 9 + 2);
    std::set<std::string> got;
    for (auto& p : tiling_periods(W(s))) got.insert(pattern_str(kBin, p));
    EXPECT_EQ(got, minimal_tilings(s)) << s;
    for (auto& p : got) EXPECT_EQ(is_tiling_period(W(s), p), oracle::tiles(s, p));
  }
  EXPECT_THROW(tiling_periods(Word(kBin)), InvalidArgument);
}

TEST(Prouhet, EqualPowerSums) {
  for (unsigned N = 1; N <= 10; ++N) {
    auto r = prouhet_partition(N);
    EXPECT_EQ(r.I.size(), r.J.size());
    for (unsigned k = 0; k < N; ++k) EXPECT_TRUE(r.sums_I[k] == r.sums_J[k]) << N << " " << k;
  }
  auto r = prouhet_partition(4);
  EXPECT_EQ(r.I, (std::vector<std::uint64_t>{0, 3, 5, 6, 9, 10, 12, 15}));
  EXPECT_EQ(to_string(r.sums_I[3]), "7200");
  // Degree N fails: 0^3 + 3^3 + 5^3 + 6^3 = 368 vs 1 + 8 + 64 + 343 = 416 for N = 3.
  auto q = prouhet_partition(3);
  Int128 a = 0, b = 0;
  for (auto i : q.I) a += static_cast<Int128>(i * i * i);
  for (auto j : q.J) b += static_cast<Int128>(j * j * j);
  EXPECT_FALSE(a == b);
  EXPECT_THROW(prouhet_partition(11), InvalidArgument);
}

TEST(Screen, FlagsPeriodicityOnly) {
  auto r = periodicity_screen(eventually_periodic(W("10"), W("01")), 1000);
  ASSERT_TRUE(r.confirmed);
  EXPECT_EQ(*r.period, 2u);
  EXPECT_EQ(*r.preperiod, 2u);
  EXPECT_FALSE(periodicity_screen(thue_morse(), 10000).triggered_at);
  EXPECT_FALSE(periodicity_screen(fibonacci(), 10000).triggered_at);
}

TEST(ProgressionWitness, FindsFullProgressions) {
  std::vector<Symbol> text;
  for (std::size_t i = 0; i < 100; ++i) text.push_back(i % 7 == 3 ? 1 : 0);
  std::vector<Symbol> u{1};
  auto w = progression_witness(text, u);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->start, 3u);
  EXPECT_EQ(w->step, 7u);
  EXPECT_EQ(w->terms, 14u);
  std::vector<Symbol> v{1, 1};
  EXPECT_FALSE(progression_witness(text, v));
}
