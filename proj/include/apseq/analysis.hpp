#pragma once

// Measurements on sequences: factor complexity, regulators, balance, powers,
// Besicovitch density and the aperiodicity measure, frequencies, entropy,
// quasiperiods, tiling periods, the Prouhet partition and periodicity screens.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apseq/core.hpp"
#include "apseq/rational.hpp"

namespace apseq {

// ---------------------------------------------------------------------------
// Complexity

struct ComplexityReport {
  std::size_t n = 0;
  std::size_t count = 0;
  /// True when horizon >= certified_bound(n) + n, so count = p_x(n).
  bool exact = false;
  Length horizon = 0;
};

inline ComplexityReport subword_complexity(const Sequence& x, std::size_t n, Length horizon) {
  if (n == 0) throw InvalidArgument("factor length must be positive");
  if (horizon < n) throw InvalidArgument("horizon must be at least n");
  auto text = x.symbols(0, horizon);
  FactorIndex index(text, n, x.alphabet().bits());
  bool exact = false;
  if (x.certified_bound()) exact = horizon >= sat_add((*x.certified_bound())(n), n);
  return {n, index.distinct(), exact, horizon};
}

// ---------------------------------------------------------------------------
// Regulators

enum class RegulatorKind { empirical_lower, certified_exact, certified_upper };

inline std::string to_string(RegulatorKind k) {
  switch (k) {
    case RegulatorKind::empirical_lower:
      return "empirical-lower";
    case RegulatorKind::certified_exact:
      return "certified-exact";
    case RegulatorKind::certified_upper:
      return "certified-upper";
  }
  return "";
}

struct RegulatorReport {
  std::size_t n = 0;
  Length value = 0;
  RegulatorKind kind = RegulatorKind::empirical_lower;
  Length horizon = 0;
  /// Factors judged to occur finitely often, in order of first occurrence.
  std::vector<Word> finitely_occurring;
  /// max(last start + 1) over the finitely occurring factors.
  Length cutoff = 0;
};

namespace detail {

struct FactorStats {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t max_gap = 0;
};

inline std::vector<FactorStats> factor_stats(const FactorIndex& index) {
  std::vector<FactorStats> st(index.distinct());
  std::vector<bool> seen(index.distinct(), false);
  for (std::size_t i = 0; i < index.ids().size(); ++i) {
    auto id = index.id(i);
    if (!seen[id]) {
      seen[id] = true;
      st[id].first = st[id].last = i;
    } else {
      st[id].max_gap = std::max(st[id].max_gap, i - st[id].last);
      st[id].last = i;
    }
  }
  return st;
}

/// Minimal window length l such that every window of length l in a text of
/// length H contains an occurrence starting at one of the listed positions.
inline Length window_requirement(const FactorStats& s, std::size_t n, Length H) {
  Length l = s.first + n;
  if (s.max_gap > 0) l = std::max<Length>(l, s.max_gap + n - 1);
  l = std::max<Length>(l, H - s.last);
  return l;
}

/// Regulator over `text` given a finiteness classification of factor ids.
template <class IsFinite>
RegulatorReport regulator_on_text(const Alphabet& a, const std::vector<Symbol>& text, std::size_t n,
                                  IsFinite is_finite, RegulatorKind kind) {
  FactorIndex index(text, n, a.bits());
  auto st = factor_stats(index);
  RegulatorReport r;
  r.n = n;
  r.kind = kind;
  r.horizon = text.size();
  Length l2 = n;
  for (std::uint32_t id = 0; id < st.size(); ++id) {
    if (is_finite(index, id, st[id])) {
      r.cutoff = std::max<Length>(r.cutoff, st[id].last + 1);
      const auto p = index.first_position(id);
      r.finitely_occurring.emplace_back(
          a, std::vector<Symbol>(text.begin() + static_cast<std::ptrdiff_t>(p),
                                 text.begin() + static_cast<std::ptrdiff_t>(p + n)));
    } else {
      l2 = std::max(l2, window_requirement(st[id], n, text.size()));
    }
  }
  r.value = std::max<Length>({r.cutoff, l2, n});
  return r;
}

}  // namespace detail

/// Lower estimate of r_x(n) from prefix(x, horizon). A factor with no
/// occurrence starting in [H/2, H-n] is reported as finitely occurring and
/// contributes only its cutoff (last start + 1). Every other factor must occur
/// in every window of length l lying inside the prefix.
inline RegulatorReport empirical_regulator(const Sequence& x, std::size_t n, Length horizon) {
  if (n == 0) throw InvalidArgument("factor length must be positive");
  if (horizon < 4 * static_cast<Length>(n)) throw InvalidArgument("empirical regulator needs horizon >= 4n");
  auto text = x.symbols(0, horizon);
  const std::size_t half = static_cast<std::size_t>(horizon / 2);
  return detail::regulator_on_text(
      x.alphabet(), text, n, [half](const FactorIndex&, std::uint32_t, const detail::FactorStats& s) { return s.last < half; },
      RegulatorKind::empirical_lower);
}

/// Prefix length needed by certified_regulator for factor length n.
inline Length certified_horizon(const BoundFunction& f, std::size_t n) {
  const Length fn = f(n);
  const Length ffn = f(fn);
  return std::max({sat_add(sat_mul(2, ffn), 1), sat_add(sat_mul(2, fn), 1), sat_add(fn, n + 1)});
}

/// Exact r_x(n) from the certified bound f: the infinitely occurring factors
/// are those of x[f(n), 2f(n)], every other factor of x[0, f(n)+n] is finitely
/// occurring, and all windows up to length f(n) are examined on a prefix long
/// enough to contain every factor of that length.
inline RegulatorReport certified_regulator(const Sequence& x, std::size_t n) {
  if (!x.certified_bound()) throw NoCertifiedBound("sequence '" + x.provenance() + "' carries no certified bound");
  if (n == 0) throw InvalidArgument("factor length must be positive");
  const BoundFunction& f = *x.certified_bound();
  const Length fn = f(n);
  const Length horizon = certified_horizon(f, n);
  if (horizon > x.horizon_cap()) throw CostRefusal(horizon, x.horizon_cap());
  auto text = x.symbols(0, horizon);
  FactorIndex index(text, n, x.alphabet().bits());
  std::vector<bool> infinite(index.distinct(), false);
  for (Length s = fn; s + n - 1 <= 2 * fn; ++s) infinite[index.id(static_cast<std::size_t>(s))] = true;
  auto r = detail::regulator_on_text(
      x.alphabet(), text, n,
      [&infinite](const FactorIndex&, std::uint32_t id, const detail::FactorStats&) { return !infinite[id]; },
      RegulatorKind::certified_exact);
  return r;
}

/// r'_x(n): minimal l such that x[0, n-1] occurs in every window of length l
/// inside prefix(x, horizon).
inline Length prefix_regulator(const Sequence& x, std::size_t n, Length horizon) {
  if (n == 0) throw InvalidArgument("prefix length must be positive");
  if (horizon < 4 * static_cast<Length>(n)) throw InvalidArgument("prefix regulator needs horizon >= 4n");
  auto text = x.symbols(0, horizon);
  std::span<const Symbol> needle(text.data(), n);
  auto occ = occurrences(std::span<const Symbol>(text), needle);
  if (occ.size() < 2) throw HorizonExhausted(sat_add(horizon, 1), horizon);
  detail::FactorStats s{occ.front(), occ.back(), 0};
  for (std::size_t i = 1; i < occ.size(); ++i) s.max_gap = std::max(s.max_gap, occ[i] - occ[i - 1]);
  return std::max<Length>(n, detail::window_requirement(s, n, horizon));
}

struct ApCoefficientReport {
  std::vector<Length> r;   ///< r(n) for n = 1..n_max (index n-1)
  std::vector<Length> rd;  ///< rd(n) = r(n) - n + 1
  double max_rd_ratio = 0;  ///< max rd(n)/n
  std::size_t argmax_rd = 0;
  double max_r_ratio = 0;  ///< max r(n)/n
  std::size_t argmax_r = 0;
  Length horizon = 0;
};

/// Per-n empirical r and rd with running maxima of rd(n)/n and r(n)/n.
inline ApCoefficientReport ap_coefficient(const Sequence& x, std::size_t n_max, Length horizon) {
  ApCoefficientReport rep;
  rep.horizon = horizon;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Length r = empirical_regulator(x, n, horizon).value;
    const Length rd = r - n + 1;
    rep.r.push_back(r);
    rep.rd.push_back(rd);
    const double a = static_cast<double>(rd) / static_cast<double>(n);
    const double b = static_cast<double>(r) / static_cast<double>(n);
    if (a > rep.max_rd_ratio) {
      rep.max_rd_ratio = a;
      rep.argmax_rd = n;
    }
    if (b > rep.max_r_ratio) {
      rep.max_r_ratio = b;
      rep.argmax_r = n;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Balance

struct BalanceReport {
  bool balanced = true;
  /// First length with a violation, and two factors whose counts of 1 differ by more than 1.
  std::size_t n = 0;
  std::optional<Word> u;
  std::optional<Word> v;
};

inline BalanceReport is_balanced(const Sequence& x, std::size_t n_max, Length horizon) {
  if (x.alphabet().size() != 2) throw InvalidArgument("balance is defined for binary sequences");
  auto text = x.symbols(0, horizon);
  std::vector<std::size_t> ones(text.size() + 1, 0);
  for (std::size_t i = 0; i < text.size(); ++i) ones[i + 1] = ones[i] + text[i];
  for (std::size_t n = 1; n <= n_max && n <= text.size(); ++n) {
    std::size_t lo = n + 1, hi = 0, at_lo = 0, at_hi = 0;
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
      const std::size_t c = ones[i + n] - ones[i];
      if (c < lo) {
        lo = c;
        at_lo = i;
      }
      if (c > hi) {
        hi = c;
        at_hi = i;
      }
    }
    if (hi > lo + 1) {
      auto w = [&](std::size_t p) {
        return Word(x.alphabet(), std::vector<Symbol>(text.begin() + static_cast<std::ptrdiff_t>(p),
                                                      text.begin() + static_cast<std::ptrdiff_t>(p + n)));
      };
      return {false, n, w(at_lo), w(at_hi)};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Powers

enum class PowerKind { square, cube, overlap };

struct PowerOccurrence {
  std::size_t position = 0;
  std::size_t period = 0;  ///< |u| for uu and uuu; |au| for auaua
  friend bool operator==(const PowerOccurrence&, const PowerOccurrence&) = default;
  friend auto operator<=>(const PowerOccurrence&, const PowerOccurrence&) = default;
};

namespace detail {

/// Longest common extension queries by hashing modulo 2^61 - 1.
class LceOracle {
 public:
  explicit LceOracle(const std::vector<Symbol>& t) : t_(t), h_(t.size() + 1, 0), p_(t.size() + 1, 1) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      h_[i + 1] = add(mul(h_[i], kBase), t[i] + 1);
      p_[i + 1] = mul(p_[i], kBase);
    }
  }

  /// Largest k with t[i, i+k) = t[j, j+k).
  std::size_t forward(std::size_t i, std::size_t j) const {
    std::size_t lo = 0, hi = t_.size() - std::max(i, j);
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (hash(i, mid) == hash(j, mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

  /// Largest k with t[i-k, i) = t[j-k, j).
  std::size_t backward(std::size_t i, std::size_t j) const {
    std::size_t lo = 0, hi = std::min(i, j);
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (hash(i - mid, mid) == hash(j - mid, mid))
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

 private:
  static constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t kBase = 1'000'003;
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    std::uint64_t v = static_cast<std::uint64_t>(r & kMod) + static_cast<std::uint64_t>(r >> 61);
    return v >= kMod ? v - kMod : v;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t v = a + b;
    return v >= kMod ? v - kMod : v;
  }
  std::uint64_t hash(std::size_t i, std::size_t len) const {
    return add(h_[i + len], kMod - mul(h_[i], p_[len]));
  }

  const std::vector<Symbol>& t_;
  std::vector<std::uint64_t> h_;
  std::vector<std::uint64_t> p_;
};

}  // namespace detail

/// All occurrences of uu, uuu or auaua in prefix(x, horizon), sorted by
/// (position, period). max_period = 0 means the largest period that fits.
inline std::vector<PowerOccurrence> detect_powers(const Sequence& x, Length horizon, PowerKind kind,
                                                  std::size_t max_period = 0) {
  if (horizon < 4) throw InvalidArgument("power detection needs horizon >= 4");
  auto text = x.symbols(0, horizon);
  const std::size_t H = text.size();
  // Pattern length as a function of the period p.
  auto length = [kind](std::size_t p) {
    return kind == PowerKind::square ? 2 * p : (kind == PowerKind::cube ? 3 * p : 2 * p + 1);
  };
  const std::size_t fit = kind == PowerKind::square ? H / 2 : (kind == PowerKind::cube ? H / 3 : (H - 1) / 2);
  const std::size_t pmax = max_period == 0 ? fit : std::min(max_period, fit);
  detail::LceOracle lce(text);
  std::vector<PowerOccurrence> out;
  for (std::size_t p = 1; p <= pmax; ++p) {
    const std::size_t len = length(p);
    // A repetition of period p and length len >= 2p contains a multiple of p
    // among its first len - p positions.
    std::size_t covered_until = 0;
    for (std::size_t j = 0; j + p < H; j += p) {
      if (j < covered_until) continue;
      const std::size_t back = lce.backward(j, j + p);
      const std::size_t fwd = lce.forward(j, j + p);
      const std::size_t start = j - back;
      const std::size_t end = j + p + fwd;  // exclusive end of the period-p run
      covered_until = end > p ? end - p : 0;
      if (end - start < len) continue;
      for (std::size_t i = start; i + len <= end; ++i) out.push_back({i, p});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Besicovitch density and aperiodicity

/// Fraction of i in [0, T) with x(i) != y(i).
inline double besicovitch_density(const Sequence& x, const Sequence& y, Length T) {
  require_same_alphabet(x.alphabet(), y.alphabet(), "besicovitch_density");
  if (T == 0) throw InvalidArgument("T must be positive");
  auto a = x.symbols(0, T);
  auto b = y.symbols(0, T);
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return static_cast<double>(d) / static_cast<double>(T);
}

struct AmReport {
  std::vector<double> density;  ///< density for shifts 1..N (index s-1)
  double min = 1;
  std::size_t argmin = 0;
  std::size_t shifts = 0;
  Length T = 0;
};

/// min over s in 1..N of the mismatch fraction between x and L^s x on [0, T).
inline AmReport am_estimate(const Sequence& x, std::size_t N, Length T) {
  if (N == 0 || T == 0) throw InvalidArgument("am_estimate needs N, T >= 1");
  auto t = x.symbols(0, T + N);
  AmReport rep;
  rep.shifts = N;
  rep.T = T;
  for (std::size_t s = 1; s <= N; ++s) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < T; ++i) d += t[i] != t[i + s];
    const double v = static_cast<double>(d) / static_cast<double>(T);
    rep.density.push_back(v);
    if (v < rep.min) {
      rep.min = v;
      rep.argmin = s;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Frequencies and entropy

struct FrequencyReport {
  Word u;
  Length i = 0;
  Length j = 0;
  std::size_t count = 0;
  Rational density;
};

/// Number of occurrences of u starting in [i, j], divided by j - i + 1.
inline FrequencyReport frequency(const Sequence& x, const Word& u, Length i, Length j) {
  if (u.empty()) throw InvalidArgument("frequency needs a nonempty word");
  if (i > j) throw InvalidArgument("frequency needs i <= j");
  require_same_alphabet(u.alphabet(), x.alphabet(), "frequency");
  auto text = x.symbols(i, j + u.size());
  const std::size_t c = occurrences(std::span<const Symbol>(text), u.span()).size();
  return {u, i, j, c, Rational(static_cast<std::int64_t>(c), static_cast<std::int64_t>(j - i + 1))};
}

/// (t, T_u(x, 0, t-1)) for t = 1, 2, 4, ... and t = T.
inline std::vector<std::pair<Length, double>> cesaro_estimate(const Sequence& x, const Word& u, Length T) {
  if (T == 0) throw InvalidArgument("T must be positive");
  require_same_alphabet(u.alphabet(), x.alphabet(), "cesaro_estimate");
  auto text = x.symbols(0, T + u.size() - 1);
  std::vector<std::pair<Length, double>> out;
  std::size_t count = 0;
  Length next = 1;
  std::size_t k = 0;
  for (Length t = 1; t <= T; ++t) {
    const std::size_t p = static_cast<std::size_t>(t - 1);
    if (std::equal(u.letters().begin(), u.letters().end(), text.begin() + static_cast<std::ptrdiff_t>(p))) ++count;
    if (t == next || t == T) {
      out.emplace_back(t, static_cast<double>(count) / static_cast<double>(t));
      if (t == next) next *= 2;
    }
    ++k;
  }
  return out;
}

/// (1/n)·log2 p_x(n) on prefix(x, horizon).
inline double entropy_estimate(const Sequence& x, std::size_t n, Length horizon) {
  const auto c = subword_complexity(x, n, horizon).count;
  return std::log2(static_cast<double>(c)) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Quasiperiods

struct QuasiperiodReport {
  /// All quasiperiods ordered by length; the word itself is always last.
  std::vector<Word> all;
  /// Quasiperiods that have no proper quasiperiod of their own.
  std::vector<Word> superprimitive;
  /// Shortest quasiperiod.
  Word minimal;
  /// True when some proper factor covers the word.
  bool quasiperiodic = false;
};

/// True when occurrences of q cover every position of w.
inline bool covers(const Word& w, const Word& q) {
  if (q.empty() || q.size() > w.size()) return false;
  auto occ = occurrences(w.span(), q.span());
  std::size_t reach = 0;
  for (auto p : occ) {
    if (p > reach) return false;
    reach = std::max(reach, p + q.size());
  }
  return reach == w.size();
}

inline QuasiperiodReport quasiperiods(const Word& w) {
  if (w.empty()) throw InvalidArgument("quasiperiods need a nonempty word");
  QuasiperiodReport r;
  for (std::size_t len = 1; len <= w.size(); ++len) {
    Word q = w.sub(0, len);
    // A quasiperiod is a border: its first and last occurrences sit at both ends.
    if (!std::equal(q.letters().begin(), q.letters().end(), w.letters().end() - static_cast<std::ptrdiff_t>(len)))
      continue;
    if (covers(w, q)) r.all.push_back(std::move(q));
  }
  for (const auto& q : r.all) {
    bool primitive = true;
    for (const auto& p : r.all) {
      if (p.size() >= q.size()) break;
      if (covers(q, p)) {
        primitive = false;
        break;
      }
    }
    if (primitive) r.superprimitive.push_back(q);
  }
  r.minimal = r.all.front();
  r.quasiperiodic = r.all.size() > 1;
  return r;
}

// ---------------------------------------------------------------------------
// Tiling periods

/// Gapped pattern: std::nullopt cells are holes.
using Pattern = std::vector<std::optional<Symbol>>;

/// One cell per character; '?' or "□" is a hole.
inline Pattern parse_pattern(const Alphabet& a, std::string_view text) {
  Pattern p;
  const std::string_view box = "\xE2\x96\xA1";
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, box.size()) == box) {
      p.emplace_back(std::nullopt);
      i += box.size();
    } else if (text[i] == '?') {
      p.emplace_back(std::nullopt);
      ++i;
    } else {
      p.emplace_back(a.symbol(text.substr(i, 1)));
      ++i;
    }
  }
  return p;
}

inline std::string pattern_str(const Alphabet& a, const Pattern& p) {
  std::string out;
  for (const auto& c : p) out += c ? a.name(*c) : "?";
  return out;
}

/// True when translated copies of v cover each position of u exactly once,
/// every non-hole cell matching the letter beneath it.
inline bool is_tiling_period(const Word& u, const Pattern& v) {
  std::vector<std::size_t> cells;
  for (std::size_t d = 0; d < v.size(); ++d)
    if (v[d]) cells.push_back(d);
  if (cells.empty()) return false;
  for (std::size_t d : cells)
    if (!u.alphabet().contains(*v[d])) return false;
  std::vector<bool> covered(u.size(), false);
  std::size_t next = 0;
  while (true) {
    while (next < u.size() && covered[next]) ++next;
    if (next == u.size()) return true;
    // The leftmost uncovered position can only be covered by the first cell of a copy.
    if (next < cells.front()) return false;
    const std::size_t t = next - cells.front();
    for (std::size_t d : cells) {
      const std::size_t pos = t + d;
      if (pos >= u.size() || covered[pos] || u[pos] != *v[d]) return false;
      covered[pos] = true;
    }
  }
}

inline bool is_tiling_period(const Word& u, std::string_view pattern) {
  return is_tiling_period(u, parse_pattern(u.alphabet(), pattern));
}

/// All tiling patterns of u with the fewest non-hole cells, found by
/// exhaustive search (|u| <= 32).
inline std::vector<Pattern> tiling_periods(const Word& u) {
  const std::size_t L = u.size();
  if (L == 0) throw InvalidArgument("tiling needs a nonempty word");
  if (L > 32) throw InvalidArgument("tiling search is limited to |u| <= 32");
  std::set<std::vector<std::size_t>> best;
  std::size_t best_size = L;
  std::vector<std::size_t> D{0};
  std::vector<std::size_t> T{0};
  std::vector<int> owner(L, -1);
  owner[0] = 0;

  // Processes positions left to right; each uncovered position either extends
  // D (as a cell of copy 0, replicated in every other copy) or starts a copy.
  std::function<void(std::size_t)> search = [&](std::size_t pos) {
    if (D.size() > best_size) return;
    while (pos < L && owner[pos] >= 0) ++pos;
    if (pos == L) {
      if (D.size() < best_size) {
        best_size = D.size();
        best.clear();
      }
      best.insert(D);
      return;
    }
    // Option 1: pos joins D.
    {
      const std::size_t d = pos;
      std::vector<std::size_t> placed;
      bool ok = true;
      for (std::size_t k = 1; k < T.size() && ok; ++k) {
        const std::size_t q = T[k] + d;
        if (q >= L || owner[q] >= 0 || u[q] != u[d]) {
          ok = false;
        } else {
          owner[q] = static_cast<int>(k);
          placed.push_back(q);
        }
      }
      if (ok && D.size() + 1 <= best_size) {
        owner[d] = 0;
        D.push_back(d);
        search(pos + 1);
        D.pop_back();
        owner[d] = -1;
      }
      for (auto q : placed) owner[q] = -1;
    }
    // Option 2: pos starts a new copy.
    {
      const std::size_t t = pos;
      std::vector<std::size_t> placed;
      bool ok = true;
      for (std::size_t d : D) {
        const std::size_t q = t + d;
        if (q >= L || owner[q] >= 0 || u[q] != u[d]) {
          ok = false;
          break;
        }
        owner[q] = static_cast<int>(T.size());
        placed.push_back(q);
      }
      if (ok) {
        T.push_back(t);
        search(pos + 1);
        T.pop_back();
      }
      for (auto q : placed) owner[q] = -1;
    }
  };
  search(1);
  std::vector<Pattern> out;
  for (const auto& d : best) {
    Pattern p(d.back() + 1, std::nullopt);
    for (auto c : d) p[c] = u[c];
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prouhet partition

struct ProuhetReport {
  std::vector<std::uint64_t> I;  ///< i < 2^N with t_i = 0
  std::vector<std::uint64_t> J;  ///< i < 2^N with t_i = 1
  std::vector<Int128> sums_I;    ///< Σ_{i∈I} i^k for k = 0..N-1
  std::vector<Int128> sums_J;
};

inline ProuhetReport prouhet_partition(unsigned N) {
  if (N < 1 || N > 10) throw InvalidArgument("prouhet_partition supports 1 <= N <= 10");
  ProuhetReport r;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << N); ++i) (std::popcount(i) % 2 == 0 ? r.I : r.J).push_back(i);
  for (unsigned k = 0; k < N; ++k) {
    auto sum = [k](const std::vector<std::uint64_t>& v) {
      Int128 s = 0;
      for (auto i : v) {
        Int128 p = 1;
        for (unsigned e = 0; e < k; ++e) p *= i;
        s += p;
      }
      return s;
    };
    r.sums_I.push_back(sum(r.I));
    r.sums_J.push_back(sum(r.J));
  }
  return r;
}

inline std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  if (neg) s += '-';
  return {s.rbegin(), s.rend()};
}

// ---------------------------------------------------------------------------
// Periodicity screen

struct PeriodicityReport {
  std::vector<std::size_t> complexity;  ///< p(n) for n = 1..n_max
  /// Smallest n with p(n) <= n, if any.
  std::optional<std::size_t> triggered_at;
  std::optional<Length> preperiod;
  std::optional<Length> period;
  bool confirmed = false;
};

/// Computes p(n) for n <= n_max. If p(n) <= n for some n, looks for the
/// smallest period T <= n whose preperiod leaves at least half the prefix
/// periodic.
inline PeriodicityReport periodicity_screen(const Sequence& x, Length horizon, std::size_t n_max = 20) {
  PeriodicityReport rep;
  auto text = x.symbols(0, horizon);
  for (std::size_t n = 1; n <= n_max && n <= text.size(); ++n) {
    FactorIndex idx(text, n, x.alphabet().bits());
    rep.complexity.push_back(idx.distinct());
    if (!rep.triggered_at && idx.distinct() <= n) rep.triggered_at = n;
  }
  if (!rep.triggered_at) return rep;
  for (std::size_t T = 1; T <= *rep.triggered_at && T < text.size(); ++T) {
    std::size_t k = 0;
    for (std::size_t i = text.size() - T; i-- > 0;) {
      if (text[i] != text[i + T]) {
        k = i + 1;
        break;
      }
    }
    if (k <= text.size() / 2) {
      rep.preperiod = k;
      rep.period = T;
      rep.confirmed = true;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Arithmetic-progression witnesses

struct ProgressionWitness {
  std::size_t start = 0;
  std::size_t step = 0;
  std::size_t terms = 0;
};

/// Searches for a, d such that u occurs at a + i·d for every i with
/// a + i·d + |u| <= horizon, with at least `min_terms` terms.
inline std::optional<ProgressionWitness> progression_witness(const std::vector<Symbol>& text,
                                                             std::span<const Symbol> u, std::size_t min_terms = 3,
                                                             std::size_t max_starts = 64) {
  auto occ = occurrences(std::span<const Symbol>(text), u);
  if (occ.empty()) return std::nullopt;
  std::vector<bool> at(text.size(), false);
  for (auto p : occ) at[p] = true;
  const std::size_t last_start = text.size() - u.size();
  for (std::size_t ai = 0; ai < occ.size() && ai < max_starts; ++ai) {
    const std::size_t a = occ[ai];
    for (std::size_t bi = ai + 1; bi < occ.size(); ++bi) {
      const std::size_t d = occ[bi] - a;
      const std::size_t terms = (last_start - a) / d + 1;
      if (terms < min_terms) break;
      bool ok = true;
      for (std::size_t p = a; p <= last_start; p += d)
        if (!at[p]) {
          ok = false;
          break;
        }
      if (ok) return ProgressionWitness{a, d, terms};
    }
  }
  return std::nullopt;
}

}  // namespace apseq
