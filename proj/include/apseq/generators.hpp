#pragma once

// Constructors for the sequence families: periodic, Thue–Morse, mechanical,
// morphic and automatic, block products, Toeplitz, Kolakoski, alternating
// morphisms, progression rewriting and the aperiodicity witnesses x_k.

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apseq/core.hpp"
#include "apseq/morphism.hpp"
#include "apseq/rational.hpp"

namespace apseq {

// ---------------------------------------------------------------------------
// Periodic families

inline Sequence periodic(const Word& period) {
  if (period.empty()) throw InvalidArgument("period must be nonempty");
  const Length p = period.size();
  SequenceInfo info;
  info.provenance = "periodic(" + period.str() + ")";
  info.certified_bound = BoundFunction([p](Length n) { return sat_sub(sat_add(n, p), 1); }, "periodic: n+|period|-1");
  info.almost_periodic = true;
  info.period = p;
  auto letters = period.letters();
  return Sequence::from_index(period.alphabet(), [letters](std::size_t i) { return letters[i % letters.size()]; },
                              std::move(info));
}

inline Sequence constant(const Alphabet& a, Symbol s) {
  return periodic(Word(a, {s})).with_info([&] {
    SequenceInfo info;
    info.provenance = "constant(" + a.name(s) + ")";
    info.certified_bound = BoundFunction([](Length n) { return n; }, "constant: n");
    info.almost_periodic = true;
    info.period = 1;
    return info;
  }());
}

inline Sequence eventually_periodic(const Word& pre, const Word& period) {
  if (period.empty()) throw InvalidArgument("period must be nonempty");
  require_same_alphabet(pre.alphabet(), period.alphabet(), "eventually_periodic");
  const Length p = period.size();
  const Length k = pre.size();
  SequenceInfo info;
  info.provenance = "eventually_periodic(" + pre.str() + "," + period.str() + ")";
  info.certified_bound = BoundFunction(
      [p, k](Length n) { return std::max(sat_add(k, n), sat_sub(sat_add(n, p), 1)); },
      "eventually_periodic: max(|pre|+n, n+|period|-1)");
  info.almost_periodic = pre.empty();
  if (pre.empty()) info.period = p;
  auto a = pre.letters();
  auto b = period.letters();
  return Sequence::from_index(
      period.alphabet(), [a, b](std::size_t i) { return i < a.size() ? a[i] : b[(i - a.size()) % b.size()]; },
      std::move(info));
}

// ---------------------------------------------------------------------------
// Morphic and automatic sequences

namespace detail {

/// Lazily expanded fixed point of H, where position i of the current word is
/// rewritten by images[i mod p]. With p = 1 this is an ordinary morphism.
inline Sequence::Filler fixed_point_filler(std::vector<Morphism> hs, Symbol seed,
                                           std::vector<Symbol> coding) {
  struct State {
    std::vector<Morphism> hs;
    std::vector<Symbol> coding;
    std::vector<Symbol> x;
    std::size_t p = 1;
  };
  auto st = std::make_shared<State>();
  st->hs = std::move(hs);
  st->coding = std::move(coding);
  st->x = st->hs[0].image(seed).letters();
  return [st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    const std::size_t need = begin + out.size();
    while (st->x.size() < need) {
      if (st->p >= st->x.size()) throw ImageCollapse("fixed point is a finite word");
      const auto& im = st->hs[st->p % st->hs.size()].image(st->x[st->p]).letters();
      st->x.insert(st->x.end(), im.begin(), im.end());
      ++st->p;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      const Symbol s = st->x[begin + k];
      out[k] = st->coding.empty() ? s : st->coding[s];
    }
  };
}

inline void check_prolongable(const std::vector<Morphism>& hs, Symbol seed) {
  const Morphism& h0 = hs.front();
  const Word& im = h0.image(seed);
  if (im.empty() || im[0] != seed)
    throw InvalidArgument("morphism is not prolongable on '" + h0.source().name(seed) + "'");
  // The tail u of h0(seed) = seed u must eventually produce letters forever.
  bool any_erasing = false;
  for (const auto& h : hs) any_erasing = any_erasing || h.erasing();
  if (im.size() == 1) throw ImageCollapse("seed image is the seed itself; the fixed point is finite");
  if (any_erasing && hs.size() == 1) {
    auto mortal = h0.mortal_letters();
    bool alive = false;
    for (std::size_t i = 1; i < im.size(); ++i) alive = alive || !mortal.count(im[i]);
    if (!alive) throw ImageCollapse("every letter after the seed is mortal");
  }
}

}  // namespace detail

/// coding(φ^∞(seed)). Pass std::nullopt for the identity coding.
inline Sequence morphic(const Morphism& phi, Symbol seed, const std::optional<Morphism>& coding = std::nullopt) {
  require_same_alphabet(phi.source(), phi.target(), "morphic: morphism must be an endomorphism");
  detail::check_prolongable({phi}, seed);
  std::vector<Symbol> code;
  Alphabet out = phi.source();
  if (coding) {
    if (!coding->is_coding()) throw InvalidArgument("coding must be 1-uniform");
    require_same_alphabet(coding->source(), phi.source(), "morphic coding");
    for (const auto& w : coding->images()) code.push_back(w[0]);
    out = coding->target();
  }
  SequenceInfo info;
  info.provenance = "morphic(" + phi.str() + ";" + phi.source().name(seed) + ")";
  return Sequence(out, detail::fixed_point_filler({phi}, seed, std::move(code)), std::move(info));
}

inline Sequence automatic(const DFAO& dfao) {
  SequenceInfo info;
  info.provenance = "automatic(base " + std::to_string(dfao.base()) + ", " + std::to_string(dfao.states()) + " states)";
  return Sequence::from_index(dfao.output_alphabet(), [dfao](std::size_t n) { return dfao.eval(n); },
                              std::move(info));
}

// ---------------------------------------------------------------------------
// Thue–Morse

enum class ThueMorseDefinition { recurrence, digit_sum, morphic };

/// Bound for sequences that are images of themselves under a substitution
/// whose level-k blocks have lengths in [min_len(k), max_len(k)]. r2 is the
/// exact regulator for length-2 factors. A factor of length n <= min_len(k)+1
/// lies inside the image of a 2-factor, and a window of length
/// (r2+1)·max_len(k) - 1 contains r2 consecutive whole blocks.
inline BoundFunction substitutive_bound(Length r2, std::function<Length(unsigned)> min_len,
                                        std::function<Length(unsigned)> max_len, std::string provenance) {
  return BoundFunction(
      [=](Length n) -> Length {
        unsigned k = 0;
        while (sat_add(min_len(k), 1) < n) ++k;
        return std::max(n, sat_sub(sat_mul(r2 + 1, max_len(k)), 1));
      },
      std::move(provenance));
}

inline BoundFunction thue_morse_bound() {
  auto pow2 = [](unsigned k) -> Length { return k >= 63 ? kLengthMax : Length{1} << k; };
  auto base = substitutive_bound(9, pow2, pow2, "thue_morse");
  return BoundFunction([base](Length n) { return n == 1 ? Length{3} : base(n); },
                       "thue_morse: f(1)=3, f(n)=10*2^ceil(log2(n-1))-1");
}

inline Sequence thue_morse(ThueMorseDefinition def = ThueMorseDefinition::recurrence) {
  SequenceInfo info;
  info.certified_bound = thue_morse_bound();
  info.almost_periodic = true;
  const Alphabet bin = Alphabet::binary();
  switch (def) {
    case ThueMorseDefinition::digit_sum:
      info.provenance = "thue_morse(digit_sum)";
      return Sequence::from_index(bin, [](std::size_t n) { return static_cast<Symbol>(std::popcount(n) & 1); },
                                  std::move(info));
    case ThueMorseDefinition::morphic: {
      auto s = morphic(Morphism::endo(bin, {"01", "10"}), 0);
      info.provenance = "thue_morse(morphic)";
      return s.with_info(std::move(info));
    }
    case ThueMorseDefinition::recurrence:
    default: {
      info.provenance = "thue_morse(recurrence)";
      Sequence::Filler f = [](std::size_t begin, std::span<Symbol> out, const Sequence::View& seen) {
        for (std::size_t k = 0; k < out.size(); ++k) {
          const std::size_t i = begin + k;
          if (i == 0) {
            out[k] = 0;
            continue;
          }
          const std::size_t j = i / 2;
          const Symbol v = j < begin ? seen[j] : out[j - begin];
          out[k] = (i & 1) ? static_cast<Symbol>(1 - v) : v;
        }
      };
      return Sequence(bin, std::move(f), std::move(info));
    }
  }
}

// ---------------------------------------------------------------------------
// Mechanical and Sturmian sequences

enum class MechanicalVariant { lower, upper };

inline constexpr unsigned kRefinementBudget = 256;

namespace detail {

/// floor (or ceil) of alpha*m + rho, refining enclosures until unambiguous.
inline std::int64_t mechanical_round(const RealParam& alpha, const RealParam& rho, std::uint64_t m, bool upper,
                                     unsigned& level_hint) {
  const unsigned start = level_hint > 4 ? level_hint - 4 : 0;
  for (unsigned level = start; level < kRefinementBudget; ++level) {
    const Enclosure a = alpha.enclose(level);
    const Enclosure r = rho.enclose(level);
    auto value = [m](const Rational& x, const Rational& y) {
      const Int128 num = Int128(x.num()) * m * y.den() + Int128(y.num()) * x.den();
      const Int128 den = Int128(x.den()) * y.den();
      return std::pair{num, den};
    };
    auto [ln, ld] = value(a.lo, r.lo);
    auto [hn, hd] = value(a.hi, r.hi);
    const std::int64_t lo = upper ? -floor_div(-ln, ld) : floor_div(ln, ld);
    const std::int64_t hi = upper ? -floor_div(-hn, hd) : floor_div(hn, hd);
    if (lo == hi) {
      level_hint = level;
      return lo;
    }
    if (alpha.is_exact() && rho.is_exact()) break;
  }
  throw PrecisionExhausted("mechanical sequence: enclosure did not separate at index " + std::to_string(m));
}

}  // namespace detail

/// s_{α,ρ}(n) = ⌊α(n+1)+ρ⌋ − ⌊αn+ρ⌋ (lower) or the same with ⌈·⌉ (upper).
inline Sequence mechanical(RealParam alpha, RealParam rho, MechanicalVariant variant = MechanicalVariant::lower) {
  if (alpha.is_exact() && (*alpha.exact() < Rational(0) || *alpha.exact() > Rational(1)))
    throw InvalidArgument("mechanical: alpha must lie in [0, 1]");
  if (rho.is_exact() && (*rho.exact() < Rational(0) || *rho.exact() >= Rational(1)))
    throw InvalidArgument("mechanical: rho must lie in [0, 1)");
  const bool upper = variant == MechanicalVariant::upper;
  SequenceInfo info;
  info.provenance = std::string("mechanical(") + alpha.str() + "," + rho.str() + "," + (upper ? "upper" : "lower") + ")";
  struct State {
    unsigned level = 0;
    std::int64_t prev = 0;
    std::size_t next = 0;
  };
  auto st = std::make_shared<State>();
  Sequence::Filler f = [alpha, rho, upper, st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    if (st->next != begin) throw InvalidArgument("mechanical filler out of order");
    if (begin == 0) st->prev = detail::mechanical_round(alpha, rho, 0, upper, st->level);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const std::int64_t cur = detail::mechanical_round(alpha, rho, begin + k + 1, upper, st->level);
      const std::int64_t d = cur - st->prev;
      if (d < 0 || d > 1) throw InvalidArgument("mechanical: slope outside [0, 1]");
      out[k] = static_cast<Symbol>(d);
      st->prev = cur;
    }
    st->next = begin + out.size();
  };
  return Sequence(Alphabet::binary(), std::move(f), std::move(info));
}

/// |φ^k(1)| = F_{k+1} and |φ^k(0)| = F_{k+2} for φ: 0→01, 1→0.
inline Length fibonacci_number(unsigned k) {
  Length a = 0, b = 1;  // F_0, F_1
  for (unsigned i = 0; i < k; ++i) {
    Length c = sat_add(a, b);
    a = b;
    b = c;
  }
  return a;
}

inline BoundFunction fibonacci_bound() {
  return substitutive_bound(
      6, [](unsigned k) { return fibonacci_number(k + 1); }, [](unsigned k) { return fibonacci_number(k + 2); },
      "fibonacci: 7*F_{k+2}-1 with F_{k+1} >= n-1");
}

/// Fixed point of 0→01, 1→0.
inline Sequence fibonacci() {
  auto s = morphic(Morphism::endo(Alphabet::binary(), {"01", "0"}), 0);
  SequenceInfo info;
  info.provenance = "fibonacci";
  info.certified_bound = fibonacci_bound();
  info.almost_periodic = true;
  return s.with_info(std::move(info));
}

// ---------------------------------------------------------------------------
// Block products

inline Word complement(const Word& u) {
  if (u.alphabet().size() != 2) throw InvalidArgument("complement needs a binary alphabet");
  std::vector<Symbol> out(u.letters());
  for (auto& s : out) s = static_cast<Symbol>(1 - s);
  return Word(u.alphabet(), std::move(out));
}

/// u⊗v: for each letter b of v, append u when b = 0 and ū when b = 1.
inline Word block_product_word(const Word& u, const Word& v) {
  if (u.alphabet().size() != 2) throw InvalidArgument("block product needs a binary alphabet");
  require_same_alphabet(u.alphabet(), v.alphabet(), "block_product_word");
  std::vector<Symbol> out;
  out.reserve(u.size() * v.size());
  for (Symbol b : v.letters())
    for (Symbol a : u.letters()) out.push_back(static_cast<Symbol>(a ^ b));
  return Word(u.alphabet(), std::move(out));
}

namespace detail {

/// 2-factors of the fixed point of 0→u, 1→ū (u starts with 0).
inline std::set<std::pair<Symbol, Symbol>> tail_pairs(const Word& u) {
  std::set<std::pair<Symbol, Symbol>> s;
  const Word ub = complement(u);
  auto inner = [&s](const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) s.insert({w[i], w[i + 1]});
  };
  inner(u);
  inner(ub);
  for (bool grown = true; grown;) {
    grown = false;
    for (auto [a, b] : std::set(s)) {
      const Word& wa = a ? ub : u;
      const Word& wb = b ? ub : u;
      grown = s.insert({wa[wa.size() - 1], wb[0]}).second || grown;
    }
  }
  return s;
}

/// Smallest k such that μ^k(0) contains every pair in `pairs`.
inline unsigned covering_level(const Word& u, const std::set<std::pair<Symbol, Symbol>>& pairs) {
  Word w(u.alphabet(), {0});
  for (unsigned k = 0; k < 16; ++k) {
    std::set<std::pair<Symbol, Symbol>> seen;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) seen.insert({w[i], w[i + 1]});
    if (seen == pairs) return k;
    w = block_product_word(u, w);  // μ(w) = u ⊗ w
    if (w.size() > (std::size_t{1} << 22)) break;
  }
  throw InvalidArgument("block product tail does not cover its 2-factors");
}

}  // namespace detail

/// lim u_0 ⊗ u_1 ⊗ ... ⊗ u_n for a lazily supplied block stream. No bound.
inline Sequence block_product_seq(std::function<Word(std::size_t)> blocks, std::string provenance = "block_product") {
  struct State {
    std::function<Word(std::size_t)> blocks;
    std::vector<std::vector<Symbol>> cache;
    std::mutex mutex;
    const std::vector<Symbol>& get(std::size_t k) {
      while (cache.size() <= k) {
        Word w = blocks(cache.size());
        if (w.alphabet().size() != 2) throw InvalidArgument("block product needs a binary alphabet");
        if (w.empty()) throw InvalidArgument("block product blocks must be nonempty");
        if (!cache.empty() && w[0] != 0) throw InvalidArgument("blocks after the first must start with 0");
        cache.push_back(w.letters());
      }
      return cache[k];
    }
  };
  auto st = std::make_shared<State>();
  st->blocks = std::move(blocks);
  st->get(0);
  SequenceInfo info;
  info.provenance = std::move(provenance);
  Sequence::Filler f = [st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    std::lock_guard lock(st->mutex);
    for (std::size_t k = 0; k < out.size(); ++k) {
      std::size_t i = begin + k;
      Symbol v = 0;
      for (std::size_t level = 0;; ++level) {
        const auto& b = st->get(level);
        v ^= b[i % b.size()];
        i /= b.size();
        if (i == 0) break;
      }
      out[k] = v;
    }
  };
  return Sequence(Alphabet::binary(), std::move(f), std::move(info));
}

/// u_0 ⊗ ... ⊗ u_{j} ⊗ u ⊗ u ⊗ ... with head = (u_0, ..., u_j) and a constant
/// tail u. When u contains both letters the result carries a certified bound.
inline Sequence block_product_seq(std::vector<Word> head, const Word& tail) {
  if (tail.empty() || tail[0] != 0) throw InvalidArgument("tail block must start with 0");
  for (std::size_t k = 1; k < head.size(); ++k)
    if (head[k].empty() || head[k][0] != 0) throw InvalidArgument("blocks after the first must start with 0");
  std::string prov = "block_product(";
  for (const auto& h : head) prov += h.str() + ",";
  prov += tail.str() + "^inf)";
  auto seq = block_product_seq([head, tail](std::size_t k) { return k < head.size() ? head[k] : tail; }, prov);
  if (tail.count(0) == 0 || tail.count(1) == 0) return seq;

  std::vector<Length> l{1};
  for (const auto& h : head) l.push_back(sat_mul(l.back(), h.size()));
  // l[m + 1] = |u_0 ⊗ ... ⊗ u_m|; extended geometrically by |tail|.
  const auto pairs = detail::tail_pairs(tail);
  const unsigned k = detail::covering_level(tail, pairs);
  Length r2 = 1;
  for (unsigned i = 0; i < k; ++i) r2 = sat_mul(r2, tail.size());
  r2 = sat_sub(sat_mul(2, r2), 1);
  const std::size_t j = head.size();
  const Length tail_len = tail.size();
  SequenceInfo info = seq.info();
  info.almost_periodic = true;
  info.certified_bound = BoundFunction(
      [l, j, tail_len, r2](Length n) -> Length {
        // Smallest m >= j - 1 with l_m >= n - 1, where l_m = |u_0 ⊗ ... ⊗ u_m|.
        std::size_t m = j == 0 ? 0 : j - 1;
        auto len = [&](std::size_t mm) {
          if (mm + 1 < l.size()) return l[mm + 1];
          Length v = l.back();
          for (std::size_t t = l.size(); t <= mm + 1; ++t) v = sat_mul(v, tail_len);
          return v;
        };
        if (j == 0) {
          // Every block is the tail: x is the fixed point itself, blocks of level m have length |tail|^m.
          Length b = 1;
          while (sat_add(b, 1) < n) b = sat_mul(b, tail_len);
          return std::max(n, sat_sub(sat_mul(r2 + 1, b), 1));
        }
        while (sat_add(len(m), 1) < n) ++m;
        return std::max(n, sat_sub(sat_mul(r2 + 1, len(m)), 1));
      },
      "block_product: (r_z(2)+1)*l_m-1 with r_z(2)=" + std::to_string(r2));
  return seq.with_info(std::move(info));
}

/// Keane's sequence 001 ⊗ 001 ⊗ ...
inline Sequence keane() {
  auto s = block_product_seq({}, Word::parse(Alphabet::binary(), "001"));
  SequenceInfo info = s.info();
  info.provenance = "keane";
  return s.with_info(std::move(info));
}

/// 001 ⊗ 0111 ⊗ 0111 ⊗ ...
inline Sequence alternating_prefix_example() {
  const Alphabet bin = Alphabet::binary();
  auto s = block_product_seq({Word::parse(bin, "001")}, Word::parse(bin, "0111"));
  SequenceInfo info = s.info();
  info.provenance = "alternating_prefix_example";
  return s.with_info(std::move(info));
}

// ---------------------------------------------------------------------------
// Toeplitz sequences

/// Pattern over A ∪ {hole}; holes are std::nullopt.
class ToeplitzPattern {
 public:
  ToeplitzPattern(Alphabet alphabet, std::vector<std::optional<Symbol>> cells)
      : alphabet_(std::move(alphabet)), cells_(std::move(cells)) {
    std::size_t q = 0;
    for (const auto& c : cells_) {
      if (!c) {
        ++q;
      } else if (!alphabet_.contains(*c)) {
        throw InvalidArgument("Toeplitz pattern letter outside alphabet");
      }
    }
    if (q == 0) throw InvalidArgument("Toeplitz pattern without holes; use periodic()");
    if (q == cells_.size()) throw InvalidArgument("Toeplitz pattern needs a non-hole cell");
    if (!cells_.front()) throw InvalidArgument("Toeplitz pattern must not start with a hole");
    holes_ = q;
  }

  /// Parses one cell per character ('?' or "□" is a hole) over the binary alphabet
  /// unless another alphabet is given.
  static ToeplitzPattern parse(std::string_view text, const Alphabet& alphabet = Alphabet::binary()) {
    std::vector<std::optional<Symbol>> cells;
    const std::string_view box = "\xE2\x96\xA1";
    for (std::size_t i = 0; i < text.size();) {
      if (text.substr(i, box.size()) == box) {
        cells.emplace_back(std::nullopt);
        i += box.size();
      } else if (text[i] == '?') {
        cells.emplace_back(std::nullopt);
        ++i;
      } else {
        cells.emplace_back(alphabet.symbol(text.substr(i, 1)));
        ++i;
      }
    }
    return ToeplitzPattern(alphabet, std::move(cells));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<std::optional<Symbol>>& cells() const noexcept { return cells_; }
  std::size_t period() const noexcept { return cells_.size(); }
  std::size_t holes() const noexcept { return holes_; }

  std::string str() const {
    std::string out;
    for (const auto& c : cells_) out += c ? alphabet_.name(*c) : "?";
    return out;
  }

 private:
  Alphabet alphabet_;
  std::vector<std::optional<Symbol>> cells_;
  std::size_t holes_ = 0;
};

/// T(n) = pattern[n mod p] when that cell is filled; otherwise n is the k-th
/// hole overall and T(n) = T(k).
inline Sequence toeplitz(const ToeplitzPattern& pattern) {
  const auto cells = pattern.cells();
  std::vector<std::size_t> rank(cells.size(), 0);
  for (std::size_t i = 0, r = 0; i < cells.size(); ++i) {
    rank[i] = r;
    if (!cells[i]) ++r;
  }
  const std::size_t p = cells.size();
  const std::size_t q = pattern.holes();
  SequenceInfo info;
  info.provenance = "toeplitz(" + pattern.str() + ")";
  return Sequence::from_index(
      pattern.alphabet(),
      [cells, rank, p, q](std::size_t n) {
        while (true) {
          const std::size_t r = n % p;
          if (cells[r]) return *cells[r];
          n = (n / p) * q + rank[r];
        }
      },
      std::move(info));
}

// ---------------------------------------------------------------------------
// Kolakoski and alternating morphisms

/// Alphabet {"1", "2"}; symbol 0 is "1" and symbol 1 is "2".
inline Alphabet kolakoski_alphabet() { return Alphabet({"1", "2"}); }

/// Self-describing run-length sequence 2,2,1,1,2,1,...
inline Sequence kolakoski() {
  struct State {
    std::vector<Symbol> s{1, 1};
    std::size_t run = 1;
  };
  auto st = std::make_shared<State>();
  SequenceInfo info;
  info.provenance = "kolakoski";
  Sequence::Filler f = [st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    while (st->s.size() < begin + out.size()) {
      const Symbol next = static_cast<Symbol>(1 - st->s.back());
      const std::size_t len = st->s[st->run] + 1u;
      for (std::size_t t = 0; t < len; ++t) st->s.push_back(next);
      ++st->run;
    }
    std::copy_n(st->s.begin() + static_cast<std::ptrdiff_t>(begin), out.size(), out.begin());
  };
  return Sequence(kolakoski_alphabet(), std::move(f), std::move(info));
}

/// p morphisms h_0..h_{p-1} over one alphabet and a seed letter.
struct AlternatingMorphismSystem {
  std::vector<Morphism> morphisms;
  Symbol seed = 0;
};

/// H(a_0 a_1 ... a_n) = h_0(a_0) h_1(a_1) ... with h_{i mod p} at position i.
inline Word alternating_apply(const AlternatingMorphismSystem& sys, const Word& u) {
  if (sys.morphisms.empty()) throw InvalidArgument("alternating system needs at least one morphism");
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& im = sys.morphisms[i % sys.morphisms.size()].image(u[i]).letters();
    out.insert(out.end(), im.begin(), im.end());
  }
  return Word(sys.morphisms.front().target(), std::move(out));
}

/// H^∞(seed).
inline Sequence alternating_morphic(const AlternatingMorphismSystem& sys) {
  if (sys.morphisms.empty()) throw InvalidArgument("alternating system needs at least one morphism");
  const Alphabet& a = sys.morphisms.front().source();
  for (const auto& h : sys.morphisms) {
    require_same_alphabet(h.source(), a, "alternating_morphic");
    require_same_alphabet(h.target(), a, "alternating_morphic");
    if (h.erasing()) throw InvalidArgument("alternating morphisms must be nonerasing");
  }
  detail::check_prolongable(sys.morphisms, sys.seed);
  SequenceInfo info;
  info.provenance = "alternating_morphic(";
  for (std::size_t i = 0; i < sys.morphisms.size(); ++i) info.provenance += (i ? ";" : "") + sys.morphisms[i].str();
  info.provenance += ";" + a.name(sys.seed) + ")";
  return Sequence(a, detail::fixed_point_filler(sys.morphisms, sys.seed, {}), std::move(info));
}

/// h_0: 1→2, 2→22 and h_1: 1→1, 2→11 with seed 2.
inline AlternatingMorphismSystem kolakoski_system() {
  const Alphabet a = kolakoski_alphabet();
  auto w = [&a](std::string_view s) { return Word::parse(a, s); };
  return {{Morphism(a, a, {w("2"), w("22")}), Morphism(a, a, {w("1"), w("11")})}, a.symbol("2")};
}

// ---------------------------------------------------------------------------
// Progression rewriting

/// Rewrites x[i·n_{k+1}, i·n_{k+1}+n_k-1] := x[0, n_k-1] for every i >= 1 at
/// step k = 0, 1, .... levels(k) returns n_k; each must divide the next.
inline Sequence progression_rewrite(const Sequence& base, std::function<Length(std::size_t)> levels,
                                    std::string levels_name = "levels") {
  struct State {
    std::function<Length(std::size_t)> levels;
    std::vector<Length> n;
    std::mutex mutex;
    Length at(std::size_t k) {
      std::lock_guard lock(mutex);
      while (n.size() <= k) {
        const Length v = levels(n.size());
        if (v == 0) throw InvalidArgument("progression levels must be positive");
        if (!n.empty() && (v <= n.back() || v % n.back() != 0))
          throw InvalidArgument("progression levels must form a strictly increasing divisor chain");
        n.push_back(v);
      }
      return n[k];
    }
  };
  auto st = std::make_shared<State>();
  st->levels = std::move(levels);
  st->at(1);
  SequenceInfo info;
  info.provenance = "progression_rewrite(" + base.provenance() + "," + levels_name + ")";
  info.almost_periodic = true;
  info.prefix_bound = BoundFunction(
      [st](Length n) {
        std::size_t k = 0;
        while (st->at(k) < n) ++k;
        return sat_mul(2, st->at(k + 1));
      },
      "progression_rewrite: 2*n_{k+1} for n <= n_k (prefix regulator only)");
  Sequence::Filler f = [st, base](std::size_t begin, std::span<Symbol> out, const Sequence::View& seen) {
    const std::size_t end = begin + out.size();
    std::vector<Symbol> raw = base.symbols(begin, end);
    for (std::size_t i = begin; i < end; ++i) {
      // Last step that writes position i, if any.
      std::optional<Length> src;
      for (std::size_t k = 0; st->at(k + 1) <= i; ++k)
        if (i % st->at(k + 1) < st->at(k)) src = i % st->at(k + 1);
      if (!src) {
        out[i - begin] = raw[i - begin];
      } else {
        const std::size_t j = static_cast<std::size_t>(*src);
        out[i - begin] = j < begin ? seen[j] : out[j - begin];
      }
    }
  };
  return Sequence(base.alphabet(), std::move(f), std::move(info));
}

// ---------------------------------------------------------------------------
// Miscellaneous

/// x_k = φ^∞(0) with (φ(i))(j) = i + j(j+1)/2 mod k.
inline Morphism aperiodicity_morphism(std::size_t k) {
  if (k < 3) throw InvalidArgument("aperiodicity witness needs k >= 3");
  const Alphabet a = Alphabet::digits(k);
  std::vector<Word> images;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Symbol> w;
    for (std::size_t j = 0; j < k; ++j) w.push_back(static_cast<Symbol>((i + j * (j + 1) / 2) % k));
    images.emplace_back(a, std::move(w));
  }
  return Morphism(a, a, std::move(images));
}

inline Sequence aperiodicity_witness(std::size_t k) {
  auto s = morphic(aperiodicity_morphism(k), 0);
  SequenceInfo info;
  info.provenance = "aperiodicity_witness(" + std::to_string(k) + ")";
  return s.with_info(std::move(info));
}

/// u·x.
inline Sequence prepend(const Word& u, const Sequence& x) {
  require_same_alphabet(u.alphabet(), x.alphabet(), "prepend");
  SequenceInfo info;
  info.provenance = "prepend(" + u.str() + "," + x.provenance() + ")";
  auto head = u.letters();
  Sequence::Filler f = [head, x](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    const std::size_t end = begin + out.size();
    std::size_t k = 0;
    for (std::size_t i = begin; i < std::min(end, head.size()); ++i) out[k++] = head[i];
    if (k < out.size()) {
      const std::size_t from = std::max(begin, head.size()) - head.size();
      auto rest = x.symbols(from, from + (out.size() - k));
      std::copy(rest.begin(), rest.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
    }
  };
  return Sequence(x.alphabet(), std::move(f), std::move(info));
}

/// Independent uniform letters from a seeded Mersenne Twister.
inline Sequence random_sequence(const Alphabet& a, std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  SequenceInfo info;
  info.provenance = "random(" + std::to_string(a.size()) + "," + std::to_string(seed) + ")";
  const std::size_t k = a.size();
  Sequence::Filler f = [rng, k](std::size_t, std::span<Symbol> out, const Sequence::View&) {
    std::uniform_int_distribution<std::size_t> dist(0, k - 1);
    for (auto& s : out) s = static_cast<Symbol>(dist(*rng));
  };
  return Sequence(a, std::move(f), std::move(info));
}

}  // namespace apseq
