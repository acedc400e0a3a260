#pragma once

// Level-indexed block schemes ⟨B_n, C_n, l_n⟩ (GAP) and ⟨B_n, l_n⟩ (AP),
// their validation, and generation of sequences from them.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apseq/core.hpp"

namespace apseq {

enum class SchemeKind { gap, ap };

/// One level of a scheme. C lists pairs (i, j) meaning B[i]B[j]. Explicit C
/// words that do not split into two B words are kept in malformed_C so that
/// validation can report them.
struct SchemeLevel {
  Length l = 0;
  std::vector<Word> B;
  std::vector<std::pair<std::size_t, std::size_t>> C;
  std::vector<Word> malformed_C;

  std::optional<std::size_t> index_of(const Word& w) const {
    for (std::size_t i = 0; i < B.size(); ++i)
      if (B[i] == w) return i;
    return std::nullopt;
  }

  Word c_word(std::size_t k) const { return B[C[k].first] + B[C[k].second]; }

  /// Builds a level from explicit C words.
  static SchemeLevel make(Length l, std::vector<Word> B, const std::vector<Word>& C_words) {
    SchemeLevel lv;
    lv.l = l;
    lv.B = std::move(B);
    for (const auto& w : C_words) {
      std::optional<std::size_t> a, b;
      if (w.size() % 2 == 0) {
        a = lv.index_of(w.sub(0, w.size() / 2));
        b = lv.index_of(w.sub(w.size() / 2, w.size() / 2));
      }
      if (a && b)
        lv.C.emplace_back(*a, *b);
      else
        lv.malformed_C.push_back(w);
    }
    return lv;
  }
};

class Scheme {
 public:
  using LevelFn = std::function<SchemeLevel(std::size_t)>;

  /// levels(n) must be deterministic. max_depth = 0 means unbounded.
  Scheme(SchemeKind kind, Alphabet alphabet, LevelFn levels, std::string name, Word lead = Word(),
         std::size_t max_depth = 0)
      : kind_(kind), alphabet_(std::move(alphabet)), name_(std::move(name)), max_depth_(max_depth) {
    st_ = std::make_shared<State>();
    st_->fn = std::move(levels);
    lead_ = lead.alphabet() == alphabet_ ? lead : Word(alphabet_);
    if (!lead.empty()) require_same_alphabet(lead.alphabet(), alphabet_, "scheme lead");
  }

  /// Finite explicit scheme with levels 0 .. levels.size()-1.
  static Scheme explicit_levels(SchemeKind kind, Alphabet alphabet, std::vector<SchemeLevel> levels,
                                std::string name = "explicit", Word lead = Word()) {
    const std::size_t depth = levels.size();
    auto shared = std::make_shared<std::vector<SchemeLevel>>(std::move(levels));
    return Scheme(
        kind, std::move(alphabet), [shared](std::size_t n) { return shared->at(n); }, std::move(name),
        std::move(lead), depth);
  }

  /// Scheme whose level-n words W_n(c) are indexed by letters c of an index
  /// alphabet: W_0(c) = base[c] and W_{n+1}(c) = W_n(c_1)...W_n(c_k) for
  /// σ(c) = c_1...c_k. B_n collects the W_n(c); for GAP schemes C_n collects
  /// W_n(c)W_n(d) for every pair cd occurring inside some σ(e).
  static Scheme self_similar(SchemeKind kind, Alphabet alphabet, std::vector<Word> base,
                             std::vector<std::vector<std::size_t>> sigma, std::string name = "self_similar",
                             Word lead = Word()) {
    const std::size_t k = base.size();
    if (k == 0 || sigma.size() != k) throw InvalidArgument("self-similar scheme needs one base word and rule per index");
    for (const auto& w : base) {
      require_same_alphabet(w.alphabet(), alphabet, "self-similar base");
      if (w.size() != base[0].size() || w.empty()) throw InvalidArgument("base words must share a positive length");
    }
    for (const auto& r : sigma) {
      if (r.size() != sigma[0].size() || r.size() < 2) throw InvalidArgument("index substitution must be uniform, length >= 2");
      for (auto c : r)
        if (c >= k) throw InvalidArgument("index substitution letter out of range");
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& r : sigma)
      for (std::size_t i = 0; i + 1 < r.size(); ++i) pairs.insert({r[i], r[i + 1]});
    struct Words {
      std::vector<std::vector<Word>> by_level;
      std::mutex mutex;
    };
    auto words = std::make_shared<Words>();
    words->by_level.push_back(std::move(base));
    LevelFn fn = [words, sigma, pairs, kind](std::size_t n) {
      std::unique_lock lock(words->mutex);
      while (words->by_level.size() <= n) {
        const auto& prev = words->by_level.back();
        std::vector<Word> next;
        for (const auto& r : sigma) {
          Word w(prev[0].alphabet());
          for (auto c : r) w.append(prev[c]);
          next.push_back(std::move(w));
        }
        words->by_level.push_back(std::move(next));
      }
      const std::vector<Word> W = words->by_level[n];
      lock.unlock();
      SchemeLevel lv;
      lv.l = W[0].size();
      std::vector<std::size_t> slot(W.size());
      for (std::size_t c = 0; c < W.size(); ++c) {
        auto at = lv.index_of(W[c]);
        if (!at) {
          at = lv.B.size();
          lv.B.push_back(W[c]);
        }
        slot[c] = *at;
      }
      if (kind == SchemeKind::gap) {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (auto [c, d] : pairs)
          if (seen.insert({slot[c], slot[d]}).second) lv.C.emplace_back(slot[c], slot[d]);
      }
      return lv;
    };
    return Scheme(kind, std::move(alphabet), std::move(fn), std::move(name), std::move(lead));
  }

  SchemeKind kind() const noexcept { return kind_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::string& name() const noexcept { return name_; }
  const Word& lead() const noexcept { return lead_; }
  /// Number of defined levels, 0 when unbounded.
  std::size_t max_depth() const noexcept { return max_depth_; }
  bool has_level(std::size_t n) const noexcept { return max_depth_ == 0 || n < max_depth_; }

  const SchemeLevel& level(std::size_t n) const {
    if (!has_level(n)) throw InvalidArgument("scheme '" + name_ + "' has no level " + std::to_string(n));
    std::lock_guard lock(st_->mutex);
    while (st_->cache.size() <= n) st_->cache.push_back(std::make_unique<SchemeLevel>(st_->fn(st_->cache.size())));
    return *st_->cache[n];
  }

 private:
  struct State {
    LevelFn fn;
    std::vector<std::unique_ptr<SchemeLevel>> cache;
    std::mutex mutex;
  };
  SchemeKind kind_;
  Alphabet alphabet_;
  std::string name_;
  Word lead_;
  std::size_t max_depth_;
  std::shared_ptr<State> st_;
};

/// AP scheme B_n = {a_n, ā_n} with a_0 = 0, a_{n+1} = a_n ā_n.
inline Scheme thue_morse_scheme() {
  const Alphabet bin = Alphabet::binary();
  return Scheme::self_similar(SchemeKind::ap, bin, {Word::parse(bin, "0"), Word::parse(bin, "1")}, {{0, 1}, {1, 0}},
                              "thue_morse_scheme");
}

// ---------------------------------------------------------------------------
// Validation

struct SchemeViolation {
  std::size_t level = 0;
  int condition = 0;
  std::vector<Word> words;
  std::string message;
};

/// Empty when the scheme satisfies its conditions through `depth` levels.
struct SchemeReport {
  std::optional<SchemeViolation> violation;
  bool ok() const noexcept { return !violation; }
};

namespace detail {

/// Splits w into blocks of length l and maps each to its B index.
inline std::optional<std::vector<std::size_t>> split_blocks(const Word& w, const SchemeLevel& lv) {
  if (lv.l == 0 || w.size() % lv.l != 0) return std::nullopt;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.size(); i += lv.l) {
    auto at = lv.index_of(w.sub(i, lv.l));
    if (!at) return std::nullopt;
    out.push_back(*at);
  }
  return out;
}

}  // namespace detail

/// Checks levels 0..depth: conditions (1) and (2) on every level, (3) and (4)
/// between consecutive levels. AP schemes check (1) and the containment rule
/// (reported as condition 3).
inline SchemeReport scheme_validate(const Scheme& s, std::size_t depth) {
  if (depth < 1) throw InvalidArgument("validation depth must be at least 1");
  auto fail = [](std::size_t n, int cond, std::vector<Word> ws, std::string msg) {
    return SchemeReport{SchemeViolation{n, cond, std::move(ws), std::move(msg)}};
  };
  const bool gap = s.kind() == SchemeKind::gap;
  for (std::size_t n = 0; n <= depth && s.has_level(n); ++n) {
    const SchemeLevel& lv = s.level(n);
    if (lv.B.empty()) return fail(n, 1, {}, "B_n is empty");
    for (const auto& w : lv.B)
      if (w.size() != lv.l) return fail(n, 1, {w}, "word length differs from l_n");
    if (gap) {
      if (!lv.malformed_C.empty()) return fail(n, 2, lv.malformed_C, "C_n word is not a product of two B_n words");
      if (lv.C.empty()) return fail(n, 2, {}, "C_n is empty");
      std::vector<bool> first(lv.B.size(), false), second(lv.B.size(), false);
      for (auto [a, b] : lv.C) first[a] = second[b] = true;
      for (std::size_t i = 0; i < lv.B.size(); ++i) {
        if (!first[i]) return fail(n, 2, {lv.B[i]}, "B_n word never first in a C_n word");
        if (!second[i]) return fail(n, 2, {lv.B[i]}, "B_n word never second in a C_n word");
      }
    }
    if (n == depth || !s.has_level(n + 1)) continue;
    const SchemeLevel& up = s.level(n + 1);
    for (const auto& w : up.B) {
      auto blocks = detail::split_blocks(w, lv);
      if (!blocks) return fail(n, 3, {w}, "B_{n+1} word is not a concatenation of B_n words");
      if (gap) {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t i = 0; i + 1 < blocks->size(); ++i) seen.insert({(*blocks)[i], (*blocks)[i + 1]});
        std::set<std::pair<std::size_t, std::size_t>> allowed(lv.C.begin(), lv.C.end());
        for (const auto& p : seen)
          if (!allowed.count(p)) return fail(n, 3, {w, lv.B[p.first] + lv.B[p.second]}, "adjacent pair not in C_n");
        for (const auto& p : allowed)
          if (!seen.count(p)) return fail(n, 3, {w, lv.B[p.first] + lv.B[p.second]}, "C_n word not realized");
      } else {
        std::set<std::size_t> seen(blocks->begin(), blocks->end());
        for (std::size_t i = 0; i < lv.B.size(); ++i)
          if (!seen.count(i)) return fail(n, 3, {w, lv.B[i]}, "B_n word missing from B_{n+1} word");
      }
    }
    if (gap) {
      std::set<std::pair<std::size_t, std::size_t>> allowed(lv.C.begin(), lv.C.end());
      for (std::size_t k = 0; k < up.C.size(); ++k) {
        auto v = detail::split_blocks(up.B[up.C[k].first], lv);
        auto w = detail::split_blocks(up.B[up.C[k].second], lv);
        if (!v || !w) continue;  // reported under condition 3
        if (!allowed.count({v->back(), w->front()}))
          return fail(n, 4, {up.c_word(k)}, "straddling pair not in C_n");
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Generation

enum class GenerationMode { gap, ap };

/// Orders the candidate B_{n+1} indices; the first feasible one is taken.
struct ChoicePolicy {
  enum class Kind { least, random, callback } kind = Kind::least;
  std::uint64_t seed = 0;
  std::function<void(std::size_t level, std::vector<std::size_t>& candidates, const SchemeLevel& lv)> reorder;

  static ChoicePolicy least() { return {}; }
  static ChoicePolicy random(std::uint64_t seed) { return {Kind::random, seed, {}}; }
  static ChoicePolicy callback(decltype(reorder) fn) { return {Kind::callback, 0, std::move(fn)}; }
};

namespace detail {

class SchemeChain {
 public:
  SchemeChain(Scheme s, ChoicePolicy policy, std::size_t lookahead)
      : scheme_(std::move(s)), policy_(std::move(policy)), rng_(policy_.seed), lookahead_(lookahead) {}

  /// Extends the chain until the chosen word has length >= need and returns it.
  /// Chosen words are final: backtracking happens only inside the lookahead.
  const Word& word_covering(Length need) {
    if (chain_.empty()) grow();
    while (scheme_.level(chain_.size() - 1).l < need) grow();
    return scheme_.level(chain_.size() - 1).B[chain_.back()];
  }

  std::size_t depth() const noexcept { return chain_.size(); }

 private:
  std::vector<std::size_t> candidates(std::size_t n) {
    const SchemeLevel& lv = scheme_.level(n);
    std::vector<std::size_t> out;
    if (n == 0) {
      for (std::size_t i = 0; i < lv.B.size(); ++i) out.push_back(i);
    } else {
      const Word& prev = scheme_.level(n - 1).B[chain_[n - 1]];
      for (std::size_t i = 0; i < lv.B.size(); ++i)
        if (lv.B[i].size() >= prev.size() &&
            std::equal(prev.letters().begin(), prev.letters().end(), lv.B[i].letters().begin()))
          out.push_back(i);
    }
    std::sort(out.begin(), out.end(),
              [&lv](std::size_t a, std::size_t b) { return lv.B[a].letters() < lv.B[b].letters(); });
    if (policy_.kind == ChoicePolicy::Kind::random) std::shuffle(out.begin(), out.end(), rng_);
    if (policy_.kind == ChoicePolicy::Kind::callback && policy_.reorder) policy_.reorder(n, out, lv);
    return out;
  }

  /// True when the top of the chain extends through `depth` further levels.
  bool extendable(std::size_t depth) {
    if (depth == 0 || !scheme_.has_level(chain_.size())) return true;
    for (auto c : candidates(chain_.size())) {
      chain_.push_back(c);
      const bool ok = extendable(depth - 1);
      chain_.pop_back();
      if (ok) return true;
    }
    return false;
  }

  void grow() {
    const std::size_t target = chain_.size();
    if (!scheme_.has_level(target))
      throw GenerationStuck(target, "scheme '" + scheme_.name() + "' defines no further level");
    for (auto c : candidates(target)) {
      chain_.push_back(c);
      if (extendable(lookahead_)) return;
      chain_.pop_back();
    }
    throw GenerationStuck(target, "no B_" + std::to_string(target) + " word extends the chosen prefix");
  }

  Scheme scheme_;
  ChoicePolicy policy_;
  std::mt19937_64 rng_;
  std::size_t lookahead_;
  std::vector<std::size_t> chain_;
};

}  // namespace detail

/// Certified bound for GAP-generated sequences: |lead| + 2·l_{m+1} with m
/// minimal such that l_m >= n.
inline BoundFunction scheme_bound(const Scheme& s, Length lead) {
  return BoundFunction(
      [s, lead](Length n) {
        std::size_t m = 0;
        while (s.level(m).l < n) ++m;
        return std::max(n, sat_add(lead, sat_mul(2, s.level(m + 1).l)));
      },
      "scheme: |lead| + 2*l_{m+1} with l_m >= n");
}

/// Sequence generated by the scheme. GAP mode prefixes the scheme's lead word
/// (k_n = |lead|); AP mode uses k_n = 0. The generated part is lim w_n with
/// w_n ∈ B_n and w_{n+1} starting with w_n.
inline Sequence scheme_generate(const Scheme& s, GenerationMode mode = GenerationMode::gap,
                                ChoicePolicy policy = ChoicePolicy::least(), std::size_t lookahead = 2) {
  if (s.kind() == SchemeKind::ap && mode == GenerationMode::gap)
    throw InvalidArgument("AP schemes generate in AP mode only");
  const Word lead = mode == GenerationMode::gap ? s.lead() : Word(s.alphabet());
  auto chain = std::make_shared<detail::SchemeChain>(s, std::move(policy), lookahead);
  chain->word_covering(1);  // surfaces dead ends at construction time
  SequenceInfo info;
  info.provenance = "scheme(" + s.name() + (mode == GenerationMode::gap ? ",gap" : ",ap") + ")";
  if (s.kind() == SchemeKind::gap && s.max_depth() == 0) {
    info.certified_bound = scheme_bound(s, lead.size());
    info.almost_periodic = lead.empty();
  }
  auto head = lead.letters();
  Sequence::Filler f = [chain, head](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    const std::size_t end = begin + out.size();
    const Word* w = nullptr;
    if (end > head.size()) w = &chain->word_covering(end - head.size());
    for (std::size_t i = begin; i < end; ++i)
      out[i - begin] = i < head.size() ? head[i] : (*w)[i - head.size()];
  };
  return Sequence(s.alphabet(), std::move(f), std::move(info));
}

}  // namespace apseq
