#pragma once

// Alphabets, finite words and lazily evaluated infinite sequences.
//
// Indexing is 0-based everywhere. A Segment [i, j] is inclusive on both ends,
// so segment(x, {i, j}) has j - i + 1 letters.

#include <algorithm>
#include <atomic>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apseq/errors.hpp"

namespace apseq {

using Symbol = std::uint16_t;
using Length = std::uint64_t;

inline constexpr Length kLengthMax = std::numeric_limits<Length>::max();

constexpr Length sat_add(Length a, Length b) noexcept {
  return a > kLengthMax - b ? kLengthMax : a + b;
}

constexpr Length sat_sub(Length a, Length b) noexcept { return a < b ? 0 : a - b; }

constexpr Length sat_mul(Length a, Length b) noexcept {
  if (a == 0 || b == 0) return 0;
  return a > kLengthMax / b ? kLengthMax : a * b;
}

// ---------------------------------------------------------------------------
// Alphabet

/// Ordered finite set of named symbols. Copies share the underlying table.
class Alphabet {
 public:
  Alphabet() : Alphabet(std::vector<std::string>{"0"}) {}

  explicit Alphabet(std::vector<std::string> names) {
    if (names.empty()) throw InvalidArgument("alphabet must contain at least one symbol");
    if (names.size() > std::numeric_limits<Symbol>::max())
      throw InvalidArgument("alphabet too large");
    auto data = std::make_shared<Data>();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw InvalidArgument("empty symbol name");
      if (!data->index.emplace(names[i], static_cast<Symbol>(i)).second)
        throw InvalidArgument("duplicate symbol '" + names[i] + "'");
    }
    data->names = std::move(names);
    data->single_char = std::all_of(data->names.begin(), data->names.end(),
                                    [](const std::string& s) { return s.size() == 1; });
    data_ = std::move(data);
  }

  static Alphabet binary() { return Alphabet({"0", "1"}); }

  /// Symbols "0", "1", ..., "k-1".
  static Alphabet digits(std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(std::to_string(i));
    return Alphabet(std::move(names));
  }

  /// One symbol per character of `chars`, in order.
  static Alphabet from_chars(std::string_view chars) {
    std::vector<std::string> names;
    for (char c : chars) names.emplace_back(1, c);
    return Alphabet(std::move(names));
  }

  /// Pair alphabet A x B with names "a:b", ordered lexicographically by (a, b).
  static Alphabet product(const Alphabet& a, const Alphabet& b) {
    std::vector<std::string> names;
    names.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        names.push_back(a.name(static_cast<Symbol>(i)) + ":" + b.name(static_cast<Symbol>(j)));
    return Alphabet(std::move(names));
  }

  std::size_t size() const noexcept { return data_->names.size(); }
  const std::string& name(Symbol s) const { return data_->names.at(s); }
  const std::vector<std::string>& names() const noexcept { return data_->names; }
  bool single_char_names() const noexcept { return data_->single_char; }
  bool contains(Symbol s) const noexcept { return s < size(); }

  std::optional<Symbol> find(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  Symbol symbol(std::string_view name) const {
    if (auto s = find(name)) return *s;
    throw InvalidArgument("symbol '" + std::string(name) + "' not in alphabet");
  }

  /// Bits needed to pack one symbol.
  unsigned bits() const noexcept {
    unsigned b = 1;
    while ((std::size_t{1} << b) < size()) ++b;
    return b;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.data_ == b.data_ || a.data_->names == b.data_->names;
  }

 private:
  struct Data {
    std::vector<std::string> names;
    std::map<std::string, Symbol> index;
    bool single_char = true;
  };
  std::shared_ptr<const Data> data_;
};

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b, std::string_view what) {
  if (!(a == b)) throw AlphabetMismatch(std::string(what) + ": alphabets differ");
}

// ---------------------------------------------------------------------------
// Word

/// Finite word over an alphabet. The empty word is Λ.
class Word {
 public:
  Word() = default;
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, std::vector<Symbol> letters)
      : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
    for (Symbol s : letters_)
      if (!alphabet_.contains(s)) throw InvalidArgument("letter outside alphabet");
  }

  /// Parses `text` letter by letter. Single-character alphabets read one char
  /// per letter; otherwise letters are comma separated.
  static Word parse(const Alphabet& alphabet, std::string_view text) {
    std::vector<Symbol> letters;
    if (alphabet.single_char_names()) {
      for (char c : text) letters.push_back(alphabet.symbol(std::string_view(&c, 1)));
    } else if (!text.empty()) {
      std::size_t start = 0;
      while (true) {
        auto comma = text.find(',', start);
        letters.push_back(alphabet.symbol(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    return Word(alphabet, std::move(letters));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Symbol>& letters() const noexcept { return letters_; }
  std::span<const Symbol> span() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Symbol operator[](std::size_t i) const { return letters_[i]; }

  /// |u|_a
  std::size_t count(Symbol a) const {
    return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), a));
  }

  Word sub(std::size_t pos, std::size_t len) const {
    if (pos > size()) throw InvalidArgument("Word::sub out of range");
    len = std::min(len, size() - pos);
    return Word(alphabet_, std::vector<Symbol>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                               letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
  }

  void push_back(Symbol s) {
    if (!alphabet_.contains(s)) throw InvalidArgument("letter outside alphabet");
    letters_.push_back(s);
  }

  void append(const Word& w) {
    require_same_alphabet(alphabet_, w.alphabet_, "Word::append");
    letters_.insert(letters_.end(), w.letters_.begin(), w.letters_.end());
  }

  friend Word operator+(Word a, const Word& b) {
    a.append(b);
    return a;
  }

  /// Concatenated names when all names are one character, comma separated otherwise.
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (!alphabet_.single_char_names() && i > 0) out += ',';
      out += alphabet_.name(letters_[i]);
    }
    return out;
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.letters_ == b.letters_ && a.alphabet_ == b.alphabet_;
  }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> letters_;
};

/// Inclusive index range [i, j].
struct Segment {
  Length i = 0;
  Length j = 0;

  Segment() = default;
  Segment(Length first, Length last) : i(first), j(last) {
    if (first > last) throw InvalidArgument("segment requires i <= j");
  }
  Length length() const noexcept { return j - i + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// ---------------------------------------------------------------------------
// Bound functions

/// A total function n -> l asserted (by whoever built it) to dominate a
/// regulator. Provenance records which construction produced it.
class BoundFunction {
 public:
  BoundFunction() = default;
  BoundFunction(std::function<Length(Length)> fn, std::string provenance)
      : fn_(std::move(fn)), provenance_(std::move(provenance)) {}

  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

  Length operator()(Length n) const {
    Length l = fn_(n);
    if (l < n) throw InvalidArgument("bound function '" + provenance_ + "' returned l < n");
    return l;
  }

  const std::string& provenance() const noexcept { return provenance_; }

 private:
  std::function<Length(Length)> fn_;
  std::string provenance_;
};

// ---------------------------------------------------------------------------
// Sequence

inline constexpr Length kDefaultHorizonCap = 10'000'000;

namespace detail {
struct SequenceCache;

inline std::atomic<Length>& horizon_cap_storage() {
  static std::atomic<Length> cap{kDefaultHorizonCap};
  return cap;
}
}  // namespace detail

/// Horizon cap applied to sequences constructed after the call.
inline void set_default_horizon_cap(Length cap) { detail::horizon_cap_storage().store(cap); }
inline Length default_horizon_cap() { return detail::horizon_cap_storage().load(); }

/// Metadata carried alongside a sequence. None of it is inferred: the
/// constructing generator asserts it.
struct SequenceInfo {
  std::string provenance;
  std::optional<BoundFunction> certified_bound;
  /// Bound on the prefix regulator r'_x only (not a full regulator bound).
  std::optional<BoundFunction> prefix_bound;
  /// Set when the constructor knows the sequence is almost periodic.
  bool almost_periodic = false;
  /// Exact period when the sequence is known to be purely periodic.
  std::optional<Length> period;
};

/// Immutable infinite sequence over a finite alphabet, evaluated lazily into a
/// page-grown memo cache. Copies share the cache. Concurrent readers are safe.
class Sequence {
 public:
  static constexpr std::size_t kPage = std::size_t{1} << 16;

  /// Read access to the already-materialized prefix, handed to fillers.
  class View {
   public:
    Symbol operator[](std::size_t i) const;
    std::size_t size() const noexcept { return size_; }

   private:
    friend class Sequence;
    View(const detail::SequenceCache* cache, std::size_t size) : cache_(cache), size_(size) {}
    const detail::SequenceCache* cache_;
    std::size_t size_;
  };

  /// Fills out[k] = x(begin + k). Calls arrive in increasing, contiguous order
  /// (begin equals the number of symbols produced so far), under a lock.
  using Filler = std::function<void(std::size_t begin, std::span<Symbol> out, const View& produced)>;
  using IndexOracle = std::function<Symbol(std::size_t)>;

  /// `limit` lowers the horizon cap for sequences known only up to a length.
  Sequence(Alphabet alphabet, Filler filler, SequenceInfo info, std::optional<Length> limit = std::nullopt);

  static Sequence from_index(Alphabet alphabet, IndexOracle oracle, SequenceInfo info) {
    Filler f = [oracle = std::move(oracle)](std::size_t begin, std::span<Symbol> out, const View&) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = oracle(begin + k);
    };
    return Sequence(std::move(alphabet), std::move(f), std::move(info));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const SequenceInfo& info() const noexcept { return info_; }
  const std::string& provenance() const noexcept { return info_.provenance; }
  const std::optional<BoundFunction>& certified_bound() const noexcept { return info_.certified_bound; }
  Length horizon_cap() const noexcept;

  /// Same symbols and cache, different metadata.
  Sequence with_info(SequenceInfo info) const {
    Sequence s = *this;
    s.info_ = std::move(info);
    return s;
  }

  /// x(i).
  Symbol at(Length i) const {
    ensure(i + 1);
    return cache_at(static_cast<std::size_t>(i));
  }
  Symbol operator()(Length i) const { return at(i); }

  /// Materializes at least n symbols.
  void ensure(Length n) const;
  Length materialized() const noexcept;

  /// Copies x[begin, end).
  std::vector<Symbol> symbols(Length begin, Length end) const {
    if (end <= begin) return {};
    ensure(end);
    std::vector<Symbol> out(static_cast<std::size_t>(end - begin));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = cache_at(static_cast<std::size_t>(begin) + k);
    return out;
  }

  /// Number of cached pages (for tests of the memo policy).
  std::size_t cached_pages() const noexcept;

 private:
  Symbol cache_at(std::size_t i) const;

  Alphabet alphabet_;
  std::shared_ptr<detail::SequenceCache> cache_;
  SequenceInfo info_;
};

namespace detail {
struct SequenceCache {
  SequenceCache(Sequence::Filler f, Length cap_)
      : filler(std::move(f)), cap(cap_), pages((cap_ + Sequence::kPage - 1) / Sequence::kPage) {}

  Sequence::Filler filler;
  Length cap;
  std::mutex mutex;
  std::atomic<std::size_t> length{0};
  std::vector<std::unique_ptr<Symbol[]>> pages;
};
}  // namespace detail

inline Symbol Sequence::View::operator[](std::size_t i) const { return cache_->pages[i / kPage][i % kPage]; }

inline Sequence::Sequence(Alphabet alphabet, Filler filler, SequenceInfo info, std::optional<Length> limit)
    : alphabet_(std::move(alphabet)),
      cache_(std::make_shared<detail::SequenceCache>(
          std::move(filler), limit ? std::min(*limit, default_horizon_cap()) : default_horizon_cap())),
      info_(std::move(info)) {}

inline Length Sequence::horizon_cap() const noexcept { return cache_->cap; }
inline Length Sequence::materialized() const noexcept { return cache_->length.load(std::memory_order_acquire); }

inline std::size_t Sequence::cached_pages() const noexcept {
  return (materialized() + kPage - 1) / kPage;
}

inline Symbol Sequence::cache_at(std::size_t i) const { return cache_->pages[i / kPage][i % kPage]; }

inline void Sequence::ensure(Length n) const {
  detail::SequenceCache& c = *cache_;
  if (n <= c.length.load(std::memory_order_acquire)) return;
  if (n > c.cap) throw HorizonExhausted(n, c.cap);
  std::lock_guard lock(c.mutex);
  std::size_t have = c.length.load(std::memory_order_relaxed);
  // Grow to the end of the page holding index n - 1.
  const std::size_t target =
      static_cast<std::size_t>(std::min<Length>(c.cap, (n + kPage - 1) / kPage * kPage));
  while (have < target) {
    const std::size_t page = have / kPage;
    const std::size_t offset = have % kPage;
    if (!c.pages[page]) c.pages[page] = std::make_unique<Symbol[]>(kPage);
    const std::size_t count = std::min(kPage - offset, target - have);
    std::span<Symbol> out(c.pages[page].get() + offset, count);
    c.filler(have, out, View(&c, have));
    for (Symbol s : out)
      if (!alphabet_.contains(s)) throw InvalidArgument("generator produced a symbol outside its alphabet");
    have += count;
    c.length.store(have, std::memory_order_release);
  }
}

// ---------------------------------------------------------------------------
// Basic operations

/// x[0, n-1]; n = 0 gives Λ.
inline Word prefix(const Sequence& x, Length n) { return Word(x.alphabet(), x.symbols(0, n)); }

/// x(i) x(i+1) ... x(j).
inline Word segment(const Sequence& x, Segment s) { return Word(x.alphabet(), x.symbols(s.i, s.j + 1)); }

/// Assigns an id to every length-n window of `text` so that equal windows get
/// equal ids. Ids are dense and numbered in order of first occurrence.
class FactorIndex {
 public:
  FactorIndex(std::span<const Symbol> text, std::size_t n, unsigned bits_per_symbol) : n_(n) {
    if (n == 0) throw InvalidArgument("factor length must be positive");
    if (text.size() < n) return;
    const std::size_t windows = text.size() - n + 1;
    ids_.resize(windows);
    if (static_cast<std::size_t>(bits_per_symbol) * n <= 64) {
      const std::uint64_t mask =
          bits_per_symbol * n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bits_per_symbol * n)) - 1);
      std::unordered_map<std::uint64_t, std::uint32_t> table;
      table.reserve(1024);
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < n - 1; ++i) key = (key << bits_per_symbol) | text[i];
      for (std::size_t i = 0; i < windows; ++i) {
        key = ((key << bits_per_symbol) | text[i + n - 1]) & mask;
        auto [it, fresh] = table.try_emplace(key, static_cast<std::uint32_t>(first_.size()));
        if (fresh) first_.push_back(i);
        ids_[i] = it->second;
      }
    } else {
      // Polynomial rolling hash, collisions resolved by direct comparison.
      constexpr std::uint64_t kBase = 1'000'003;
      std::uint64_t top = 1;
      for (std::size_t i = 0; i + 1 < n; ++i) top *= kBase;
      std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> table;
      std::uint64_t h = 0;
      for (std::size_t i = 0; i < n; ++i) h = h * kBase + text[i] + 1;
      for (std::size_t i = 0; i < windows; ++i) {
        if (i > 0) h = (h - (text[i - 1] + 1) * top) * kBase + text[i + n - 1] + 1;
        auto& bucket = table[h];
        std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
        for (std::uint32_t cand : bucket) {
          if (std::equal(text.begin() + static_cast<std::ptrdiff_t>(first_[cand]),
                         text.begin() + static_cast<std::ptrdiff_t>(first_[cand] + n),
                         text.begin() + static_cast<std::ptrdiff_t>(i))) {
            id = cand;
            break;
          }
        }
        if (id == std::numeric_limits<std::uint32_t>::max()) {
          id = static_cast<std::uint32_t>(first_.size());
          first_.push_back(i);
          bucket.push_back(id);
        }
        ids_[i] = id;
      }
    }
  }

  std::size_t factor_length() const noexcept { return n_; }
  std::size_t distinct() const noexcept { return first_.size(); }
  /// Id of the window starting at i.
  std::uint32_t id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::uint32_t>& ids() const noexcept { return ids_; }
  /// Start of the first window with this id.
  std::size_t first_position(std::uint32_t id) const { return first_[id]; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> ids_;
  std::vector<std::size_t> first_;
};

/// Exact set of length-n factors of a word (empty when n > |u|).
inline std::set<Word> factors(const Word& u, std::size_t n) {
  if (n == 0) throw InvalidArgument("factor length must be positive");
  std::set<Word> out;
  if (n > u.size()) return out;
  for (std::size_t i = 0; i + n <= u.size(); ++i) out.insert(u.sub(i, n));
  return out;
}

/// Length-n factors of prefix(x, horizon). This is a subset of Fac_n(x); it
/// equals Fac_n(x) once horizon >= certified_bound(n) + n.
inline std::set<Word> factors(const Sequence& x, Length horizon, std::size_t n) {
  if (n == 0) throw InvalidArgument("factor length must be positive");
  if (horizon < n) throw InvalidArgument("horizon must be at least the factor length");
  auto text = x.symbols(0, horizon);
  FactorIndex index(text, n, x.alphabet().bits());
  std::set<Word> out;
  for (std::uint32_t id = 0; id < index.distinct(); ++id) {
    auto p = index.first_position(id);
    out.insert(Word(x.alphabet(), std::vector<Symbol>(text.begin() + static_cast<std::ptrdiff_t>(p),
                                                      text.begin() + static_cast<std::ptrdiff_t>(p + n))));
  }
  return out;
}

/// All (possibly overlapping) start positions of needle in haystack, ascending.
/// Uses the KMP failure function.
inline std::vector<std::size_t> occurrences(std::span<const Symbol> haystack, std::span<const Symbol> needle) {
  if (needle.empty()) throw InvalidArgument("needle must be nonempty");
  std::vector<std::size_t> out;
  if (needle.size() > haystack.size()) return out;
  std::vector<std::size_t> fail(needle.size(), 0);
  for (std::size_t i = 1, k = 0; i < needle.size(); ++i) {
    while (k > 0 && needle[i] != needle[k]) k = fail[k - 1];
    if (needle[i] == needle[k]) ++k;
    fail[i] = k;
  }
  for (std::size_t i = 0, k = 0; i < haystack.size(); ++i) {
    while (k > 0 && haystack[i] != needle[k]) k = fail[k - 1];
    if (haystack[i] == needle[k]) ++k;
    if (k == needle.size()) {
      out.push_back(i + 1 - needle.size());
      k = fail[k - 1];
    }
  }
  return out;
}

/// Result of an occurrence query over words; alphabet_mismatch is set (and the
/// list left empty) when the two words live over different alphabets.
struct OccurrenceResult {
  std::vector<std::size_t> positions;
  bool alphabet_mismatch = false;
};

inline OccurrenceResult occurrences(const Word& haystack, const Word& needle) {
  if (needle.empty()) throw InvalidArgument("needle must be nonempty");
  if (!(haystack.alphabet() == needle.alphabet())) return {{}, true};
  return {occurrences(haystack.span(), needle.span()), false};
}

/// First index where x and y differ, or nullopt when they agree on [0, horizon).
/// Realizes d_C(x, y) = 2^(-n) without computing the power.
inline std::optional<Length> agreement_length(const Sequence& x, const Sequence& y, Length horizon) {
  require_same_alphabet(x.alphabet(), y.alphabet(), "agreement_length");
  constexpr Length kChunk = Sequence::kPage;
  for (Length begin = 0; begin < horizon; begin += kChunk) {
    const Length end = std::min(horizon, begin + kChunk);
    auto a = x.symbols(begin, end);
    auto b = y.symbols(begin, end);
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin());
    if (ia != a.end()) return begin + static_cast<Length>(ia - a.begin());
  }
  return std::nullopt;
}

/// L^n(x): index i maps to x(i + n). The certified bound is not carried over.
inline Sequence shift(const Sequence& x, Length n) {
  SequenceInfo info;
  info.provenance = "shift(" + x.provenance() + "," + std::to_string(n) + ")";
  info.almost_periodic = x.info().almost_periodic;
  info.period = x.info().period;
  if (n == 0) return x.with_info(std::move(info));
  Sequence::Filler f = [x, n](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    auto src = x.symbols(begin + n, begin + n + out.size());
    std::copy(src.begin(), src.end(), out.begin());
  };
  return Sequence(x.alphabet(), std::move(f), std::move(info));
}

}  // namespace apseq
