#pragma once

// Finite-state transducers with regulator-bound propagation, morphism
// application, products, a-splits and pushdown transducers.

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "apseq/core.hpp"
#include "apseq/morphism.hpp"

namespace apseq {

// ---------------------------------------------------------------------------
// Bound formulas

struct BoundFormulas {
  /// n ↦ h(h(n)) with h = (g+1)^{∘m} − 1.
  BoundFunction image_bound;
  /// n ↦ (g+1)^{∘m}(n) − 1.
  BoundFunction reversible_bound;
  /// Σ_{i=1..m} g^{∘i}(1).
  Length prefix_bound = 0;
  /// C^{2m}·n + Σ_{j<2m} C^j, present when g(n) = C·n was declared.
  std::optional<BoundFunction> linear_bound;
};

inline BoundFormulas bound_formulas(const BoundFunction& g, unsigned m, std::optional<Length> linear_c = std::nullopt) {
  if (m == 0) throw InvalidArgument("bound formulas need at least one state");
  if (!g) throw InvalidArgument("bound formulas need a bound function");
  auto h = [g, m](Length n) {
    for (unsigned i = 0; i < m; ++i) n = sat_add(g(n), 1);
    return sat_sub(n, 1);
  };
  BoundFormulas out;
  const std::string tag = "(" + g.provenance() + ", m=" + std::to_string(m) + ")";
  out.image_bound = BoundFunction([h](Length n) { return h(h(n)); }, "image h(h(n))" + tag);
  out.reversible_bound = BoundFunction(h, "reversible (g+1)^m(n)-1" + tag);
  Length acc = 0, v = 1;
  for (unsigned i = 0; i < m; ++i) {
    v = g(v);
    acc = sat_add(acc, v);
  }
  out.prefix_bound = acc;
  if (linear_c) {
    const Length c = *linear_c;
    out.linear_bound = BoundFunction(
        [c, m](Length n) {
          Length pw = 1, sum = 0;
          for (unsigned j = 0; j < 2 * m; ++j) {
            sum = sat_add(sum, pw);
            pw = sat_mul(pw, c);
          }
          return sat_add(sat_mul(pw, n), sum);
        },
        "linear C^{2m}n+...+1 (C=" + std::to_string(c) + ", m=" + std::to_string(m) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transducer

/// M = ⟨A, B, Q, q̃, λ, μ⟩ with λ: Q×A → B* and μ: Q×A → Q.
class Transducer {
 public:
  Transducer(Alphabet input, Alphabet output, std::vector<std::string> states, std::size_t initial,
             std::vector<std::vector<Word>> lambda, std::vector<std::vector<std::size_t>> mu, bool erasing = false)
      : input_(std::move(input)),
        output_(std::move(output)),
        states_(std::move(states)),
        initial_(initial),
        lambda_(std::move(lambda)),
        mu_(std::move(mu)),
        erasing_(erasing) {
    const std::size_t q = states_.size();
    if (q == 0) throw InvalidArgument("transducer needs at least one state");
    if (initial_ >= q) throw InvalidArgument("initial state out of range");
    if (lambda_.size() != q || mu_.size() != q) throw InvalidArgument("transducer tables must cover every state");
    std::set<std::string> names(states_.begin(), states_.end());
    if (names.size() != q) throw InvalidArgument("duplicate state names");
    for (std::size_t s = 0; s < q; ++s) {
      if (lambda_[s].size() != input_.size() || mu_[s].size() != input_.size())
        throw InvalidArgument("transducer must be total on Q x A");
      for (std::size_t a = 0; a < input_.size(); ++a) {
        require_same_alphabet(lambda_[s][a].alphabet(), output_, "transducer output");
        if (lambda_[s][a].empty() && !erasing_) throw InvalidArgument("empty output in a nonerasing transducer");
        if (mu_[s][a] >= q) throw InvalidArgument("transition target out of range");
      }
    }
  }

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t initial() const noexcept { return initial_; }
  const Word& lambda(std::size_t q, Symbol a) const { return lambda_.at(q).at(a); }
  std::size_t mu(std::size_t q, Symbol a) const { return mu_.at(q).at(a); }
  bool erasing() const noexcept { return erasing_; }

  bool is_uniform() const noexcept {
    for (const auto& row : lambda_)
      for (const auto& w : row)
        if (w.size() != 1) return false;
    return true;
  }

  /// Every letter of `letters` permutes Q.
  bool is_almost_reversible(const std::set<Symbol>& letters) const {
    for (Symbol a : letters) {
      if (!input_.contains(a)) throw InvalidArgument("letter outside the input alphabet");
      std::vector<bool> hit(states_.size(), false);
      for (std::size_t q = 0; q < states_.size(); ++q) {
        if (hit[mu_[q][a]]) return false;
        hit[mu_[q][a]] = true;
      }
    }
    return true;
  }

  bool is_reversible() const {
    std::set<Symbol> all;
    for (std::size_t a = 0; a < input_.size(); ++a) all.insert(static_cast<Symbol>(a));
    return is_almost_reversible(all);
  }

  /// One-state machine with λ(q, a) = a.
  static Transducer identity(const Alphabet& a) {
    std::vector<Word> row;
    std::vector<std::size_t> next(a.size(), 0);
    for (std::size_t s = 0; s < a.size(); ++s) row.emplace_back(a, std::vector<Symbol>{static_cast<Symbol>(s)});
    return Transducer(a, a, {"q0"}, 0, {row}, {next});
  }

  /// Same transitions, output is the current state: λ(q, a) = q.
  Transducer state_emitting() const {
    Alphabet qa(states_);
    std::vector<std::vector<Word>> lam(states_.size());
    for (std::size_t q = 0; q < states_.size(); ++q)
      for (std::size_t a = 0; a < input_.size(); ++a)
        lam[q].emplace_back(qa, std::vector<Symbol>{static_cast<Symbol>(q)});
    return Transducer(input_, qa, states_, initial_, std::move(lam), mu_);
  }

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::vector<std::vector<Word>> lambda_;
  std::vector<std::vector<std::size_t>> mu_;
  bool erasing_;
};

/// Transducer with m states cycling on every letter: μ(q, a) = q+1 mod m and
/// λ(q, a) = ⟨a, period[q]⟩ over A × B.
inline Transducer cyclic_transducer(const Alphabet& a, const Word& period) {
  const std::size_t m = period.size();
  if (m == 0) throw InvalidArgument("cyclic transducer needs a nonempty period");
  const Alphabet out = Alphabet::product(a, period.alphabet());
  std::vector<std::string> names;
  std::vector<std::vector<Word>> lam(m);
  std::vector<std::vector<std::size_t>> mu(m);
  for (std::size_t q = 0; q < m; ++q) {
    names.push_back("c" + std::to_string(q));
    for (std::size_t s = 0; s < a.size(); ++s) {
      lam[q].emplace_back(out, std::vector<Symbol>{static_cast<Symbol>(s * period.alphabet().size() + period[q])});
      mu[q].push_back((q + 1) % m);
    }
  }
  return Transducer(a, out, std::move(names), 0, std::move(lam), std::move(mu));
}

namespace detail {

/// Sequential evaluator for a word-valued map over an input sequence.
/// step(i, x_i) returns the output word for input position i.
template <class Step>
Sequence::Filler streaming_filler(Sequence x, Step step, bool may_erase) {
  struct State {
    std::size_t consumed = 0;
    std::deque<Symbol> pending;
  };
  auto st = std::make_shared<State>();
  return [x, step, st, may_erase](std::size_t, std::span<Symbol> out, const Sequence::View&) mutable {
    std::size_t k = 0;
    constexpr std::size_t kChunk = 4096;
    while (k < out.size()) {
      if (st->pending.empty()) {
        std::vector<Symbol> in;
        try {
          const Length end = std::min<Length>(st->consumed + kChunk, x.horizon_cap());
          if (end <= st->consumed) throw HorizonExhausted(st->consumed + 1, x.horizon_cap());
          in = x.symbols(st->consumed, end);
        } catch (const HorizonExhausted&) {
          if (may_erase) throw ImageCollapse("no further output within the input horizon");
          throw;
        }
        for (Symbol a : in) {
          const auto& w = step(st->consumed++, a);
          st->pending.insert(st->pending.end(), w.begin(), w.end());
        }
        continue;
      }
      while (k < out.size() && !st->pending.empty()) {
        out[k++] = st->pending.front();
        st->pending.pop_front();
      }
    }
  };
}

}  // namespace detail

/// φ(x) = φ(x(0))φ(x(1))...; no bound is carried.
inline Sequence apply_morphism(const Morphism& phi, const Sequence& x) {
  require_same_alphabet(phi.source(), x.alphabet(), "apply_morphism");
  std::vector<std::vector<Symbol>> images;
  for (const auto& w : phi.images()) images.push_back(w.letters());
  SequenceInfo info;
  info.provenance = "apply_morphism(" + phi.str() + "," + x.provenance() + ")";
  auto step = [images](std::size_t, Symbol a) -> const std::vector<Symbol>& { return images[a]; };
  return Sequence(phi.target(), detail::streaming_filler(x, step, phi.erasing()), std::move(info));
}

/// Stream of states p_0 = q̃, p_{n+1} = μ(p_n, x(n)), over an alphabet named by the states.
inline Sequence run_states(const Transducer& m, const Sequence& x) {
  require_same_alphabet(m.input(), x.alphabet(), "run_states");
  struct State {
    std::size_t q;
  };
  auto st = std::make_shared<State>(State{m.initial()});
  SequenceInfo info;
  info.provenance = "run_states(" + x.provenance() + ")";
  Sequence::Filler f = [m, x, st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    auto in = x.symbols(begin, begin + out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = static_cast<Symbol>(st->q);
      st->q = m.mu(st->q, in[k]);
    }
  };
  return Sequence(Alphabet(m.states()), std::move(f), std::move(info));
}

/// Letters of x that occur in x[f(1), 2f(1)], i.e. the letters occurring
/// infinitely often when f is a sound bound.
inline std::set<Symbol> recurrent_letters(const Sequence& x) {
  if (!x.certified_bound()) throw NoCertifiedBound("recurrent letters need a certified bound");
  const Length f1 = (*x.certified_bound())(1);
  auto w = x.symbols(f1, sat_add(sat_mul(2, f1), 1));
  return std::set<Symbol>(w.begin(), w.end());
}

/// M(x)(n) = λ(p_n, x(n)). Uniform machines over a bounded x carry a bound:
/// the almost-reversible one when every recurrent letter permutes Q, the
/// doubly iterated image bound otherwise.
inline Sequence transduce(const Transducer& m, const Sequence& x) {
  require_same_alphabet(m.input(), x.alphabet(), "transduce");
  SequenceInfo info;
  info.provenance = "transduce(" + std::to_string(m.state_count()) + " states," + x.provenance() + ")";
  if (m.is_uniform() && x.certified_bound()) {
    auto formulas = bound_formulas(*x.certified_bound(), static_cast<unsigned>(m.state_count()));
    if (m.is_almost_reversible(recurrent_letters(x)))
      info.certified_bound = formulas.reversible_bound;
    else
      info.certified_bound = formulas.image_bound;
  }
  if (m.is_uniform()) {
    struct State {
      std::size_t q;
    };
    auto st = std::make_shared<State>(State{m.initial()});
    Sequence::Filler f = [m, x, st](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
      auto in = x.symbols(begin, begin + out.size());
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = m.lambda(st->q, in[k])[0];
        st->q = m.mu(st->q, in[k]);
      }
    };
    return Sequence(m.output(), std::move(f), std::move(info));
  }
  std::vector<std::vector<std::vector<Symbol>>> lam(m.state_count());
  for (std::size_t q = 0; q < m.state_count(); ++q)
    for (std::size_t a = 0; a < m.input().size(); ++a) lam[q].push_back(m.lambda(q, static_cast<Symbol>(a)).letters());
  auto q = std::make_shared<std::size_t>(m.initial());
  auto step = [m, lam, q](std::size_t, Symbol a) -> const std::vector<Symbol>& {
    const auto& w = lam[*q][a];
    *q = m.mu(*q, a);
    return w;
  };
  return Sequence(m.output(), detail::streaming_filler(x, step, m.erasing()), std::move(info));
}

/// M = φ ∘ M' where M' emits ⟨q, a⟩ and φ(⟨q, a⟩) = λ(q, a).
inline std::pair<Transducer, Morphism> decompose(const Transducer& m) {
  const Alphabet qa = Alphabet::product(Alphabet(m.states()), m.input());
  std::vector<std::vector<Word>> lam(m.state_count());
  std::vector<std::vector<std::size_t>> mu(m.state_count());
  std::vector<Word> images;
  for (std::size_t q = 0; q < m.state_count(); ++q) {
    for (std::size_t a = 0; a < m.input().size(); ++a) {
      lam[q].emplace_back(qa, std::vector<Symbol>{static_cast<Symbol>(q * m.input().size() + a)});
      mu[q].push_back(m.mu(q, static_cast<Symbol>(a)));
      images.push_back(m.lambda(q, static_cast<Symbol>(a)));
    }
  }
  Transducer tagger(m.input(), qa, m.states(), m.initial(), std::move(lam), std::move(mu));
  return {std::move(tagger), Morphism(qa, m.output(), std::move(images), m.erasing())};
}

// ---------------------------------------------------------------------------
// Products

/// (x×y)(i) = ⟨x(i), y(i)⟩. When y is known periodic the product is computed by
/// the cyclic transducer and inherits its bound.
inline Sequence product(const Sequence& x, const Sequence& y) {
  if (y.info().period) {
    auto period = prefix(y, *y.info().period);
    auto s = transduce(cyclic_transducer(x.alphabet(), period), x);
    SequenceInfo info = s.info();
    info.provenance = "product(" + x.provenance() + "," + y.provenance() + ")";
    return s.with_info(std::move(info));
  }
  const Alphabet out = Alphabet::product(x.alphabet(), y.alphabet());
  const std::size_t kb = y.alphabet().size();
  SequenceInfo info;
  info.provenance = "product(" + x.provenance() + "," + y.provenance() + ")";
  Sequence::Filler f = [x, y, kb](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    auto a = x.symbols(begin, begin + out.size());
    auto b = y.symbols(begin, begin + out.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<Symbol>(a[k] * kb + b[k]);
  };
  return Sequence(out, std::move(f), std::move(info));
}

/// x × C_m with C_m = 012...(m-1)012...
inline Sequence cyclic(const Sequence& x, std::size_t m) {
  if (m == 0) throw InvalidArgument("cyclic needs m >= 1");
  std::vector<Symbol> w;
  for (std::size_t i = 0; i < m; ++i) w.push_back(static_cast<Symbol>(i));
  const Alphabet c = Alphabet::digits(m);
  SequenceInfo pinfo;
  pinfo.provenance = "C_" + std::to_string(m);
  pinfo.period = m;
  auto cm = Sequence::from_index(c, [m](std::size_t i) { return static_cast<Symbol>(i % m); }, std::move(pinfo));
  auto s = product(x, cm);
  SequenceInfo info = s.info();
  info.provenance = "cyclic(" + x.provenance() + "," + std::to_string(m) + ")";
  return s.with_info(std::move(info));
}

// ---------------------------------------------------------------------------
// a-split

/// Result of an a-split: the block sequence plus the decoding table.
struct SplitResult {
  Sequence blocks;
  /// Word for each block symbol, in order of first appearance.
  std::vector<Word> decode;
  /// The dropped first block u_0 a.
  Word first_block;
};

/// Cuts x after every occurrence of a, encodes each block ua as a block
/// symbol and drops the first block. Blocks are discovered in prefix(x, horizon);
/// reading past the last complete block raises HorizonExhausted.
inline SplitResult split(const Sequence& x, Symbol a, Length horizon) {
  if (!x.alphabet().contains(a)) throw InvalidArgument("split letter outside alphabet");
  auto text = x.symbols(0, horizon);
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == a) cuts.push_back(i + 1);
  if (cuts.empty()) throw InvalidArgument("split letter does not occur within the horizon");
  std::map<std::vector<Symbol>, Symbol> ids;
  std::vector<Word> decode;
  std::vector<Symbol> stream;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    std::vector<Symbol> block(text.begin() + static_cast<std::ptrdiff_t>(cuts[k - 1]),
                              text.begin() + static_cast<std::ptrdiff_t>(cuts[k]));
    auto [it, fresh] = ids.try_emplace(block, static_cast<Symbol>(decode.size()));
    if (fresh) decode.emplace_back(x.alphabet(), block);
    stream.push_back(it->second);
  }
  if (decode.empty()) throw HorizonExhausted(sat_add(horizon, 1), horizon);
  std::vector<std::string> names;
  for (const auto& w : decode) names.push_back(x.alphabet().single_char_names() ? w.str() : "(" + w.str() + ")");
  SequenceInfo info;
  info.provenance = "split(" + x.provenance() + "," + x.alphabet().name(a) + ")";
  const Length available = stream.size();
  Sequence::Filler f = [stream](std::size_t begin, std::span<Symbol> out, const Sequence::View&) {
    std::copy_n(stream.begin() + static_cast<std::ptrdiff_t>(begin), out.size(), out.begin());
  };
  Word first(x.alphabet(), std::vector<Symbol>(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(cuts[0])));
  return {Sequence(Alphabet(std::move(names)), std::move(f), std::move(info), available), std::move(decode),
          std::move(first)};
}

// ---------------------------------------------------------------------------
// Pushdown transducers

struct StackAction {
  enum class Kind { noop, push, pop } kind = Kind::noop;
  Symbol symbol = 0;
  static StackAction noop() { return {}; }
  static StackAction push(Symbol s) { return {Kind::push, s}; }
  static StackAction pop() { return {Kind::pop, 0}; }
};

struct PushdownRule {
  Word output;
  std::size_t next = 0;
  StackAction action;
};

/// Rules keyed by (state, input letter, stack top) where the top is
/// std::nullopt for the empty stack. A key with top = any is looked up when
/// no exact key exists. After each step, if the stack is empty and the
/// current state has an entry in on_empty, the machine moves there.
class PushdownTransducer {
 public:
  using Top = std::optional<Symbol>;

  PushdownTransducer(Alphabet input, Alphabet output, Alphabet stack, std::vector<std::string> states,
                     std::size_t initial)
      : input_(std::move(input)),
        output_(std::move(output)),
        stack_(std::move(stack)),
        states_(std::move(states)),
        initial_(initial) {
    if (initial_ >= states_.size()) throw InvalidArgument("initial state out of range");
  }

  void add_rule(std::size_t q, Symbol a, Top top, PushdownRule rule) {
    require_same_alphabet(rule.output.alphabet(), output_, "pushdown output");
    rules_[{q, a, encode(top)}] = std::move(rule);
  }
  /// Rule used for any stack top (including empty) when no specific rule exists.
  void add_default_rule(std::size_t q, Symbol a, PushdownRule rule) {
    require_same_alphabet(rule.output.alphabet(), output_, "pushdown output");
    rules_[{q, a, kAny}] = std::move(rule);
  }
  void set_on_empty(std::size_t q, std::size_t target) { on_empty_[q] = target; }

  /// Machine whose rules ignore the stack: a finite-state transducer.
  static PushdownTransducer from_transducer(const Transducer& m) {
    PushdownTransducer p(m.input(), m.output(), Alphabet({"z"}), m.states(), m.initial());
    for (std::size_t q = 0; q < m.state_count(); ++q)
      for (std::size_t a = 0; a < m.input().size(); ++a)
        p.add_default_rule(q, static_cast<Symbol>(a),
                           {m.lambda(q, static_cast<Symbol>(a)), m.mu(q, static_cast<Symbol>(a)), StackAction::noop()});
    return p;
  }

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t initial() const noexcept { return initial_; }

  const PushdownRule& rule(std::size_t q, Symbol a, Top top) const {
    auto it = rules_.find({q, a, encode(top)});
    if (it == rules_.end()) it = rules_.find({q, a, kAny});
    if (it == rules_.end())
      throw MachineFault("no rule for state " + states_.at(q) + " on '" + input_.name(a) + "'");
    return it->second;
  }

  std::optional<std::size_t> on_empty(std::size_t q) const {
    auto it = on_empty_.find(q);
    if (it == on_empty_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static constexpr int kEmpty = -1;
  static constexpr int kAny = -2;
  static int encode(Top t) { return t ? static_cast<int>(*t) : kEmpty; }

  Alphabet input_;
  Alphabet output_;
  Alphabet stack_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::map<std::tuple<std::size_t, Symbol, int>, PushdownRule> rules_;
  std::map<std::size_t, std::size_t> on_empty_;
};

/// Two modes a and b over input {0,1}. Mode a pushes 0 on input 0 and pops on
/// input 1; mode b does the opposite. The output letter is the mode before the
/// step. When the stack becomes empty after a step the mode toggles; an input
/// that would pop from an empty stack instead switches mode and pushes.
inline PushdownTransducer counterexample_machine() {
  const Alphabet bin = Alphabet::binary();
  const Alphabet modes = Alphabet::from_chars("ab");
  PushdownTransducer p(bin, modes, bin, {"a", "b"}, 0);
  const Word oa = Word::parse(modes, "a"), ob = Word::parse(modes, "b");
  p.add_default_rule(0, 0, {oa, 0, StackAction::push(0)});
  p.add_rule(0, 1, Symbol{0}, {oa, 0, StackAction::pop()});
  p.add_rule(0, 1, std::nullopt, {oa, 1, StackAction::push(1)});
  p.add_default_rule(1, 1, {ob, 1, StackAction::push(1)});
  p.add_rule(1, 0, Symbol{1}, {ob, 1, StackAction::pop()});
  p.add_rule(1, 0, std::nullopt, {ob, 0, StackAction::push(0)});
  p.set_on_empty(0, 1);
  p.set_on_empty(1, 0);
  return p;
}

inline Sequence pushdown_transduce(const PushdownTransducer& pm, const Sequence& x) {
  require_same_alphabet(pm.input(), x.alphabet(), "pushdown_transduce");
  struct Config {
    std::size_t q;
    std::vector<Symbol> stack;
  };
  auto cfg = std::make_shared<Config>(Config{pm.initial(), {}});
  auto step = [pm, cfg, buf = std::vector<Symbol>()](std::size_t, Symbol a) mutable -> const std::vector<Symbol>& {
    PushdownTransducer::Top top;
    if (!cfg->stack.empty()) top = cfg->stack.back();
    const PushdownRule& r = pm.rule(cfg->q, a, top);
    switch (r.action.kind) {
      case StackAction::Kind::push:
        cfg->stack.push_back(r.action.symbol);
        break;
      case StackAction::Kind::pop:
        if (cfg->stack.empty()) throw MachineFault("pop on empty stack");
        cfg->stack.pop_back();
        break;
      case StackAction::Kind::noop:
        break;
    }
    cfg->q = r.next;
    if (cfg->stack.empty())
      if (auto t = pm.on_empty(cfg->q)) cfg->q = *t;
    buf = r.output.letters();
    return buf;
  };
  SequenceInfo info;
  info.provenance = "pushdown(" + x.provenance() + ")";
  bool erasing = false;
  return Sequence(pm.output(), detail::streaming_filler(x, step, erasing), std::move(info));
}

}  // namespace apseq
