#pragma once

// Deterministic Muller and Büchi automata on infinite sequences, and the
// acceptance decision for sequences carrying a certified regulator bound.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apseq/core.hpp"
#include "apseq/transducer.hpp"

namespace apseq {

using StateSet = std::set<std::size_t>;

/// Total deterministic transition structure shared by both acceptor kinds.
class DeterministicAutomaton {
 public:
  DeterministicAutomaton(Alphabet input, std::vector<std::string> states, std::size_t initial,
                         std::vector<std::vector<std::size_t>> delta)
      : input_(std::move(input)), states_(std::move(states)), initial_(initial), delta_(std::move(delta)) {
    if (states_.empty()) throw InvalidArgument("automaton needs at least one state");
    if (initial_ >= states_.size()) throw InvalidArgument("automaton start state out of range");
    if (delta_.size() != states_.size()) throw InvalidArgument("automaton transitions must cover every state");
    if (std::set<std::string>(states_.begin(), states_.end()).size() != states_.size())
      throw InvalidArgument("duplicate state names");
    for (const auto& row : delta_) {
      if (row.size() != input_.size()) throw InvalidArgument("automaton transition function must be total");
      for (auto q : row)
        if (q >= states_.size()) throw InvalidArgument("transition target out of range");
    }
  }

  const Alphabet& input() const noexcept { return input_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t initial() const noexcept { return initial_; }
  std::size_t delta(std::size_t q, Symbol a) const { return delta_.at(q).at(a); }
  const std::vector<std::vector<std::size_t>>& transitions() const noexcept { return delta_; }

  std::size_t state_index(const std::string& name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) throw InvalidArgument("unknown state '" + name + "'");
    return static_cast<std::size_t>(it - states_.begin());
  }

  /// The uniform transducer M′ with λ(q, a) = q and the same transitions.
  Transducer state_emitting() const {
    Alphabet qa(states_);
    std::vector<std::vector<Word>> lam(states_.size());
    for (std::size_t q = 0; q < states_.size(); ++q)
      for (std::size_t a = 0; a < input_.size(); ++a)
        lam[q].emplace_back(qa, std::vector<Symbol>{static_cast<Symbol>(q)});
    return Transducer(input_, qa, states_, initial_, std::move(lam), delta_);
  }

  std::string format_set(const StateSet& s) const {
    std::string out = "{";
    bool first = true;
    for (auto q : s) {
      if (!first) out += ',';
      out += states_.at(q);
      first = false;
    }
    return out + "}";
  }

 private:
  Alphabet input_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::vector<std::vector<std::size_t>> delta_;
};

class MullerAutomaton : public DeterministicAutomaton {
 public:
  MullerAutomaton(Alphabet input, std::vector<std::string> states, std::size_t initial,
                  std::vector<std::vector<std::size_t>> delta, std::vector<StateSet> accepting)
      : DeterministicAutomaton(std::move(input), std::move(states), initial, std::move(delta)),
        accepting_(std::move(accepting)) {
    for (const auto& f : accepting_)
      for (auto q : f)
        if (q >= state_count()) throw InvalidArgument("accepting set names an unknown state");
  }

  const std::vector<StateSet>& accepting() const noexcept { return accepting_; }
  bool accepts_limit(const StateSet& s) const {
    return std::find(accepting_.begin(), accepting_.end(), s) != accepting_.end();
  }

 private:
  std::vector<StateSet> accepting_;
};

/// Büchi automaton with a transition relation; only deterministic instances
/// can be run or decided.
class BuchiAutomaton {
 public:
  /// relation[q][a] lists the successors of q on a.
  BuchiAutomaton(Alphabet input, std::vector<std::string> states, std::size_t initial,
                 std::vector<std::vector<std::vector<std::size_t>>> relation, StateSet accepting)
      : input_(std::move(input)),
        states_(std::move(states)),
        initial_(initial),
        relation_(std::move(relation)),
        accepting_(std::move(accepting)) {
    if (states_.empty()) throw InvalidArgument("automaton needs at least one state");
    if (initial_ >= states_.size()) throw InvalidArgument("automaton start state out of range");
    if (relation_.size() != states_.size()) throw InvalidArgument("automaton transitions must cover every state");
    if (std::set<std::string>(states_.begin(), states_.end()).size() != states_.size())
      throw InvalidArgument("duplicate state names");
    for (auto& row : relation_) {
      if (row.size() != input_.size()) throw InvalidArgument("transition table must list every letter");
      for (auto& targets : row) {
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (auto q : targets)
          if (q >= states_.size()) throw InvalidArgument("transition target out of range");
      }
    }
    for (auto q : accepting_)
      if (q >= states_.size()) throw InvalidArgument("accepting state out of range");
  }

  /// Deterministic Büchi automaton from a transition function.
  static BuchiAutomaton deterministic(Alphabet input, std::vector<std::string> states, std::size_t initial,
                                      const std::vector<std::vector<std::size_t>>& delta, StateSet accepting) {
    std::vector<std::vector<std::vector<std::size_t>>> rel(delta.size());
    for (std::size_t q = 0; q < delta.size(); ++q)
      for (auto t : delta[q]) rel[q].push_back({t});
    return BuchiAutomaton(std::move(input), std::move(states), initial, std::move(rel), std::move(accepting));
  }

  const Alphabet& input() const noexcept { return input_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<std::vector<std::vector<std::size_t>>>& relation() const noexcept { return relation_; }
  const StateSet& accepting() const noexcept { return accepting_; }

  bool is_deterministic() const noexcept {
    for (const auto& row : relation_)
      for (const auto& t : row)
        if (t.size() != 1) return false;
    return true;
  }

  /// Throws UnsupportedFeature for nondeterministic automata.
  DeterministicAutomaton as_deterministic() const {
    if (!is_deterministic())
      throw UnsupportedFeature(
          "nondeterministic Büchi automata are not decided; determinize to a Muller automaton first");
    std::vector<std::vector<std::size_t>> delta(relation_.size());
    for (std::size_t q = 0; q < relation_.size(); ++q)
      for (const auto& t : relation_[q]) delta[q].push_back(t.front());
    return DeterministicAutomaton(input_, states_, initial_, std::move(delta));
  }

 private:
  Alphabet input_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::vector<std::vector<std::vector<std::size_t>>> relation_;
  StateSet accepting_;
};

struct Verdict {
  bool accept = false;
  StateSet limit_macrostate;
  /// Positions of M′(x) inspected.
  Segment window{0, 0};
  BoundFunction bound_trace;
  std::vector<std::string> state_names;

  std::string limit_str() const {
    std::string out = "{";
    bool first = true;
    for (auto q : limit_macrostate) {
      if (!first) out += ',';
      out += state_names.at(q);
      first = false;
    }
    return out + "}";
  }
};

/// ρ(0), …, ρ(steps−1) with ρ(0) = q̃ and ρ(i+1) = δ(ρ(i), x(i)).
inline std::vector<std::size_t> run(const DeterministicAutomaton& aut, const Sequence& x, Length steps) {
  require_same_alphabet(aut.input(), x.alphabet(), "run");
  std::vector<std::size_t> rho;
  if (steps == 0) return rho;
  auto in = x.symbols(0, steps - 1);
  rho.reserve(static_cast<std::size_t>(steps));
  std::size_t q = aut.initial();
  rho.push_back(q);
  for (Symbol a : in) {
    q = aut.delta(q, a);
    rho.push_back(q);
  }
  return rho;
}

inline std::vector<std::size_t> run(const BuchiAutomaton& aut, const Sequence& x, Length steps) {
  return run(aut.as_deterministic(), x, steps);
}

/// States occurring in ρ[T/2, T).
inline StateSet limit_set_oracle(const DeterministicAutomaton& aut, const Sequence& x, Length T) {
  if (T < 2) throw InvalidArgument("limit_set_oracle needs T >= 2");
  auto rho = run(aut, x, T);
  return StateSet(rho.begin() + static_cast<std::ptrdiff_t>(T / 2), rho.end());
}

namespace detail {

/// Infinitely visited states read off M′(x)[g(1), 2g(1) − 1], g the image bound for m = |Q|.
inline Verdict certified_limit(const DeterministicAutomaton& aut, const Sequence& x) {
  if (!x.certified_bound())
    throw NoCertifiedBound("sequence '" + x.provenance() +
                           "' carries no certified regulator bound; acceptance is decidable only for "
                           "effectively generalized almost periodic inputs");
  require_same_alphabet(aut.input(), x.alphabet(), "decide");
  const auto formulas = bound_formulas(*x.certified_bound(), static_cast<unsigned>(aut.state_count()));
  const BoundFunction& g = formulas.image_bound;
  const Length g1 = g(1);
  const Length end = sat_sub(sat_mul(2, g1), 1);
  if (sat_add(end, 1) > x.horizon_cap()) throw CostRefusal(sat_add(end, 1), x.horizon_cap());
  Sequence states = transduce(aut.state_emitting(), x);
  auto w = states.symbols(g1, end + 1);
  Verdict v;
  v.limit_macrostate = StateSet(w.begin(), w.end());
  v.window = Segment{g1, end};
  v.bound_trace = g;
  v.state_names = aut.states();
  return v;
}

}  // namespace detail

inline Verdict decide_muller(const MullerAutomaton& aut, const Sequence& x) {
  Verdict v = detail::certified_limit(aut, x);
  v.accept = aut.accepts_limit(v.limit_macrostate);
  return v;
}

inline Verdict decide_buchi_det(const BuchiAutomaton& aut, const Sequence& x) {
  Verdict v = detail::certified_limit(aut.as_deterministic(), x);
  v.accept = std::any_of(v.limit_macrostate.begin(), v.limit_macrostate.end(),
                         [&](std::size_t q) { return aut.accepting().count(q) > 0; });
  return v;
}

}  // namespace apseq
