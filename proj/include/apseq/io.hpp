#pragma once

// Text formats for transducers, omega-automata and self-similar schemes.
// Each format prints in a canonical layout, so print(parse(t)) is stable.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "apseq/core.hpp"
#include "apseq/omega.hpp"
#include "apseq/scheme.hpp"
#include "apseq/transducer.hpp"

namespace apseq::io {

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

/// Non-blank lines with '#' comments stripped.
inline std::vector<Line> lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    auto tokens = split_ws(raw);
    if (!tokens.empty()) out.push_back({number, std::move(tokens)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

/// "key:" header with its value tokens, or nullopt for other lines.
inline std::optional<std::pair<std::string, std::vector<std::string>>> header(const Line& l) {
  const auto& t = l.tokens.front();
  if (t.size() < 2 || t.back() != ':') return std::nullopt;
  return std::make_pair(t.substr(0, t.size() - 1), std::vector<std::string>(l.tokens.begin() + 1, l.tokens.end()));
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::size_t index_in(const std::vector<std::string>& names, const std::string& n, std::size_t line,
                            const std::string& what) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) throw ParseError(line, "unknown " + what + " '" + n + "'");
  return static_cast<std::size_t>(it - names.begin());
}

/// Letters of a word token: comma-separated when it contains a comma, else one per character.
inline std::vector<std::string> word_letters(const std::string& w) {
  std::vector<std::string> out;
  if (w.find(',') != std::string::npos) {
    std::string cur;
    for (char c : w) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
  } else {
    for (char c : w) out.emplace_back(1, c);
  }
  return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == ',')
      out.emplace_back();
    else
      out.back() += c;
  }
  return out;
}

inline Word parse_word(const Alphabet& a, const std::string& token, std::size_t line) {
  if (token == "-") return Word(a);
  try {
    return Word::parse(a, token);
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

inline std::string print_word(const Word& w) { return w.empty() ? "-" : w.str(); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Transducers: "states:", "start:", optional "input:"/"output:", then
// "q a -> w q'" with "-" for the empty output.

inline Transducer parse_transducer(std::string_view text) {
  using namespace detail;
  std::vector<std::string> states, input, output;
  std::optional<std::string> start;
  bool have_input = false, have_output = false;
  struct Rule {
    std::size_t line;
    std::string q, a, w, next;
  };
  std::vector<Rule> rules;
  for (const auto& l : lines(text)) {
    if (auto h = header(l)) {
      auto& [key, vals] = *h;
      if (key == "states") {
        states = vals;
      } else if (key == "start") {
        if (vals.size() != 1) throw ParseError(l.number, "start needs exactly one state");
        start = vals[0];
      } else if (key == "input") {
        input = vals;
        have_input = true;
      } else if (key == "output") {
        output = vals;
        have_output = true;
      } else {
        throw ParseError(l.number, "unknown header '" + key + ":'");
      }
      continue;
    }
    if (l.tokens.size() != 5 || l.tokens[2] != "->") throw ParseError(l.number, "expected 'q a -> w q2'");
    rules.push_back({l.number, l.tokens[0], l.tokens[1], l.tokens[3], l.tokens[4]});
  }
  if (states.empty()) throw ParseError(0, "missing 'states:' header");
  if (!start) throw ParseError(0, "missing 'start:' header");
  if (!have_input) {
    std::set<std::string> s;
    for (const auto& r : rules) s.insert(r.a);
    input.assign(s.begin(), s.end());
  }
  if (!have_output) {
    std::set<std::string> s;
    for (const auto& r : rules)
      if (r.w != "-")
        for (auto& c : word_letters(r.w)) s.insert(c);
    output.assign(s.begin(), s.end());
  }
  if (input.empty()) throw ParseError(0, "empty input alphabet");
  if (output.empty()) throw ParseError(0, "empty output alphabet");
  Alphabet in(input), out(output);
  const std::size_t Q = states.size();
  std::vector<std::vector<std::optional<Word>>> lam(Q, std::vector<std::optional<Word>>(in.size()));
  std::vector<std::vector<std::size_t>> mu(Q, std::vector<std::size_t>(in.size(), 0));
  bool erasing = false;
  for (const auto& r : rules) {
    const auto q = index_in(states, r.q, r.line, "state");
    const auto a = index_in(input, r.a, r.line, "input letter");
    if (lam[q][a]) throw ParseError(r.line, "duplicate rule for (" + r.q + ", " + r.a + ")");
    lam[q][a] = parse_word(out, r.w, r.line);
    erasing = erasing || lam[q][a]->empty();
    mu[q][a] = index_in(states, r.next, r.line, "state");
  }
  std::vector<std::vector<Word>> lambda(Q);
  for (std::size_t q = 0; q < Q; ++q)
    for (std::size_t a = 0; a < in.size(); ++a) {
      if (!lam[q][a]) throw ParseError(0, "no rule for (" + states[q] + ", " + input[a] + ")");
      lambda[q].push_back(*lam[q][a]);
    }
  const auto q0 = index_in(states, *start, 0, "start state");
  try {
    return Transducer(in, out, states, q0, std::move(lambda), std::move(mu), erasing);
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
}

inline std::string format_transducer(const Transducer& m) {
  std::string out = "states: " + detail::join(m.states()) + "\n";
  out += "start: " + m.states()[m.initial()] + "\n";
  std::vector<std::string> in, o;
  for (std::size_t a = 0; a < m.input().size(); ++a) in.push_back(m.input().name(static_cast<Symbol>(a)));
  for (std::size_t b = 0; b < m.output().size(); ++b) o.push_back(m.output().name(static_cast<Symbol>(b)));
  out += "input: " + detail::join(in) + "\n";
  out += "output: " + detail::join(o) + "\n";
  for (std::size_t q = 0; q < m.state_count(); ++q)
    for (std::size_t a = 0; a < m.input().size(); ++a)
      out += m.states()[q] + " " + in[a] + " -> " + detail::print_word(m.lambda(q, static_cast<Symbol>(a))) + " " +
             m.states()[m.mu(q, static_cast<Symbol>(a))] + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Automata: "states:", "start:", "alphabet:", "q a -> q'", then
// "accept-sets: {q0,q1} {q2}" (Muller) or "accept: q0 q2" (Büchi).

using Automaton = std::variant<MullerAutomaton, BuchiAutomaton>;

inline Automaton parse_automaton(std::string_view text) {
  using namespace detail;
  std::vector<std::string> states, alphabet;
  std::optional<std::string> start;
  bool have_alphabet = false;
  std::optional<std::pair<std::size_t, std::string>> accept_sets;
  std::optional<std::pair<std::size_t, std::vector<std::string>>> accept;
  struct Edge {
    std::size_t line;
    std::string q, a, next;
  };
  std::vector<Edge> edges;
  for (const auto& l : lines(text)) {
    if (auto h = header(l)) {
      auto& [key, vals] = *h;
      if (key == "states") {
        states = vals;
      } else if (key == "start") {
        if (vals.size() != 1) throw ParseError(l.number, "start needs exactly one state");
        start = vals[0];
      } else if (key == "alphabet") {
        alphabet = vals;
        have_alphabet = true;
      } else if (key == "accept-sets") {
        accept_sets = {l.number, join(vals, "")};
      } else if (key == "accept") {
        accept = {l.number, vals};
      } else {
        throw ParseError(l.number, "unknown header '" + key + ":'");
      }
      continue;
    }
    if (l.tokens.size() != 4 || l.tokens[2] != "->") throw ParseError(l.number, "expected 'q a -> q2'");
    edges.push_back({l.number, l.tokens[0], l.tokens[1], l.tokens[3]});
  }
  if (states.empty()) throw ParseError(0, "missing 'states:' header");
  if (!start) throw ParseError(0, "missing 'start:' header");
  if (accept_sets && accept) throw ParseError(accept->first, "both 'accept-sets:' and 'accept:' given");
  if (!accept_sets && !accept) throw ParseError(0, "missing 'accept-sets:' or 'accept:'");
  if (!have_alphabet) {
    std::set<std::string> s;
    for (const auto& e : edges) s.insert(e.a);
    alphabet.assign(s.begin(), s.end());
  }
  if (alphabet.empty()) throw ParseError(0, "empty alphabet");
  Alphabet in(alphabet);
  const std::size_t Q = states.size();
  std::vector<std::vector<std::vector<std::size_t>>> rel(Q, std::vector<std::vector<std::size_t>>(in.size()));
  for (const auto& e : edges) {
    const auto q = index_in(states, e.q, e.line, "state");
    const auto a = index_in(alphabet, e.a, e.line, "letter");
    const auto t = index_in(states, e.next, e.line, "state");
    if (std::find(rel[q][a].begin(), rel[q][a].end(), t) != rel[q][a].end())
      throw ParseError(e.line, "duplicate transition");
    rel[q][a].push_back(t);
  }
  const auto q0 = index_in(states, *start, 0, "start state");
  try {
    if (accept) {
      StateSet f;
      for (const auto& s : accept->second) f.insert(index_in(states, s, accept->first, "state"));
      return BuchiAutomaton(in, states, q0, std::move(rel), std::move(f));
    }
    const std::size_t line = accept_sets->first;
    const std::string& body = accept_sets->second;
    std::vector<StateSet> family;
    std::size_t i = 0;
    while (i < body.size()) {
      if (body[i] != '{') throw ParseError(line, "accept-sets expects groups like {q0,q1}");
      const auto close = body.find('}', i);
      if (close == std::string::npos) throw ParseError(line, "unterminated '{'");
      StateSet s;
      std::string inner = body.substr(i + 1, close - i - 1);
      if (!inner.empty())
        for (const auto& n : split_commas(inner)) s.insert(index_in(states, n, line, "state"));
      family.push_back(std::move(s));
      i = close + 1;
    }
    std::vector<std::vector<std::size_t>> delta(Q);
    for (std::size_t q = 0; q < Q; ++q)
      for (std::size_t a = 0; a < in.size(); ++a) {
        if (rel[q][a].size() != 1)
          throw ParseError(0, "Muller automaton needs exactly one transition for (" + states[q] + ", " +
                                  alphabet[a] + ")");
        delta[q].push_back(rel[q][a][0]);
      }
    return MullerAutomaton(in, states, q0, std::move(delta), std::move(family));
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
}

namespace detail {

inline std::string automaton_head(const std::vector<std::string>& states, std::size_t initial, const Alphabet& a) {
  std::vector<std::string> letters;
  for (std::size_t i = 0; i < a.size(); ++i) letters.push_back(a.name(static_cast<Symbol>(i)));
  return "states: " + join(states) + "\nstart: " + states[initial] + "\nalphabet: " + join(letters) + "\n";
}

}  // namespace detail

inline std::string format_automaton(const MullerAutomaton& m) {
  std::string out = detail::automaton_head(m.states(), m.initial(), m.input());
  for (std::size_t q = 0; q < m.state_count(); ++q)
    for (std::size_t a = 0; a < m.input().size(); ++a)
      out += m.states()[q] + " " + m.input().name(static_cast<Symbol>(a)) + " -> " +
             m.states()[m.delta(q, static_cast<Symbol>(a))] + "\n";
  out += "accept-sets:";
  for (const auto& f : m.accepting()) out += " " + m.format_set(f);
  return out + "\n";
}

inline std::string format_automaton(const BuchiAutomaton& b) {
  std::string out = detail::automaton_head(b.states(), b.initial(), b.input());
  for (std::size_t q = 0; q < b.states().size(); ++q)
    for (std::size_t a = 0; a < b.input().size(); ++a)
      for (auto t : b.relation()[q][a])
        out += b.states()[q] + " " + b.input().name(static_cast<Symbol>(a)) + " -> " + b.states()[t] + "\n";
  out += "accept:";
  for (auto q : b.accepting()) out += " " + b.states()[q];
  return out + "\n";
}

inline std::string format_automaton(const Automaton& a) {
  return std::visit([](const auto& x) { return format_automaton(x); }, a);
}

// ---------------------------------------------------------------------------
// Self-similar schemes:
//   kind: gap | ap
//   alphabet: 0 1
//   base: 0 1                      one word per index
//   sigma: 0,0,1,1,0 1,1,0,0,1     index images, one per index
//   lead: -                        optional, "-" for empty
//   name: aabba                    optional

struct SchemeFile {
  SchemeKind kind = SchemeKind::gap;
  std::vector<std::string> alphabet;
  std::vector<std::string> base;
  std::vector<std::vector<std::size_t>> sigma;
  std::string lead = "-";
  std::string name = "scheme";

  Scheme build() const {
    Alphabet a(alphabet);
    std::vector<Word> words;
    for (const auto& b : base) words.push_back(Word::parse(a, b));
    Word l = lead == "-" ? Word(a) : Word::parse(a, lead);
    return Scheme::self_similar(kind, a, std::move(words), sigma, name, std::move(l));
  }
};

inline SchemeFile parse_scheme(std::string_view text) {
  using namespace detail;
  SchemeFile f;
  bool have_kind = false, have_alphabet = false, have_base = false, have_sigma = false;
  for (const auto& l : lines(text)) {
    auto h = header(l);
    if (!h) throw ParseError(l.number, "expected a 'key:' line");
    auto& [key, vals] = *h;
    if (key == "kind") {
      if (vals.size() != 1 || (vals[0] != "gap" && vals[0] != "ap"))
        throw ParseError(l.number, "kind must be 'gap' or 'ap'");
      f.kind = vals[0] == "gap" ? SchemeKind::gap : SchemeKind::ap;
      have_kind = true;
    } else if (key == "alphabet") {
      f.alphabet = vals;
      have_alphabet = true;
    } else if (key == "base") {
      f.base = vals;
      have_base = true;
    } else if (key == "sigma") {
      f.sigma.clear();
      for (const auto& v : vals) {
        std::vector<std::size_t> r;
        for (const auto& c : word_letters(v)) {
          if (c.empty() || !std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw ParseError(l.number, "sigma entries are index lists such as 0,1,1,0");
          r.push_back(static_cast<std::size_t>(std::stoul(c)));
        }
        f.sigma.push_back(std::move(r));
      }
      have_sigma = true;
    } else if (key == "lead") {
      if (vals.size() > 1) throw ParseError(l.number, "lead is a single word");
      f.lead = vals.empty() ? "-" : vals[0];
    } else if (key == "name") {
      if (vals.size() != 1) throw ParseError(l.number, "name is a single token");
      f.name = vals[0];
    } else {
      throw ParseError(l.number, "unknown key '" + key + "'");
    }
  }
  if (!have_kind || !have_alphabet || !have_base || !have_sigma)
    throw ParseError(0, "scheme needs kind, alphabet, base and sigma");
  try {
    (void)f.build();
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
  return f;
}

inline std::string format_scheme(const SchemeFile& f) {
  std::vector<std::string> sig;
  for (const auto& r : f.sigma) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
    sig.push_back(s);
  }
  return "kind: " + std::string(f.kind == SchemeKind::gap ? "gap" : "ap") + "\nalphabet: " + detail::join(f.alphabet) +
         "\nbase: " + detail::join(f.base) + "\nsigma: " + detail::join(sig) + "\nlead: " + f.lead +
         "\nname: " + f.name + "\n";
}

}  // namespace apseq::io
