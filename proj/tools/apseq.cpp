// apseq: generate, analyze, transduce and compare infinite sequences, and
// decide omega-automaton acceptance.
//
// Exit codes: 0 ok, 2 spec error, 3 horizon exhausted, 4 machine parse error,
// 5 no certified bound, 6 cost refusal.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apseq/analysis.hpp"
#include "apseq/io.hpp"
#include "apseq/omega.hpp"
#include "apseq/sequence_spec.hpp"
#include "apseq/transducer.hpp"

using namespace apseq;

namespace {

enum Exit { kOk = 0, kSpec = 2, kHorizon = 3, kMachine = 4, kNoBound = 5, kCost = 6 };

/// Machine and automaton files fail with this instead of a spec error.
struct MachineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MachineError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Collects "--key value" and "--key=value" pairs left over by CLI11.
std::map<std::string, std::string> extra_params(const std::vector<std::string>& rest) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& t = rest[i];
    if (t.rfind("--", 0) != 0) throw SpecError("unexpected argument '" + t + "'");
    std::string key = t.substr(2), value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= rest.size()) throw SpecError("missing value for '--" + key + "'");
      value = rest[++i];
    }
    out[key] = value;
  }
  return out;
}

struct SpecArgs {
  std::string spec;
  std::string family;
};

SequenceSpec resolve_spec(const SpecArgs& a, const std::vector<std::string>& rest, std::optional<std::uint64_t> seed) {
  std::string text;
  if (!a.spec.empty()) {
    if (!a.family.empty()) throw SpecError("give either --spec or --family");
    if (!rest.empty()) throw SpecError("family parameters go inside --spec");
    text = a.spec;
  } else {
    if (a.family.empty()) throw SpecError("missing --family or --spec");
    text = a.family;
    for (const auto& [k, v] : extra_params(rest)) text += " " + k + "=" + v;
  }
  SequenceSpec s = parse_sequence_spec(text);
  if (seed && !s.has("seed")) {
    const auto& schema = family_schemas().at(s.family);
    if (schema.optional.count("seed") || schema.required.count("seed")) s.params["seed"] = std::to_string(*seed);
  }
  return s;
}

void csv_header() { std::cout << "metric,param,value,kind,horizon\n"; }
void row(const std::string& metric, const std::string& param, const std::string& value, const std::string& kind,
         Length horizon) {
  std::cout << metric << ',' << param << ',' << value << ',' << kind << ',' << horizon << '\n';
}

struct AnalyzeArgs {
  std::string metric;
  std::size_t n = 0;
  std::size_t n_max = 10;
  Length horizon = 100000;
  std::size_t shift_max = 64;
  Length T = 65536;
  std::string kind = "square";
  std::size_t max_period = 0;
  std::string word;
  std::string pattern;
  Length i = 0;
  std::optional<Length> j;
  bool certified = false;
};

Word standalone_word(const std::string& w) {
  std::set<char> chars(w.begin(), w.end());
  if (w.empty()) throw SpecError("--word must be nonempty");
  bool binary = std::all_of(chars.begin(), chars.end(), [](char c) { return c == '0' || c == '1'; });
  Alphabet a = binary ? Alphabet::binary() : Alphabet::from_chars(std::string(chars.begin(), chars.end()));
  return Word::parse(a, w);
}

std::vector<std::size_t> n_range(const AnalyzeArgs& a) {
  std::vector<std::size_t> out;
  if (a.n > 0) return {a.n};
  for (std::size_t n = 1; n <= a.n_max; ++n) out.push_back(n);
  return out;
}

int run_analyze(const AnalyzeArgs& a, const std::optional<Sequence>& xs) {
  const std::string& m = a.metric;
  auto need = [&]() -> const Sequence& {
    if (!xs) throw SpecError("metric '" + m + "' needs a sequence (--family or --spec)");
    return *xs;
  };
  if (m == "quasiperiods") {
    const Word w = standalone_word(a.word);
    auto r = quasiperiods(w);
    csv_header();
    for (const auto& q : r.all) {
      const bool sp = std::find(r.superprimitive.begin(), r.superprimitive.end(), q) != r.superprimitive.end();
      row("quasiperiod", "length=" + std::to_string(q.size()), q.str(),
          q.size() == r.minimal.size() ? "minimal" : (sp ? "superprimitive" : "quasiperiod"), w.size());
    }
    return kOk;
  }
  if (m == "tiling") {
    const Word w = standalone_word(a.word);
    csv_header();
    if (!a.pattern.empty()) {
      row("tiling", "pattern=" + a.pattern, is_tiling_period(w, a.pattern) ? "true" : "false", "exact", w.size());
    } else {
      for (const auto& p : tiling_periods(w)) row("tiling", "cells=" + std::to_string(std::count_if(p.begin(), p.end(), [](auto& c) { return c.has_value(); })), pattern_str(w.alphabet(), p), "minimal", w.size());
    }
    return kOk;
  }
  const Sequence& x = need();
  if (m == "complexity") {
    csv_header();
    for (auto n : n_range(a)) {
      auto r = subword_complexity(x, n, a.horizon);
      row("complexity", "n=" + std::to_string(n), std::to_string(r.count), r.exact ? "exact" : "lower", a.horizon);
    }
  } else if (m == "regulator") {
    csv_header();
    for (auto n : n_range(a)) {
      if (a.certified) {
        auto r = certified_regulator(x, n);
        row("regulator", "n=" + std::to_string(n), std::to_string(r.value), to_string(r.kind), r.horizon);
      } else {
        auto r = empirical_regulator(x, n, a.horizon);
        row("regulator", "n=" + std::to_string(n), std::to_string(r.value), to_string(r.kind), a.horizon);
      }
    }
  } else if (m == "prefix-regulator") {
    csv_header();
    for (auto n : n_range(a))
      row("prefix-regulator", "n=" + std::to_string(n), std::to_string(prefix_regulator(x, n, a.horizon)),
          "empirical-lower", a.horizon);
  } else if (m == "rd") {
    auto r = ap_coefficient(x, a.n_max, a.horizon);
    csv_header();
    for (std::size_t n = 1; n <= a.n_max; ++n)
      row("rd", "n=" + std::to_string(n), std::to_string(r.rd[n - 1]), "empirical-lower", a.horizon);
    row("rd-max-ratio", "n=" + std::to_string(r.argmax_rd), fmt(r.max_rd_ratio), "lower-estimate", a.horizon);
    row("r-max-ratio", "n=" + std::to_string(r.argmax_r), fmt(r.max_r_ratio), "lower-estimate", a.horizon);
  } else if (m == "balance") {
    auto r = is_balanced(x, a.n_max, a.horizon);
    csv_header();
    if (r.balanced)
      row("balance", "n_max=" + std::to_string(a.n_max), "true", "exact", a.horizon);
    else
      row("balance", "n=" + std::to_string(r.n) + ";u=" + r.u->str() + ";v=" + r.v->str(), "false", "exact",
          a.horizon);
  } else if (m == "powers") {
    PowerKind k;
    if (a.kind == "square")
      k = PowerKind::square;
    else if (a.kind == "cube")
      k = PowerKind::cube;
    else if (a.kind == "overlap")
      k = PowerKind::overlap;
    else
      throw SpecError("--kind must be square, cube or overlap");
    auto occ = detect_powers(x, a.horizon, k, a.max_period);
    csv_header();
    for (const auto& o : occ) row(a.kind, "position=" + std::to_string(o.position), std::to_string(o.period), "exact", a.horizon);
  } else if (m == "am") {
    auto r = am_estimate(x, a.shift_max, a.T);
    csv_header();
    for (std::size_t s = 1; s <= a.shift_max; ++s) row("am", "shift=" + std::to_string(s), fmt(r.density[s - 1]), "estimate", a.T);
    row("am-min", "shift=" + std::to_string(r.argmin), fmt(r.min), "estimate", a.T);
  } else if (m == "frequency") {
    if (a.word.empty()) throw SpecError("frequency needs --word");
    const Length j = a.j.value_or(a.horizon - 1);
    auto r = frequency(x, Word::parse(x.alphabet(), a.word), a.i, j);
    csv_header();
    row("frequency", "u=" + a.word + ";i=" + std::to_string(a.i) + ";j=" + std::to_string(j), r.density.str(), "exact",
        j + 1);
  } else if (m == "entropy") {
    csv_header();
    for (auto n : n_range(a))
      row("entropy", "n=" + std::to_string(n), fmt(entropy_estimate(x, n, a.horizon)), "estimate", a.horizon);
  } else if (m == "screen") {
    auto r = periodicity_screen(x, a.horizon, a.n_max);
    csv_header();
    for (std::size_t n = 1; n <= r.complexity.size(); ++n)
      row("screen", "n=" + std::to_string(n), std::to_string(r.complexity[n - 1]), "complexity", a.horizon);
    if (r.confirmed) {
      row("screen", "preperiod", std::to_string(*r.preperiod), "detected", a.horizon);
      row("screen", "period", std::to_string(*r.period), "detected", a.horizon);
    } else {
      row("screen", "periodic", r.triggered_at ? "unconfirmed" : "false", "screen", a.horizon);
    }
  } else {
    throw SpecError("unknown metric '" + m + "'");
  }
  return kOk;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const MachineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMachine;
  } catch (const ParseError& e) {
    std::cerr << "machine parse error: " << e.what() << '\n';
    return kMachine;
  } catch (const UnsupportedFeature& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kMachine;
  } catch (const NoCertifiedBound& e) {
    std::cerr << "no certified bound: " << e.what() << '\n'
              << "acceptance is decided only for sequences with a computable regulator bound; "
                 "this family ships none, so the question is outside what can be decided here.\n";
    return kNoBound;
  } catch (const CostRefusal& e) {
    std::cerr << "refused: " << e.what() << " (raise APSEQ_HORIZON_CAP to allow it)\n";
    return kCost;
  } catch (const HorizonExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHorizon;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSpec;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* cap = std::getenv("APSEQ_HORIZON_CAP")) {
    try {
      set_default_horizon_cap(std::stoull(cap));
    } catch (const std::exception&) {
      std::cerr << "error: APSEQ_HORIZON_CAP must be a positive integer\n";
      return kSpec;
    }
  }

  CLI::App app{"Infinite sequences close to periodic: generate, analyze, transduce, decide, compare"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for randomized families and scheme policies");

  SpecArgs gen_spec;
  Length gen_n = 0;
  auto* gen = app.add_subcommand("gen", "Print a prefix of a sequence");
  gen->add_option("--spec", gen_spec.spec, "Sequence spec 'family key=value ...' or @file");
  gen->add_option("--family", gen_spec.family, "Family name; parameters follow as --key value");
  gen->add_option("--n", gen_n, "Number of symbols")->required();
  gen->allow_extras();

  SpecArgs an_spec;
  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Run an analysis and print CSV rows");
  analyze->add_option("--spec", an_spec.spec, "Sequence spec");
  analyze->add_option("--family", an_spec.family, "Family name");
  analyze->add_option("--metric", an.metric,
                      "complexity|regulator|prefix-regulator|rd|balance|powers|am|frequency|entropy|quasiperiods|tiling|screen")
      ->required();
  analyze->add_option("--n", an.n, "Single factor length");
  analyze->add_option("--n-max", an.n_max, "Largest factor length");
  analyze->add_option("--horizon", an.horizon, "Prefix length examined");
  analyze->add_option("--shift-max", an.shift_max, "Largest shift for am");
  analyze->add_option("--T", an.T, "Averaging length for am");
  analyze->add_option("--kind", an.kind, "square|cube|overlap");
  analyze->add_option("--max-period", an.max_period, "Largest |u| for powers");
  analyze->add_option("--word", an.word, "Word for frequency, quasiperiods, tiling");
  analyze->add_option("--pattern", an.pattern, "Tiling pattern, '?' for holes");
  analyze->add_option("--i", an.i, "Frequency interval start");
  analyze->add_option("--j", an.j, "Frequency interval end");
  analyze->add_flag("--certified", an.certified, "Use the certified regulator");
  analyze->allow_extras();

  SpecArgs td_spec;
  std::string machine;
  Length td_n = 0;
  bool emit_bound = false;
  auto* td = app.add_subcommand("transduce", "Apply a finite-state transducer");
  td->add_option("--machine", machine, "Transducer file")->required();
  td->add_option("--spec", td_spec.spec, "Sequence spec");
  td->add_option("--family", td_spec.family, "Family name");
  td->add_option("--n", td_n, "Number of output symbols")->required();
  td->add_flag("--emit-bound", emit_bound, "Print the propagated bound at n = 1..8");
  td->allow_extras();

  SpecArgs dc_spec;
  std::string automaton;
  auto* dc = app.add_subcommand("decide", "Decide whether an automaton accepts a sequence");
  dc->add_option("--automaton", automaton, "Automaton file")->required();
  dc->add_option("--spec", dc_spec.spec, "Sequence spec");
  dc->add_option("--family", dc_spec.family, "Family name");
  dc->allow_extras();

  std::string spec_a, spec_b;
  Length cmp_h = 100000;
  auto* cmp = app.add_subcommand("compare", "Compare two sequences");
  cmp->add_option("--a", spec_a, "First sequence spec")->required();
  cmp->add_option("--b", spec_b, "Second sequence spec")->required();
  cmp->add_option("--horizon", cmp_h, "Prefix length compared");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSpec;
  }
  if (seed) std::cerr << "# seed=" << *seed << '\n';

  if (*gen) {
    return guarded([&] {
      auto x = build_sequence(resolve_spec(gen_spec, gen->remaining(), seed));
      std::cout << prefix(x, gen_n).str() << '\n';
      return kOk;
    });
  }
  if (*analyze) {
    return guarded([&] {
      std::optional<Sequence> x;
      if (!an_spec.spec.empty() || !an_spec.family.empty())
        x = build_sequence(resolve_spec(an_spec, analyze->remaining(), seed));
      else if (!analyze->remaining().empty())
        throw SpecError("unexpected arguments without --family");
      return run_analyze(an, x);
    });
  }
  if (*td) {
    return guarded([&] {
      Transducer m = io::parse_transducer(read_file(machine));
      auto x = build_sequence(resolve_spec(td_spec, td->remaining(), seed));
      auto y = transduce(m, x);
      std::cout << prefix(y, td_n).str() << '\n';
      if (emit_bound) {
        if (!y.certified_bound()) {
          std::cout << "bound: none\n";
        } else {
          std::cout << "bound: " << y.certified_bound()->provenance() << '\n';
          for (Length n = 1; n <= 8; ++n) std::cout << "bound n=" << n << " " << (*y.certified_bound())(n) << '\n';
        }
      }
      return kOk;
    });
  }
  if (*dc) {
    return guarded([&] {
      io::Automaton aut = io::parse_automaton(read_file(automaton));
      auto x = build_sequence(resolve_spec(dc_spec, dc->remaining(), seed));
      Verdict v = std::holds_alternative<MullerAutomaton>(aut) ? decide_muller(std::get<MullerAutomaton>(aut), x)
                                                               : decide_buchi_det(std::get<BuchiAutomaton>(aut), x);
      std::cout << (v.accept ? "ACCEPT" : "REJECT") << ' ' << v.limit_str() << '\n';
      std::cout << "window: [" << v.window.i << ", " << v.window.j << "]\n";
      std::cout << "bound: " << v.bound_trace.provenance() << '\n';
      return kOk;
    });
  }
  if (*cmp) {
    return guarded([&] {
      auto a = build_sequence(parse_sequence_spec(spec_a));
      auto b = build_sequence(parse_sequence_spec(spec_b));
      require_same_alphabet(a.alphabet(), b.alphabet(), "compare");
      auto agree = agreement_length(a, b, cmp_h);
      if (agree)
        std::cout << "agreement: " << *agree << '\n';
      else
        std::cout << "agreement: >=" << cmp_h << '\n';
      std::cout << "density: " << fmt(besicovitch_density(a, b, cmp_h)) << '\n';
      if (agree) {
        const Length from = *agree >= 5 ? *agree - 5 : 0;
        const Length to = std::min<Length>(*agree + 6, cmp_h);
        std::cout << "divergence: " << *agree << " a=" << segment(a, Segment{from, to - 1}).str()
                  << " b=" << segment(b, Segment{from, to - 1}).str() << '\n';
      }
      return kOk;
    });
  }
  return kSpec;
}
