#pragma once

// Morphisms between free monoids and deterministic finite automata with output.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apseq/core.hpp"

namespace apseq {

class Morphism {
 public:
  /// images[a] is the image of source letter a. Empty images require `erasing`.
  Morphism(Alphabet source, Alphabet target, std::vector<Word> images, bool erasing = false)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), erasing_(erasing) {
    if (images_.size() != source_.size()) throw InvalidArgument("morphism needs one image per source letter");
    for (std::size_t a = 0; a < images_.size(); ++a) {
      require_same_alphabet(images_[a].alphabet(), target_, "morphism image");
      if (images_[a].empty() && !erasing_)
        throw InvalidArgument("empty image for '" + source_.name(static_cast<Symbol>(a)) +
                              "' in a nonerasing morphism");
    }
  }

  /// Endomorphism from rules such as {"0", "01"}, {"1", "10"} on a
  /// single-character alphabet.
  static Morphism endo(const Alphabet& a, const std::vector<std::string>& images, bool erasing = false) {
    std::vector<Word> ws;
    for (const auto& s : images) ws.push_back(Word::parse(a, s));
    return Morphism(a, a, std::move(ws), erasing);
  }

  static Morphism identity(const Alphabet& a) {
    std::vector<Word> ws;
    for (std::size_t i = 0; i < a.size(); ++i) ws.emplace_back(a, std::vector<Symbol>{static_cast<Symbol>(i)});
    return Morphism(a, a, std::move(ws));
  }

  const Alphabet& source() const noexcept { return source_; }
  const Alphabet& target() const noexcept { return target_; }
  const Word& image(Symbol a) const { return images_.at(a); }
  const std::vector<Word>& images() const noexcept { return images_; }
  bool erasing() const noexcept { return erasing_; }

  bool is_uniform() const noexcept {
    for (const auto& w : images_)
      if (w.size() != images_.front().size()) return false;
    return true;
  }
  /// Common image length, or 0 when not uniform.
  std::size_t uniform_length() const noexcept { return is_uniform() ? images_.front().size() : 0; }
  bool is_coding() const noexcept { return uniform_length() == 1; }

  Word apply(const Word& u) const {
    require_same_alphabet(u.alphabet(), source_, "Morphism::apply");
    std::vector<Symbol> out;
    for (Symbol a : u.letters()) {
      const auto& im = images_[a].letters();
      out.insert(out.end(), im.begin(), im.end());
    }
    return Word(target_, std::move(out));
  }

  Word operator()(const Word& u) const { return apply(u); }

  /// Letters whose iterated images eventually become empty (endomorphisms only).
  std::set<Symbol> mortal_letters() const {
    require_same_alphabet(source_, target_, "mortal_letters");
    std::set<Symbol> mortal;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a < images_.size(); ++a) {
        if (mortal.count(static_cast<Symbol>(a))) continue;
        bool all = true;
        for (Symbol b : images_[a].letters()) all = all && mortal.count(b);
        if (all) {
          mortal.insert(static_cast<Symbol>(a));
          changed = true;
        }
      }
    }
    return mortal;
  }

  /// Rules as "a->w" joined by commas; the empty image prints as "-".
  std::string str() const {
    std::string out;
    for (std::size_t a = 0; a < images_.size(); ++a) {
      if (a > 0) out += ',';
      out += source_.name(static_cast<Symbol>(a)) + "->" + (images_[a].empty() ? "-" : images_[a].str());
    }
    return out;
  }

 private:
  Alphabet source_;
  Alphabet target_;
  std::vector<Word> images_;
  bool erasing_;
};

/// Deterministic finite automaton with output reading base-k digits,
/// most significant first.
class DFAO {
 public:
  /// delta[q][d] is the successor of q on digit d; output[q] is a symbol of `out`.
  DFAO(unsigned base, std::vector<std::vector<std::size_t>> delta, std::vector<Symbol> output, Alphabet out,
       std::size_t initial = 0)
      : base_(base), delta_(std::move(delta)), output_(std::move(output)), out_(std::move(out)), initial_(initial) {
    if (base_ < 2) throw InvalidArgument("DFAO base must be at least 2");
    if (delta_.empty() || output_.size() != delta_.size()) throw InvalidArgument("DFAO state tables disagree");
    if (initial_ >= delta_.size()) throw InvalidArgument("DFAO initial state out of range");
    for (const auto& row : delta_) {
      if (row.size() != base_) throw InvalidArgument("DFAO transition must be total");
      for (auto q : row)
        if (q >= delta_.size()) throw InvalidArgument("DFAO transition target out of range");
    }
    for (Symbol s : output_)
      if (!out_.contains(s)) throw InvalidArgument("DFAO output outside alphabet");
  }

  unsigned base() const noexcept { return base_; }
  std::size_t states() const noexcept { return delta_.size(); }
  const Alphabet& output_alphabet() const noexcept { return out_; }

  Symbol eval(std::uint64_t n) const {
    std::vector<unsigned> digits;
    do {
      digits.push_back(static_cast<unsigned>(n % base_));
      n /= base_;
    } while (n > 0);
    std::size_t q = initial_;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) q = delta_[q][*it];
    return output_[q];
  }

 private:
  unsigned base_;
  std::vector<std::vector<std::size_t>> delta_;
  std::vector<Symbol> output_;
  Alphabet out_;
  std::size_t initial_;
};

}  // namespace apseq
