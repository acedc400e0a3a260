#pragma once

// Exception types used across apseq. Each failure class maps to a distinct
// CLI exit code (see tools/apseq.cpp).

#include <cstdint>
#include <stdexcept>
#include <string>

namespace apseq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or unknown sequence specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// An evaluation tried to read past the horizon cap.
class HorizonExhausted : public Error {
 public:
  HorizonExhausted(std::uint64_t requested, std::uint64_t cap)
      : Error("horizon exhausted: requested " + std::to_string(requested) +
              " symbols, cap is " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// A real-parameter enclosure failed to separate a floor/ceiling decision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Scheme generation found no continuation satisfying the constraints.
class GenerationStuck : public Error {
 public:
  GenerationStuck(std::size_t level, const std::string& what)
      : Error("generation stuck at level " + std::to_string(level) + ": " + what),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

/// A morphism's iterates stay finite, so no infinite sequence exists.
class ImageCollapse : public Error {
 public:
  using Error::Error;
};

/// Pushdown machine performed an undefined stack operation.
class MachineFault : public Error {
 public:
  using Error::Error;
};

/// Text-format parse failure (machines, automata, schemes).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Decision requested on a sequence without a certified regulator bound.
class NoCertifiedBound : public Error {
 public:
  using Error::Error;
};

/// The certified window exceeds the evaluation horizon cap.
class CostRefusal : public Error {
 public:
  CostRefusal(std::uint64_t required, std::uint64_t cap)
      : Error("required window of " + std::to_string(required) +
              " symbols exceeds horizon cap " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

}  // namespace apseq
