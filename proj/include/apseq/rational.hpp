#pragma once

// Exact rationals and refinable real parameters for mechanical sequences.

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apseq/errors.hpp"

namespace apseq {

using Int128 = __int128;

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) {  // NOLINT(google-explicit-constructor)
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    set(num, den);
  }

  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    try {
      if (slash == std::string_view::npos) return Rational(std::stoll(std::string(text)));
      return Rational(std::stoll(std::string(text.substr(0, slash))),
                      std::stoll(std::string(text.substr(slash + 1))));
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed rational '" + std::string(text) + "'");
    }
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  /// "p/q", or "p" when q = 1.
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(Int128(a.num_) * b.den_ + Int128(b.num_) * a.den_, Int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(Int128(a.num_) * b.den_ - Int128(b.num_) * a.den_, Int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(Int128(a.num_) * b.num_, Int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("division by zero");
    return from128(Int128(a.num_) * b.den_, Int128(a.den_) * b.num_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const Int128 l = Int128(a.num_) * b.den_;
    const Int128 r = Int128(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  static Int128 gcd128(Int128 a, Int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      Int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from128(Int128 num, Int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr Int128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) throw PrecisionExhausted("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void set(std::int64_t num, std::int64_t den) {
    *this = from128(num, den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Closed rational interval [lo, hi].
struct Enclosure {
  Rational lo;
  Rational hi;
};

/// A real number given either exactly or as a refinable enclosure oracle.
/// oracle(level) returns an interval containing the value; widths must not
/// grow with level and should shrink to zero.
class RealParam {
 public:
  using Oracle = std::function<Enclosure(unsigned level)>;

  RealParam(Rational exact) : exact_(exact) {}  // NOLINT(google-explicit-constructor)
  RealParam(std::int64_t n) : exact_(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  RealParam(Oracle oracle, std::string name) : oracle_(std::move(oracle)), name_(std::move(name)) {}

  /// Real number with the given continued fraction [a0; a1, a2, ...].
  /// Consecutive convergents bracket the value.
  static RealParam continued_fraction(std::function<std::int64_t(std::size_t)> term, std::string name) {
    Oracle oracle = [term = std::move(term)](unsigned level) {
      // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
      std::int64_t h2 = 0, k2 = 1, h1 = 1, k1 = 0;
      std::int64_t hp = 0, kp = 1;
      for (std::size_t i = 0; i <= static_cast<std::size_t>(level) + 1; ++i) {
        const Int128 a = term(i);
        const Int128 h = a * h1 + h2;
        const Int128 k = a * k1 + k2;
        if (h > (Int128(1) << 40) || k > (Int128(1) << 40))
          break;  // refinement stops; the interval below no longer shrinks
        hp = h1;
        kp = k1;
        h2 = h1;
        k2 = k1;
        h1 = static_cast<std::int64_t>(h);
        k1 = static_cast<std::int64_t>(k);
      }
      if (kp == 0) return Enclosure{Rational(h1, k1), Rational(h1, k1) + Rational(1)};
      Rational a(hp, kp), b(h1, k1);
      return a < b ? Enclosure{a, b} : Enclosure{b, a};
    };
    return RealParam(std::move(oracle), std::move(name));
  }

  bool is_exact() const noexcept { return exact_.has_value(); }
  const std::optional<Rational>& exact() const noexcept { return exact_; }

  Enclosure enclose(unsigned level) const {
    if (exact_) return {*exact_, *exact_};
    return oracle_(level);
  }

  /// "p/q" for exact values, the oracle name otherwise.
  std::string str() const { return exact_ ? exact_->str() : name_; }

 private:
  std::optional<Rational> exact_;
  Oracle oracle_;
  std::string name_;
};

/// 1/φ = [0; 1, 1, 1, ...].
inline RealParam inverse_golden() {
  return RealParam::continued_fraction([](std::size_t i) -> std::int64_t { return i == 0 ? 0 : 1; },
                                       "inverse_golden");
}

/// 1/φ² = 2 - φ = [0; 2, 1, 1, 1, ...].
inline RealParam inverse_golden_squared() {
  return RealParam::continued_fraction(
      [](std::size_t i) -> std::int64_t { return i == 0 ? 0 : (i == 1 ? 2 : 1); }, "inverse_golden_squared");
}

inline std::int64_t floor_div(Int128 num, Int128 den) {
  Int128 q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return static_cast<std::int64_t>(q);
}

inline std::int64_t floor(const Rational& r) { return floor_div(r.num(), r.den()); }
inline std::int64_t ceil(const Rational& r) { return -floor_div(-Int128(r.num()), r.den()); }

}  // namespace apseq
