#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lexmerge {

// Exact rational arithmetic for certainty degrees. Degrees live in [0,1]
// and the only arithmetic they ever see is complement (1 - a), min/max and
// comparison, so 64-bit numerator/denominator with gcd reduction is plenty.
// Intermediates go through __int128 to rule out overflow.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long value) : num_(value) {}

  Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    num_ = g == 0 ? 0 : num / g;
    den_ = g == 0 ? 1 : den / g;
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  // "0", "1", "3/5" -- never a float rendering.
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  // Accepts "3/5", "0.6", "1". Decimals are converted exactly and are
  // limited to 9 fraction digits. Returns nullopt on malformed input.
  static std::optional<Rational> parse(std::string_view text);

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_parts(static_cast<__int128>(a.num_) * b.den_ +
                          static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_parts(static_cast<__int128>(a.num_) * b.den_ -
                          static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
  }

 private:
  static Rational from_parts(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd128(num < 0 ? -num : num, den);
    if (g != 0) {
      num /= g;
      den /= g;
    } else {
      den = 1;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax)
      throw std::overflow_error("rational out of 64-bit range");
    Rational r;
    r.num_ = static_cast<long long>(num);
    r.den_ = static_cast<long long>(den);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  long long num_ = 0;
  long long den_ = 1;
};

inline std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (const char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto to_ll = [](std::string_view s) -> std::optional<long long> {
    if (s.size() > 18) return std::nullopt;
    long long v = 0;
    for (const char c : s) v = v * 10 + (c - '0');
    return v;
  };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    const auto n = to_ll(num);
    const auto d = to_ll(den);
    if (!n || !d || *d == 0) return std::nullopt;
    return Rational(*n, *d);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac) || frac.size() > 9)
      return std::nullopt;
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const auto w = to_ll(whole);
    const auto f = to_ll(frac);
    if (!w || !f) return std::nullopt;
    return Rational(*w * den + *f, den);
  }
  if (!all_digits(text)) return std::nullopt;
  const auto v = to_ll(text);
  if (!v) return std::nullopt;
  return Rational(*v);
}

inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

// Certainty/possibility degree. Formula weights are restricted to (0,1],
// possibility and inconsistency degrees to [0,1].
using Weight = Rational;

}  // namespace lexmerge
