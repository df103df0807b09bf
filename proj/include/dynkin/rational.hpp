#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dynkin {

// Exact rational backed by GMP. Always kept in lowest terms with a positive
// denominator, so equality is structural.
class Rational {
 public:
  Rational() = default;

  template <std::integral Int>
  Rational(Int value)  // NOLINT(google-explicit-constructor)
      : value_(static_cast<long>(value)) {}

  Rational(std::int64_t numerator, std::int64_t denominator);

  // Accepts "p/q" or an integer string, optionally with a leading '-'.
  // Decimal notation is rejected; the message asks for "p/q".
  static Rational parse(std::string_view text);

  // Canonical text: "p/q", or "p" when the denominator is one.
  std::string str() const;

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  Rational operator-() const;

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const { return value_.get_d(); }

 private:
  explicit Rational(mpq_class value) : value_(std::move(value)) {}

  mpq_class value_;
};

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& q);

namespace literals {
inline Rational operator""_q(const char* text, std::size_t len) {
  return Rational::parse(std::string_view(text, len));
}
}  // namespace literals

}  // namespace dynkin
