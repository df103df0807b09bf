#include "dynkin/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace dynkin {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(numerator)),
                     mpz_class(static_cast<long>(denominator)));
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const std::string original(text);
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    const auto dot = body.find('.');
    if (slash == std::string_view::npos && dot != std::string_view::npos && all_digits(body.substr(0, dot)) &&
        all_digits(body.substr(dot + 1))) {
      // Suggest the exact fraction the decimal stands for.
      const std::string digits = std::string(body.substr(0, dot)) + std::string(body.substr(dot + 1));
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, body.size() - dot - 1);
      mpq_class q(mpz_class(digits, 10), scale);
      q.canonicalize();
      if (negative) q = -q;
      throw std::invalid_argument("invalid rational \"" + original + "\": decimals are not accepted, write \"" +
                                  Rational(std::move(q)).str() + "\" (\"p/q\")");
    }
    throw std::invalid_argument("invalid rational \"" + original +
                                "\": expected an integer or \"p/q\" (e.g. \"1/2\"), decimals are not accepted");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("invalid rational \"" + original + "\": zero denominator");
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace dynkin
