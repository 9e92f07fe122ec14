#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace theta {

// Raised for inputs outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Precision {
  int digits = 50;
  int guard = 10;

  Precision() = default;
  explicit Precision(int digits, int guard = 10);

  int working_digits() const { return digits + guard; }
  mpfr_prec_t bits() const;

  bool operator==(const Precision&) const = default;
};

// Exact rational with 64-bit parts, always reduced and with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // "3", "-1/2"
  std::string to_string() const;
  // Accepts "3", "-1/2", "0.25".
  static Rational parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

class BigReal {
 public:
  explicit BigReal(const Precision& prec = Precision{});
  BigReal(long value, const Precision& prec);
  BigReal(const Rational& value, const Precision& prec);
  // Throws std::invalid_argument on malformed text.
  static BigReal from_string(std::string_view text, const Precision& prec);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  const Precision& precision() const { return prec_; }
  // Same value rounded to another precision.
  BigReal with_precision(const Precision& prec) const;

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal operator-() const;

  friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
  friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
  friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
  friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }

  friend bool operator==(const BigReal& a, const BigReal& b);
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b);
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

  int sign() const;
  bool is_zero() const;
  bool is_finite() const;
  bool is_integer() const;
  double to_double() const;
  long to_long() const;
  // Natural log of |x| as a double; -inf for zero. Safe far outside double range.
  double log_abs() const;

  // Rounded to `significant` digits; fixed notation for moderate exponents,
  // scientific otherwise.
  std::string to_string(int significant) const;
  std::string to_string() const { return to_string(prec_.digits); }
  std::string to_scientific(int significant) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr raw() { return value_; }

 private:
  Precision prec_;
  mpfr_t value_;
};

BigReal abs(BigReal x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal pow_int(const BigReal& x, long n);
BigReal pow_rational(const BigReal& x, const Rational& p);
BigReal pi(const Precision& prec);
// 10^e at the given precision.
BigReal pow10(long e, const Precision& prec);

// Precision of a binary result: the wider of the two.
Precision wider(const Precision& a, const Precision& b);

}  // namespace theta
