#include "theta/mp.hpp"

#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace theta {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(__int128 n, __int128 d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Rational(checked(n), checked(d));
}

}  // namespace

Precision::Precision(int digits_, int guard_) : digits(digits_), guard(guard_) {
  if (digits < 10) throw std::invalid_argument("precision below 10 digits");
  if (guard < 0) throw std::invalid_argument("negative guard digits");
}

mpfr_prec_t Precision::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(working_digits() * kLog2Of10)) + 4;
}

Precision wider(const Precision& a, const Precision& b) {
  return a.working_digits() >= b.working_digits() ? a : b;
}

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (n == INT64_MIN || d == INT64_MIN) throw std::overflow_error("rational component out of range");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  num_ = n / g;
  den_ = d / g;
}

Rational Rational::operator-() const { return make_reduced(-static_cast<__int128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return make_reduced(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
  auto to_i64 = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  if (text.empty()) throw bad();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t d = to_i64(text.substr(slash + 1));
    if (d <= 0) throw bad();
    return Rational(to_i64(text.substr(0, slash)), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip.remove_prefix(1);
    if (fp.empty() || fp.size() > 18) throw bad();
    for (char c : fp) {
      if (c < '0' || c > '9') throw bad();
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Rational r = Rational(ip.empty() ? 0 : to_i64(ip)) + Rational(to_i64(fp), scale);
    return neg ? -r : r;
  }
  return Rational(to_i64(text));
}

// ---------------------------------------------------------------- BigReal

BigReal::BigReal(const Precision& prec) : prec_(prec) {
  mpfr_init2(value_, prec_.bits());
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, const Precision& prec) : prec_(prec) {
  mpfr_init2(value_, prec_.bits());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const Rational& value, const Precision& prec) : prec_(prec) {
  mpfr_init2(value_, prec_.bits());
  mpfr_set_si(value_, value.num(), MPFR_RNDN);
  if (value.den() != 1) mpfr_div_si(value_, value_, value.den(), MPFR_RNDN);
}

BigReal BigReal::from_string(std::string_view text, const Precision& prec) {
  BigReal r(prec);
  std::string s(text);
  char* end = nullptr;
  if (s.empty()) throw std::invalid_argument("empty number");
  mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  if (!r.is_finite()) throw std::invalid_argument("non-finite number '" + s + "'");
  return r;
}

BigReal::BigReal(const BigReal& other) : prec_(other.prec_) {
  mpfr_init2(value_, prec_.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    prec_ = other.prec_;
    mpfr_set_prec(value_, prec_.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) {
    std::swap(prec_, other.prec_);
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::with_precision(const Precision& prec) const {
  BigReal r(prec);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

namespace {
// Widen the left operand in place when the right one carries more digits.
void widen(BigReal& a, const BigReal& b) {
  if (b.precision().working_digits() > a.precision().working_digits()) a = a.with_precision(b.precision());
}
}  // namespace

BigReal& BigReal::operator+=(const BigReal& o) {
  widen(*this, o);
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& o) {
  widen(*this, o);
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& o) {
  widen(*this, o);
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  widen(*this, o);
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

bool operator==(const BigReal& a, long b) { return !mpfr_nan_p(a.value_) && mpfr_cmp_si(a.value_, b) == 0; }

std::partial_ordering operator<=>(const BigReal& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

int BigReal::sign() const { return mpfr_sgn(value_); }
bool BigReal::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool BigReal::is_finite() const { return mpfr_number_p(value_) != 0; }
bool BigReal::is_integer() const { return mpfr_integer_p(value_) != 0; }
double BigReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
long BigReal::to_long() const { return mpfr_get_si(value_, MPFR_RNDN); }

double BigReal::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, value_, MPFR_RNDN);
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

namespace {

// Decimal digits and exponent such that value = 0.DIGITS * 10^exp.
std::pair<std::string, long> decimal_digits(mpfr_srcptr v, int significant) {
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(significant), v, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  if (!digits.empty() && digits[0] == '-') digits.erase(0, 1);
  return {digits, static_cast<long>(e)};
}

}  // namespace

std::string BigReal::to_scientific(int significant) const {
  if (significant < 1) significant = 1;
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  auto [d, e] = decimal_digits(value_, significant);
  std::string out = sign() < 0 ? "-" : "";
  out += d[0];
  if (d.size() > 1) {
    out += '.';
    out += d.substr(1);
  }
  out += "e" + std::to_string(e - 1);
  return out;
}

std::string BigReal::to_string(int significant) const {
  if (significant < 1) significant = 1;
  if (!is_finite() || is_zero()) return to_scientific(significant);
  auto [d, e] = decimal_digits(value_, significant);
  if (e < -5 || e > significant) return to_scientific(significant);
  std::string out = sign() < 0 ? "-" : "";
  if (e <= 0) {
    out += "0." + std::string(static_cast<size_t>(-e), '0') + d;
  } else {
    out += d.substr(0, static_cast<size_t>(e));
    if (static_cast<size_t>(e) < d.size()) out += "." + d.substr(static_cast<size_t>(e));
  }
  return out;
}

// ---------------------------------------------------------------- functions

BigReal abs(BigReal x) {
  mpfr_abs(x.raw(), x.get(), MPFR_RNDN);
  return x;
}

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw DomainError("square root of a negative number");
  BigReal r(x.precision());
  mpfr_sqrt(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  if (!x.is_finite()) throw DomainError("exp of a non-finite value");
  BigReal r(x.precision());
  mpfr_exp(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive number");
  BigReal r(x.precision());
  mpfr_log(r.raw(), x.get(), MPFR_RNDN);
  return r;
}

BigReal pow_int(const BigReal& x, long n) {
  if (n < 0 && x.is_zero()) throw DomainError("zero raised to a negative power");
  BigReal r(x.precision());
  mpfr_pow_si(r.raw(), x.get(), n, MPFR_RNDN);
  return r;
}

BigReal pow_rational(const BigReal& x, const Rational& p) {
  if (p.is_integer()) return pow_int(x, p.num());
  if (x.sign() < 0) throw DomainError("negative base " + x.to_string(12) + " under fractional power " + p.to_string());
  if (x.is_zero()) {
    if (p.sign() > 0) return BigReal(x.precision());
    throw DomainError("zero raised to non-positive power " + p.to_string());
  }
  BigReal root(x.precision());
  mpfr_rootn_ui(root.raw(), x.get(), static_cast<unsigned long>(p.den()), MPFR_RNDN);
  return pow_int(root, p.num());
}

BigReal pi(const Precision& prec) {
  BigReal r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

BigReal pow10(long e, const Precision& prec) {
  BigReal r(10, prec);
  mpfr_pow_si(r.raw(), r.get(), e, MPFR_RNDN);
  return r;
}

}  // namespace theta
