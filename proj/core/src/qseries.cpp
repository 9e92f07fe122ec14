#include "theta/qseries.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <variant>

namespace theta {

namespace {

constexpr long kMaxTerms = 5'000'000;
const double kLn10 = std::log(10.0);
const double kLn2 = std::log(2.0);

// Natural log of the absolute tail allowance at q's working precision.
double tail_allowance(const Precision& prec) { return -(prec.working_digits() + 1) * kLn10; }

void require_unit_disc(const BigReal& q, const char* what) {
  if (!(abs(q) < 1)) throw DomainError(std::string(what) + ": |q| must be below 1, got " + q.to_string(12));
}

// Smallest N >= 0 such that log_tail(N) <= allowance; log_tail must be decreasing.
template <class F>
long first_below(F log_tail, double allowance) {
  long n = 0;
  while (log_tail(n) > allowance) {
    if (++n > kMaxTerms) throw DomainError("series converges too slowly at this nome");
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------- ThetaPoint

struct ThetaPoint::Form {
  struct Literal {
    std::variant<Rational, BigReal> value;
  };
  struct Nome {
    Rational ratio;  // n/k
    int sign;
  };
  std::variant<Literal, Nome> form;
};

namespace {

struct NomeKey {
  Rational ratio;
  int sign;
  int digits;
  int guard;
  bool operator<(const NomeKey& o) const {
    return std::tie(ratio, sign, digits, guard) < std::tie(o.ratio, o.sign, o.digits, o.guard);
  }
};

std::mutex g_nome_mutex;
std::map<NomeKey, BigReal>& nome_cache() {
  static std::map<NomeKey, BigReal> cache;
  return cache;
}

}  // namespace

ThetaPoint ThetaPoint::literal(const BigReal& q) {
  require_unit_disc(q, "literal nome");
  return ThetaPoint(std::make_shared<const Form>(Form{Form::Literal{q}}));
}

ThetaPoint ThetaPoint::literal(const Rational& q) {
  if (!(Rational(-1) < q && q < Rational(1))) throw DomainError("literal nome outside (-1, 1): " + q.to_string());
  return ThetaPoint(std::make_shared<const Form>(Form{Form::Literal{q}}));
}

ThetaPoint ThetaPoint::nome(const Rational& n, const Rational& k, int sign) {
  if (n.sign() <= 0 || k.sign() <= 0) throw DomainError("nome needs n > 0 and k > 0");
  if (sign != 1 && sign != -1) throw DomainError("nome sign must be +1 or -1");
  return ThetaPoint(std::make_shared<const Form>(Form{Form::Nome{n / k, sign}}));
}

bool ThetaPoint::is_nome() const { return std::holds_alternative<Form::Nome>(form_->form); }

BigReal ThetaPoint::realize(const Precision& prec) const {
  if (const auto* lit = std::get_if<Form::Literal>(&form_->form)) {
    if (const auto* r = std::get_if<Rational>(&lit->value)) return BigReal(*r, prec);
    return std::get<BigReal>(lit->value).with_precision(prec);
  }
  const auto& nm = std::get<Form::Nome>(form_->form);
  NomeKey key{nm.ratio, nm.sign, prec.digits, prec.guard};
  {
    std::lock_guard lock(g_nome_mutex);
    auto it = nome_cache().find(key);
    if (it != nome_cache().end()) return it->second;
  }
  BigReal q = exp(-(pi(prec) * sqrt(BigReal(nm.ratio, prec))));
  if (nm.sign < 0) q = -q;
  std::lock_guard lock(g_nome_mutex);
  return nome_cache().emplace(key, q).first->second;
}

std::string ThetaPoint::describe() const {
  if (const auto* lit = std::get_if<Form::Literal>(&form_->form)) {
    if (const auto* r = std::get_if<Rational>(&lit->value)) return r->to_string();
    return std::get<BigReal>(lit->value).to_string(20);
  }
  const auto& nm = std::get<Form::Nome>(form_->form);
  return std::string(nm.sign < 0 ? "-" : "") + "e^(-pi*sqrt(" + nm.ratio.to_string() + "))";
}

// ---------------------------------------------------------------- term counts

long phi_terms(const BigReal& q) {
  require_unit_disc(q, "phi");
  if (q.is_zero()) return 0;
  const double lq = q.log_abs(), l1 = std::log1p(-std::fabs(q.to_double()));
  // 2 sum_{n>N} |q|^(n^2) <= 2 |q|^((N+1)^2) / (1 - |q|)
  return first_below([&](long n) { return kLn2 + double(n + 1) * double(n + 1) * lq - l1; },
                     tail_allowance(q.precision()));
}

long psi_terms(const BigReal& q) {
  require_unit_disc(q, "psi");
  if (q.is_zero()) return 0;
  const double lq = q.log_abs(), l1 = std::log1p(-std::fabs(q.to_double()));
  return first_below([&](long n) { return double(n + 1) * double(n + 2) / 2 * lq - l1; },
                     tail_allowance(q.precision()));
}

long fneg_terms(const BigReal& q) {
  require_unit_disc(q, "f(-q)");
  if (q.is_zero()) return 0;
  const double lq = q.log_abs(), l1 = std::log1p(-std::fabs(q.to_double()));
  // both one-sided tails start at exponent (N+1)(3N+2)/2
  return first_below([&](long n) { return kLn2 + double(n + 1) * double(3 * n + 2) / 2 * lq - l1; },
                     tail_allowance(q.precision()));
}

long euler_terms(const BigReal& q) {
  require_unit_disc(q, "euler product");
  if (q.is_zero()) return 0;
  const double lq = q.log_abs(), l1 = std::log1p(-std::fabs(q.to_double()));
  // |log prod_{n>N}(1 - q^n)| <= |q|^(N+1) / (1 - |q|)^2
  return first_below([&](long n) { return double(n + 1) * lq - 2 * l1; }, tail_allowance(q.precision()));
}

// ---------------------------------------------------------------- series

BigReal theta_phi(const BigReal& q, long terms) {
  const Precision& p = q.precision();
  BigReal sum(0, p), term(1, p), step = q, q2 = q * q;
  for (long n = 1; n <= terms; ++n) {
    term *= step;  // q^(n^2)
    step *= q2;    // q^(2n+1)
    sum += term;
  }
  return BigReal(1, p) + (sum + sum);
}

BigReal theta_psi(const BigReal& q, long terms) {
  const Precision& p = q.precision();
  BigReal sum(1, p), term(1, p), step = q;
  for (long n = 1; n <= terms; ++n) {
    term *= step;  // q^(n(n+1)/2)
    step *= q;
    sum += term;
  }
  return sum;
}

BigReal theta_fneg(const BigReal& q, long terms) {
  const Precision& p = q.precision();
  // n >= 1 contributes (-1)^n (q^(n(3n-1)/2) + q^(n(3n+1)/2))
  BigReal sum(1, p), lo(1, p), lo_step = q, q3 = q * q * q;
  for (long n = 1; n <= terms; ++n) {
    lo *= lo_step;  // q^(n(3n-1)/2)
    lo_step *= q3;  // q^(3n+1)
    BigReal hi = lo * pow_int(q, n);
    if (n % 2 == 1) {
      sum -= lo;
      sum -= hi;
    } else {
      sum += lo;
      sum += hi;
    }
  }
  return sum;
}

BigReal euler_product(const BigReal& q, long terms) {
  const Precision& p = q.precision();
  BigReal prod(1, p), qn(1, p), one(1, p);
  for (long n = 1; n <= terms; ++n) {
    qn *= q;
    prod *= one - qn;
  }
  return prod;
}

BigReal theta_phi(const BigReal& q) { return theta_phi(q, phi_terms(q)); }
BigReal theta_psi(const BigReal& q) { return theta_psi(q, psi_terms(q)); }
BigReal theta_fneg(const BigReal& q) { return theta_fneg(q, fneg_terms(q)); }
BigReal euler_product(const BigReal& q) { return euler_product(q, euler_terms(q)); }

BigReal theta_phi(const ThetaPoint& q, const Precision& prec) { return theta_phi(q.realize(prec)); }
BigReal theta_psi(const ThetaPoint& q, const Precision& prec) { return theta_psi(q.realize(prec)); }
BigReal theta_fneg(const ThetaPoint& q, const Precision& prec) { return theta_fneg(q.realize(prec)); }
BigReal euler_product(const ThetaPoint& q, const Precision& prec) { return euler_product(q.realize(prec)); }

BigReal theta_general(const BigReal& a, const BigReal& b) {
  const Precision p = wider(a.precision(), b.precision());
  BigReal ab = a * b;
  if (!(abs(ab) < 1)) throw DomainError("theta_general: |ab| must be below 1");
  const double allowance = tail_allowance(p);
  const double lab = ab.log_abs();

  // One side: sum_{m>=1} (ab)^(m(m-1)/2) c^m. The ratio of consecutive terms,
  // |ab|^m |c|, decreases in m; once it is <= 1/2 the tail is at most twice its
  // first term.
  auto side = [&](const BigReal& c) {
    BigReal sum(0, p);
    if (c.is_zero()) return sum;
    const double lc = c.log_abs();
    auto log_term = [&](long m) { return double(m) * double(m - 1) / 2 * lab + double(m) * lc; };
    long stop = 1;
    while (!(double(stop) * lab + lc <= -kLn2 && log_term(stop) + kLn2 <= allowance)) {
      if (++stop > kMaxTerms) throw DomainError("theta_general converges too slowly");
    }
    BigReal term(1, p), pw(1, p);  // pw = (ab)^(m-1)
    for (long m = 1; m < stop; ++m) {
      term *= pw * c;
      pw *= ab;
      sum += term;
    }
    return sum;
  };
  return BigReal(1, p) + side(a) + side(b);
}

void require_denominator(const BigReal& value, std::string_view what) {
  if (abs(value).to_double() <= kDenominatorFloor) {
    throw DomainError("denominator " + std::string(what) + " = " + value.to_scientific(6) + " is below the floor");
  }
}

CubeResiduals check_cube_identities(const BigReal& q) {
  BigReal f1 = theta_fneg(q), f2 = theta_fneg(q * q);
  BigReal ph = theta_phi(-q), ps = theta_psi(q);
  return {abs(f1 * f1 * f1 - ph * ph * ps), abs(f2 * f2 * f2 - ph * ps * ps)};
}

BigReal check_pentagonal(const BigReal& q) { return abs(theta_fneg(q) - euler_product(q)); }

// ---------------------------------------------------------------- elliptic

BigReal agm(const BigReal& a0, const BigReal& b0) {
  if (a0.sign() <= 0 || b0.sign() <= 0) throw DomainError("agm needs positive arguments");
  const Precision p = wider(a0.precision(), b0.precision());
  BigReal a = a0.with_precision(p), b = b0.with_precision(p);
  const BigReal eps = pow10(-p.working_digits() - 2, p);
  for (int i = 0; i < 200; ++i) {
    if (abs(a - b) <= eps * a) break;
    BigReal m = (a + b) / BigReal(2, p);
    b = sqrt(a * b);
    a = std::move(m);
  }
  return (a + b) / BigReal(2, p);
}

BigReal elliptic_K(const BigReal& k) {
  if (!(k > 0 && k < 1)) throw DomainError("elliptic_K: modulus must lie in (0, 1), got " + k.to_string(12));
  const Precision& p = k.precision();
  BigReal kp = sqrt(BigReal(1, p) - k * k);
  return pi(p) / (BigReal(2, p) * agm(BigReal(1, p), kp));
}

EllipticPoint make_elliptic_point(const BigReal& k) {
  const Precision& p = k.precision();
  BigReal kp = sqrt(BigReal(1, p) - k * k);
  return {k, kp, k * k, elliptic_K(k), elliptic_K(kp)};
}

BigReal check_elliptic_identity(const BigReal& k) {
  EllipticPoint e = make_elliptic_point(k);
  const Precision& p = k.precision();
  BigReal q = exp(-(pi(p) * e.Kprime / e.K));
  BigReal ph = theta_phi(q);
  return abs(e.K - pi(p) / BigReal(2, p) * ph * ph);
}

}  // namespace theta
