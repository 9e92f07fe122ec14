#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "theta/mp.hpp"

namespace theta {

// A nome: either a literal value or sign * e^(-pi*sqrt(n/k)) realized on demand.
class ThetaPoint {
 public:
  static ThetaPoint literal(const BigReal& q);
  static ThetaPoint literal(const Rational& q);
  static ThetaPoint nome(const Rational& n, const Rational& k = Rational(1), int sign = 1);

  bool is_nome() const;
  // Nome realizations are cached per (n/k, sign, precision) and shared by all threads.
  BigReal realize(const Precision& prec) const;
  std::string describe() const;

 private:
  struct Form;
  explicit ThetaPoint(std::shared_ptr<const Form> form) : form_(std::move(form)) {}
  std::shared_ptr<const Form> form_;
};

// Term counts chosen from analytic tail bounds at q's working precision.
long phi_terms(const BigReal& q);
long psi_terms(const BigReal& q);
long fneg_terms(const BigReal& q);
long euler_terms(const BigReal& q);

// Series with an explicit term count, used to check the automatic choice.
BigReal theta_phi(const BigReal& q, long terms);
BigReal theta_psi(const BigReal& q, long terms);
BigReal theta_fneg(const BigReal& q, long terms);
BigReal euler_product(const BigReal& q, long terms);

// f(a, b) = sum over n of a^(n(n+1)/2) b^(n(n-1)/2), |ab| < 1.
BigReal theta_general(const BigReal& a, const BigReal& b);
BigReal theta_phi(const BigReal& q);
BigReal theta_psi(const BigReal& q);
// f(-q) as the two-sided pentagonal series.
BigReal theta_fneg(const BigReal& q);
// prod (1 - q^n)
BigReal euler_product(const BigReal& q);

BigReal theta_phi(const ThetaPoint& q, const Precision& prec);
BigReal theta_psi(const ThetaPoint& q, const Precision& prec);
BigReal theta_fneg(const ThetaPoint& q, const Precision& prec);
BigReal euler_product(const ThetaPoint& q, const Precision& prec);

// Theta quotients refuse denominators smaller than this in magnitude.
inline constexpr double kDenominatorFloor = 1e-3;
void require_denominator(const BigReal& value, std::string_view what);

struct CubeResiduals {
  BigReal cube_of_f;         // |f(-q)^3 - phi(-q)^2 psi(q)|
  BigReal cube_of_f_square;  // |f(-q^2)^3 - phi(-q) psi(q)^2|
};
CubeResiduals check_cube_identities(const BigReal& q);
// |theta_fneg(q) - euler_product(q)|
BigReal check_pentagonal(const BigReal& q);

struct EllipticPoint {
  BigReal k;
  BigReal kprime;
  BigReal alpha;
  BigReal K;
  BigReal Kprime;
};

BigReal agm(const BigReal& a, const BigReal& b);
BigReal elliptic_K(const BigReal& k);
EllipticPoint make_elliptic_point(const BigReal& k);
// |K(k) - (pi/2) phi(q)^2| with q = e^(-pi K(k')/K(k)).
BigReal check_elliptic_identity(const BigReal& k);

}  // namespace theta
