#include "theta/qseries.hpp"

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace theta;

namespace {

BigReal num(const char* s, const Precision& p) { return BigReal::from_string(s, p); }
BigReal tol(long e, const Precision& p) { return pow10(e, p); }

}  // namespace

TEST(ThetaSeries, ValuesAtZero) {
  Precision p(30);
  BigReal z(0L, p);
  EXPECT_EQ(theta_phi(z), 1L);
  EXPECT_EQ(theta_psi(z), 1L);
  EXPECT_EQ(theta_fneg(z), 1L);
  EXPECT_EQ(euler_product(z), 1L);
}

// Exact digit strings: the sums are sparse sums of powers of ten.
TEST(ThetaSeries, FrozenValuesAtOneTenth) {
  Precision p(50);
  BigReal q = num("0.1", p);
  EXPECT_LT(abs(theta_phi(q) - num("1.2002000020000002000000002", p)), tol(-35, p));
  EXPECT_LT(abs(theta_phi(-q) - num("0.8001999980000001999999998", p)), tol(-35, p));
  EXPECT_LT(abs(theta_psi(q) - num("1.1010010001000010000010000001", p)), tol(-35, p));
  EXPECT_LT(abs(theta_psi(-q) - num("0.8990010000999989999990000001", p)), tol(-35, p));
  EXPECT_LT(abs(theta_fneg(q) - num("0.89001009999899900000010001", p)), tol(-34, p));
}

TEST(ThetaSeries, MatchNaiveSums) {
  Precision p(50);
  for (const char* s : {"0.05", "0.3", "-0.45", "0.6", "0.8"}) {
    BigReal q = num(s, p);
    EXPECT_LT(abs(theta_phi(q) - oracle::phi(q, 60)), tol(-50, p)) << s;
    EXPECT_LT(abs(theta_psi(q) - oracle::psi(q, 90)), tol(-50, p)) << s;
    EXPECT_LT(abs(theta_fneg(q) - oracle::fneg(q, 60)), tol(-50, p)) << s;
  }
}

TEST(ThetaSeries, GeneralThetaSpecializations) {
  Precision p(50);
  BigReal q = num("0.37", p);
  EXPECT_LT(abs(theta_general(q, q) - theta_phi(q)), tol(-50, p));
  EXPECT_LT(abs(theta_general(q, q * q * q) - theta_psi(q)), tol(-50, p));
  EXPECT_LT(abs(theta_general(-q, -(q * q)) - theta_fneg(q)), tol(-50, p));
}

TEST(ThetaSeries, TailBoundIsSound) {
  for (int d : {30, 50, 80}) {
    Precision p(d);
    for (const char* s : {"0", "0.1", "0.3", "0.5", "0.7", "0.9", "-0.9"}) {
      BigReal q = num(s, p);
      BigReal eps = tol(-d, p);
      EXPECT_LT(abs(theta_phi(q, 2 * phi_terms(q)) - theta_phi(q)), eps) << s << " " << d;
      EXPECT_LT(abs(theta_psi(q, 2 * psi_terms(q)) - theta_psi(q)), eps) << s << " " << d;
      EXPECT_LT(abs(theta_fneg(q, 2 * fneg_terms(q)) - theta_fneg(q)), eps) << s << " " << d;
      EXPECT_LT(abs(euler_product(q, 2 * euler_terms(q)) - euler_product(q)), eps) << s << " " << d;
    }
  }
}

TEST(ThetaSeries, PentagonalAgreesWithProduct) {
  Precision p(50);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> n(1, 7999);
  for (int i = 0; i < 20; ++i) {
    BigReal q(Rational(n(rng), 10000), p);
    EXPECT_LT(abs(theta_fneg(q) - euler_product(q)), tol(-45, p)) << q.to_string(6);
  }
}

TEST(ThetaSeries, CubeIdentities) {
  Precision p(50);
  for (int i = 0; i < 10; ++i) {
    BigReal q(Rational(5 + 6 * i, 100), p);
    CubeResiduals r = check_cube_identities(q);
    EXPECT_LT(r.cube_of_f, tol(-40, p)) << i;
    EXPECT_LT(r.cube_of_f_square, tol(-40, p)) << i;
    EXPECT_LT(check_pentagonal(q), tol(-45, p));
  }
}

TEST(ThetaSeries, PhiOrdering) {
  Precision p(30);
  for (int i = 1; i < 20; ++i) {
    BigReal q(Rational(i, 20), p);
    BigReal a = theta_phi(q), b = theta_phi(q * q * q);
    EXPECT_GT(a, b);
    EXPECT_GT(b, 0L);
  }
}

TEST(ThetaSeries, RejectsNomesOutsideTheDisk) {
  Precision p(30);
  EXPECT_THROW(theta_phi(BigReal(1L, p)), DomainError);
  EXPECT_THROW(theta_psi(BigReal(-1L, p)), DomainError);
  EXPECT_THROW(euler_product(BigReal(2L, p)), DomainError);
  EXPECT_THROW(theta_general(num("0.9", p), num("1.2", p)), DomainError);
}

TEST(ThetaPoint, NomeRealization) {
  Precision p(50);
  ThetaPoint t = ThetaPoint::nome(Rational(5), Rational(9));
  BigReal expected = exp(-pi(p) * sqrt(BigReal(Rational(5, 9), p)));
  EXPECT_LT(abs(t.realize(p) - expected), tol(-60, p));
  EXPECT_EQ(t.realize(p), ThetaPoint::nome(Rational(10), Rational(18)).realize(p));
  EXPECT_LT(abs(ThetaPoint::nome(Rational(5), Rational(9), -1).realize(p) + expected), tol(-60, p));
  EXPECT_TRUE(t.is_nome());
  EXPECT_FALSE(ThetaPoint::literal(Rational(1, 10)).is_nome());
  EXPECT_EQ(ThetaPoint::literal(Rational(1, 10)).realize(p), BigReal(Rational(1, 10), p));
  EXPECT_EQ(theta_phi(ThetaPoint::literal(Rational(1, 10)), p), theta_phi(BigReal(Rational(1, 10), p)));
}

TEST(ThetaSeries, DenominatorFloor) {
  Precision p(30);
  EXPECT_THROW(require_denominator(num("0.0001", p), "test"), DomainError);
  EXPECT_THROW(require_denominator(num("-0.0009", p), "test"), DomainError);
  EXPECT_NO_THROW(require_denominator(num("0.01", p), "test"));
}

TEST(Elliptic, FrozenValue) {
  Precision p(20);
  BigReal k = sqrt(BigReal(Rational(1, 2), p));
  EXPECT_EQ(elliptic_K(k).to_string(20), "1.8540746773013719184");
}

TEST(Elliptic, MatchesHypergeometricSeries) {
  Precision p(50);
  for (const char* s : {"0.1", "0.3", "0.6"}) {
    BigReal k = num(s, p);
    EXPECT_LT(abs(elliptic_K(k) - oracle::elliptic_K(k)), tol(-48, p)) << s;
  }
}

TEST(Elliptic, ThetaSquareIdentity) {
  Precision p(50);
  EXPECT_LT(check_elliptic_identity(num("0.3", p)), tol(-40, p));
  EXPECT_LT(check_elliptic_identity(sqrt(BigReal(Rational(1, 2), p))), tol(-40, p));
  EXPECT_LT(check_elliptic_identity(num("0.9", p)), tol(-38, p));
}

TEST(Elliptic, SymmetricModulusGivesNomeEToMinusPi) {
  Precision p(50);
  EllipticPoint e = make_elliptic_point(sqrt(BigReal(Rational(1, 2), p)));
  EXPECT_LT(abs(e.K - e.Kprime), tol(-48, p));
  EXPECT_LT(abs(agm(BigReal(1L, p), BigReal(1L, p)) - BigReal(1L, p)), tol(-50, p));
}

TEST(Elliptic, DomainErrors) {
  Precision p(30);
  EXPECT_THROW(elliptic_K(BigReal(1L, p)), DomainError);
  EXPECT_THROW(check_elliptic_identity(BigReal(0L, p)), DomainError);
  EXPECT_THROW(check_elliptic_identity(BigReal(1L, p)), DomainError);
}
