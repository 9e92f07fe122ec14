#pragma once

#include <vector>

#include "theta/catalog.hpp"
#include "theta/mp.hpp"
#include "theta/qseries.hpp"
#include "theta/report.hpp"

namespace theta {

// (phi(q) - phi(q^3)) / (phi(q) + phi(q^3))
BigReal H_theta(const BigReal& q);
BigReal H_theta(const ThetaPoint& q, const Precision& prec);

// q prod (1-q^(12j-1))(1-q^(12j-11)) / ((1-q^(12j-5))(1-q^(12j-7))), stopped once the
// log-tail bound 4 q^(12J+1) / ((1-q)(1-q^12)) is below the working precision.
long H_product_factors(const BigReal& q);
BigReal H_product(const BigReal& q, long factors);
BigReal H_product(const BigReal& q);
BigReal H_product(const ThetaPoint& q, const Precision& prec);

// Only the three displayed partial quotients a_i / b_i exist, so the prefix is
// accepted on 0 < q <= 0.15 only.
inline constexpr int kPrefixDepth = 3;
bool in_prefix_window(const BigReal& q);

struct CFState {
  int depth = 0;
  BigReal p_prev, q_prev;  // convergent depth-1
  BigReal p, q;            // convergent depth
  BigReal value() const { return p / q; }
};
// Forward recurrence p_n = b_n p_(n-1) + a_n p_(n-2), same for q_n.
CFState H_cf_convergent(const BigReal& q, int depth = kPrefixDepth);
// Backward evaluation of a1/(b1 + a2/(b2 + a3/b3)).
BigReal H_cf_prefix(const BigReal& q);
BigReal H_cf_prefix(const ThetaPoint& q, const Precision& prec);

// (3^(1/4) h(3,3n) - 1) / (3^(1/4) h(3,3n) + 1), the value at q = e^(-pi sqrt(n)).
BigReal H_from_param(const Rational& n, const Precision& prec);

struct TableRow {
  Rational n;
  ValueCheck check;  // closed form against H_theta
  BigReal closed;    // accepted closed form
  BigReal series;    // H_theta at e^(-pi sqrt(n))
  BigReal delta;
  BigReal bridge;           // H_from_param(n)
  BigReal bridge_residual;  // |bridge - series|
};

std::vector<TableRow> verify_table(const Catalog& catalog, const Precision& prec);

}  // namespace theta
