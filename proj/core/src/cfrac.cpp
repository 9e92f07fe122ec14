#include "theta/cfrac.hpp"

#include <cmath>

#include "theta/params.hpp"

namespace theta {

BigReal H_theta(const BigReal& q) {
  if (!(q >= 0L) || !(q < 1L)) throw DomainError("H(q) needs 0 <= q < 1");
  BigReal a = theta_phi(q), b = theta_phi(pow_int(q, 3));
  return (a - b) / (a + b);
}

BigReal H_theta(const ThetaPoint& q, const Precision& prec) { return H_theta(q.realize(prec)); }

long H_product_factors(const BigReal& q) {
  if (!(q > 0L) || !(q < 1L)) throw DomainError("H product needs 0 < q < 1");
  double lq = q.log_abs();
  double l1q = std::log1p(-q.to_double());
  double l12 = std::log1p(-std::exp(12 * lq));
  double target = -(q.precision().working_digits() + 1) * std::log(10.0);
  // log 4 + (12J+1) log q - log(1-q) - log(1-q^12) <= target
  double j = (target - std::log(4.0) + l1q + l12 - lq) / (12 * lq);
  long J = std::max(1L, static_cast<long>(std::ceil(j)));
  if (J > 5000000) throw DomainError("H product would need too many factors");
  return J;
}

BigReal H_product(const BigReal& q, long factors) {
  const Precision& prec = q.precision();
  BigReal one(1L, prec), num(1L, prec), den(1L, prec);
  BigReal q12 = pow_int(q, 12);
  BigReal x1 = q, x5 = pow_int(q, 5), x7 = pow_int(q, 7), x11 = pow_int(q, 11);
  for (long j = 1; j <= factors; ++j) {
    num *= (one - x1) * (one - x11);
    den *= (one - x5) * (one - x7);
    x1 *= q12;
    x5 *= q12;
    x7 *= q12;
    x11 *= q12;
  }
  return q * num / den;
}

BigReal H_product(const BigReal& q) { return H_product(q, H_product_factors(q)); }
BigReal H_product(const ThetaPoint& q, const Precision& prec) { return H_product(q.realize(prec)); }

bool in_prefix_window(const BigReal& q) { return q > 0L && q <= BigReal(Rational(3, 20), q.precision()); }

namespace {

struct Partial {
  BigReal a, b;
};

Partial partial(const BigReal& q, int i) {
  const Precision& prec = q.precision();
  BigReal one(1L, prec);
  auto p = [&](long e) { return pow_int(q, e); };
  switch (i) {
    case 1:
      return {q * (one - q), one - p(3)};
    case 2:
      return {p(3) * (one - p(2)) * (one - p(4)), (one - p(3)) * (one + p(6))};
    case 3:
      return {p(3) * (one - p(8)) * (one - p(10)), (one - p(3)) * (one - p(12))};
  }
  throw std::out_of_range("only three partial quotients are known");
}

void require_window(const BigReal& q) {
  if (!in_prefix_window(q)) {
    throw DomainError("continued-fraction prefix refused at q = " + q.to_string(10) + ": outside 0 < q <= 0.15");
  }
}

}  // namespace

CFState H_cf_convergent(const BigReal& q, int depth) {
  require_window(q);
  if (depth < 1 || depth > kPrefixDepth) throw std::out_of_range("depth must be 1..3");
  const Precision& prec = q.precision();
  CFState s;
  s.p_prev = BigReal(1L, prec);  // p_-1
  s.q_prev = BigReal(0L, prec);
  s.p = BigReal(0L, prec);  // p_0, b_0 = 0
  s.q = BigReal(1L, prec);
  for (int i = 1; i <= depth; ++i) {
    Partial t = partial(q, i);
    BigReal np = t.b * s.p + t.a * s.p_prev;
    BigReal nq = t.b * s.q + t.a * s.q_prev;
    s.p_prev = std::move(s.p);
    s.q_prev = std::move(s.q);
    s.p = std::move(np);
    s.q = std::move(nq);
    if (s.q.is_zero()) throw DomainError("vanishing convergent denominator");
    s.depth = i;
  }
  return s;
}

BigReal H_cf_prefix(const BigReal& q) {
  require_window(q);
  BigReal tail(0L, q.precision());
  for (int i = kPrefixDepth; i >= 1; --i) {
    Partial t = partial(q, i);
    tail = t.a / (t.b + tail);
  }
  return tail;
}

BigReal H_cf_prefix(const ThetaPoint& q, const Precision& prec) { return H_cf_prefix(q.realize(prec)); }

BigReal H_from_param(const Rational& n, const Precision& prec) {
  BigReal h = eval_param({Family::H, Rational(3), Rational(3) * n}, prec);
  BigReal t = pow_rational(BigReal(3L, prec), Rational(1, 4)) * h;
  BigReal one(1L, prec);
  return (t - one) / (t + one);
}

std::vector<TableRow> verify_table(const Catalog& catalog, const Precision& prec) {
  EvalContext constants = catalog.constants(prec);
  auto evaluate = [&](const Expr& e) { return eval(e, constants); };
  std::vector<TableRow> rows;
  for (const TableRecord& r : catalog.table) {
    BigReal series = H_theta(ThetaPoint::nome(r.n), prec);
    ValueCheck check = adjudicate_value(r.name(), r.expr, r.erratum, evaluate, series, default_tolerance(prec));
    BigReal closed(prec);
    try {
      closed = evaluate(check.effective);
    } catch (const std::exception&) {
      closed = BigReal(0L, prec);
    }
    BigReal bridge = H_from_param(r.n, prec);
    BigReal delta = abs(closed - series), bres = abs(bridge - series);
    rows.push_back({r.n, std::move(check), std::move(closed), std::move(series), std::move(delta), std::move(bridge),
                    std::move(bres)});
  }
  return rows;
}

}  // namespace theta
