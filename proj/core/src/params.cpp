#include "theta/params.hpp"

#include <functional>
#include <string>

#include "theta/qseries.hpp"

namespace theta {

BigReal eval_param(const ParamSpec& spec, const Precision& prec) {
  if (!(spec.k > Rational(0)) || !(spec.n > Rational(0))) throw DomainError(spec.to_string() + ": k and n must be positive");
  const bool negated = spec.family == Family::HPrime || spec.family == Family::L;
  const int sign = negated ? -1 : 1;
  ThetaPoint near = ThetaPoint::nome(spec.n, spec.k, sign);
  ThetaPoint far = ThetaPoint::nome(spec.n * spec.k, Rational(1), sign);
  BigReal k4 = pow_rational(BigReal(spec.k, prec), Rational(1, 4));
  if (spec.family == Family::H || spec.family == Family::HPrime) {
    return theta_phi(near, prec) / (k4 * theta_phi(far, prec));
  }
  // e^(-(k-1) pi sqrt(n/k) / 8) is the positive nome to the power (k-1)/8
  BigReal base = ThetaPoint::nome(spec.n, spec.k).realize(prec);
  BigReal pre = pow_rational(base, (spec.k - Rational(1)) / Rational(8));
  return theta_psi(near, prec) / (k4 * pre * theta_psi(far, prec));
}

SymmetryResiduals check_reciprocal_symmetry(Family family, const Rational& k, const Rational& n,
                                            const Precision& prec) {
  BigReal v = eval_param({family, k, n}, prec);
  BigReal inv = eval_param({family, k, Rational(1) / n}, prec);
  BigReal sw = eval_param({family, n, k}, prec);
  return {abs(v * inv - BigReal(1L, prec)), abs(v - sw)};
}

namespace {

struct Relations {
  const Precision& prec;
  VerificationReport rep;

  BigReal h(const Rational& k, const Rational& n) const { return eval_param({Family::H, k, n}, prec); }
  BigReal l(const Rational& k, const Rational& n) const { return eval_param({Family::L, k, n}, prec); }

  void add(std::string label, const std::function<BigReal()>& residual) {
    SampleResidual s;
    s.q = std::move(label);
    try {
      s.residual = residual();
    } catch (const DomainError& ex) {
      s.error = ex.what();
    }
    rep.add(std::move(s));
  }
};

std::string tuple(std::initializer_list<Rational> xs) {
  std::string out = "(";
  for (const Rational& x : xs) out += (out.size() > 1 ? "," : "") + x.to_string();
  return out + ")";
}

}  // namespace

VerificationReport check_cross_relations(const Precision& prec) {
  Relations R{prec, VerificationReport()};
  R.rep.name = "relations";
  R.rep.digits = prec.digits;
  R.rep.tolerance = default_tolerance(prec);
  const BigReal one(1L, prec), three(3L, prec), five(5L, prec);
  const BigReal r5 = sqrt(five);

  struct Six {
    Rational a, b, c, d, k;
  };
  for (const Six& t : {Six{5, 12, 3, 20, Rational(1, 4)}, Six{5, 21, 3, 35, Rational(1, 7)}}) {
    std::string args = tuple({t.a, t.b, t.c, t.d, t.k});
    R.add("jy6 " + args, [&] { return abs(R.h(t.a, t.b) * R.h(t.k * t.c, t.k * t.d) - R.h(t.k * t.a, t.k * t.b) * R.h(t.c, t.d)); });
    R.add("ljy6 " + args, [&] { return abs(R.l(t.a, t.b) * R.l(t.k * t.c, t.k * t.d) - R.l(t.k * t.a, t.k * t.b) * R.l(t.c, t.d)); });
  }
  struct Three {
    Rational k, n, m;
  };
  for (const Three& t : {Three{3, 4, 5}, Three{4, 5, 3}, Three{3, 7, 5}, Three{7, 5, 3}}) {
    std::string args = tuple({t.k, t.n, t.m});
    R.add("jy7 " + args, [&] { return abs(R.h(t.k, t.n / t.m) * R.h(t.m, t.n * t.k) - R.h(t.n, t.m * t.k)); });
    R.add("ljy7 " + args, [&] { return abs(R.l(t.k, t.n / t.m) * R.l(t.m, t.n * t.k) - R.l(t.n, t.m * t.k)); });
  }
  for (const Rational& n : {Rational(20), Rational(4, 5), Rational(12), Rational(4, 3), Rational(15), Rational(5, 3)}) {
    R.add("hl3 n=" + n.to_string(), [&] {
      BigReal h4 = pow_int(R.h(3, n), 4), l4 = pow_int(R.l(3, n), 4);
      return abs(h4 + three * h4 * l4 - three - l4);
    });
    R.add("hl5 n=" + n.to_string(), [&] {
      BigReal h2 = pow_int(R.h(5, n), 2), l2 = pow_int(R.l(5, n), 2);
      return abs(h2 + r5 * h2 * l2 - r5 - l2);
    });
  }
  for (const Rational& n : {Rational(1, 15), Rational(1, 20), Rational(1, 35), Rational(1, 12), Rational(1, 21)}) {
    R.add("NDBh5 n=" + n.to_string(), [&] {
      BigReal x = R.h(3, n), y = R.h(3, Rational(25) * n);
      BigReal s = pow_int(x * y, 2), t = y / x;
      BigReal lhs = three * (s + one / s);
      BigReal rhs = pow_int(t, 3) + five * t * t + five / (t * t) + five * (t - one / t) - one / pow_int(t, 3);
      return abs(lhs - rhs);
    });
    R.add("SRh3 n=" + n.to_string(), [&] {
      BigReal x = R.h(5, n), y = R.h(5, Rational(9) * n);
      BigReal t = y / x;
      BigReal lhs = r5 * x * y + r5 / (x * y);
      BigReal rhs = t * t + three * t + three / t - one / (t * t);
      return abs(lhs - rhs);
    });
  }
  for (long k : {3L, 4L, 5L, 7L}) {
    R.add("unit h(" + std::to_string(k) + ",1)", [&] { return abs(R.h(k, 1) - one); });
    R.add("unit l(" + std::to_string(k) + ",1)", [&] { return abs(R.l(k, 1) - one); });
  }
  R.rep.finish();
  return R.rep;
}

ValueCheck verify_closed_form(const ClosedFormRecord& entry, const EvalContext& constants, const Precision& prec,
                              bool search_edits) {
  BigReal direct = eval_param(entry.spec, prec);
  auto evaluate = [&](const Expr& e) { return eval(e, constants); };
  return adjudicate_value(entry.name(), entry.expr, entry.erratum, evaluate, direct, default_tolerance(prec),
                          search_edits);
}

std::vector<ValueCheck> verify_closed_forms(const Catalog& catalog, const Precision& prec) {
  EvalContext constants = catalog.constants(prec);
  std::vector<ValueCheck> out;
  for (const ClosedFormRecord& r : catalog.closed_forms) out.push_back(verify_closed_form(r, constants, prec));
  return out;
}

std::vector<ValueCheck> verify_intermediates(const Catalog& catalog, const Precision& prec) {
  EvalContext constants = catalog.constants(prec);
  auto evaluate = [&](const Expr& e) { return eval(e, constants); };
  std::vector<ValueCheck> out;
  for (const IntermediateRecord& r : catalog.intermediates) {
    BigReal direct = eval_param(r.left, prec) * eval_param(r.right, prec);
    out.push_back(adjudicate_value(r.name, r.expr, r.erratum, evaluate, direct, default_tolerance(prec)));
  }
  return out;
}

}  // namespace theta
