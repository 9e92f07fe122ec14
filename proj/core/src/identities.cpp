#include "theta/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace theta {

namespace {

BigReal theta_at(std::string_view fn, const BigReal& x) {
  if (fn == "phi") return theta_phi(x);
  if (fn == "psi") return theta_psi(x);
  if (fn == "psim") return theta_psi(-x);
  if (fn == "fneg") return theta_fneg(x);
  throw EvalError("no evaluator for " + std::string(fn));
}

std::string_view kind_name(QuotientKind k) {
  switch (k) {
    case QuotientKind::A:
      return "A";
    case QuotientKind::B:
      return "B";
    case QuotientKind::C:
      return "C";
  }
  return "?";
}

}  // namespace

BigReal eval_quotient(QuotientKind kind, long r, const BigReal& q) {
  if (r <= 0) throw DomainError("quotient index must be positive");
  if (!(abs(q) < 1L)) throw DomainError("quotient needs |q| < 1");
  std::string tag = std::string(kind_name(kind)) + "(" + std::to_string(r) + ")";
  BigReal q1 = pow_int(q, r), q3 = pow_int(q, 3 * r), q5 = pow_int(q, 5 * r), q15 = pow_int(q, 15 * r);
  auto f = [&](const BigReal& x) {
    switch (kind) {
      case QuotientKind::A:
        return theta_phi(x);
      case QuotientKind::B:
        return theta_fneg(x);
      case QuotientKind::C:
        return theta_psi(-x);
    }
    return BigReal(1L, x.precision());
  };
  BigReal d3 = f(q3), d5 = f(q5);
  require_denominator(d3, tag + " denominator at q^" + std::to_string(3 * r));
  require_denominator(d5, tag + " denominator at q^" + std::to_string(5 * r));
  BigReal v = f(q1) * f(q15) / (d3 * d5);
  if (kind == QuotientKind::B) v *= pow_rational(q, Rational(r, 3));
  if (kind == QuotientKind::C) v *= q1;
  return v;
}

BigReal eval_quotient(QuotientKind kind, long r, const ThetaPoint& q, const Precision& prec) {
  return eval_quotient(kind, r, q.realize(prec));
}

// ---------------------------------------------------------------- evaluator

QuotientEvaluator::QuotientEvaluator(BigReal q) : q_(std::move(q)) {}

BigReal QuotientEvaluator::operator()(const Expr& e) {
  EvalContext ctx;
  ctx.prec = q_.precision();
  ctx.bindings.emplace("q", q_);
  ctx.call = [this](const Expr& call, const std::vector<BigReal>& args) -> BigReal {
    std::string key = print(call);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::string& fn = call.name();
    if (args.size() != 1) throw EvalError(fn + " takes one argument");
    BigReal v(q_.precision());
    if (fn == "A" || fn == "B" || fn == "C") {
      if (!args[0].is_integer() || args[0] < 1L) throw EvalError(fn + " needs a positive integer index");
      QuotientKind k = fn == "A" ? QuotientKind::A : fn == "B" ? QuotientKind::B : QuotientKind::C;
      v = eval_quotient(k, args[0].to_long(), q_);
    } else {
      if (!(abs(args[0]) < 1L)) throw DomainError(fn + " argument outside |x| < 1");
      v = theta_at(fn, args[0]);
    }
    memo_.emplace(std::move(key), v);
    return v;
  };
  return eval(e, ctx);
}

// ---------------------------------------------------------------- identities

Identity::Identity(std::string name_, Expr p, Expr q, Expr rel)
    : name(std::move(name_)), p_def(std::move(p)), q_def(std::move(q)), relation(std::move(rel)),
      terms(expand_laurent(relation)) {}

std::vector<ThetaPoint> sample_grid(int count, const Rational& q_min, const Rational& q_max) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  if (!(q_min > Rational(0)) || !(q_max < Rational(1)) || q_max < q_min) {
    throw std::invalid_argument("sample window must satisfy 0 < q_min <= q_max < 1");
  }
  std::vector<ThetaPoint> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(ThetaPoint::literal(q_min));
    return out;
  }
  Rational step = (q_max - q_min) / Rational(count - 1);
  for (int i = 0; i < count; ++i) out.push_back(ThetaPoint::literal(q_min + step * Rational(i)));
  return out;
}

PQ eval_pq(const Expr& p_def, const Expr& q_def, const BigReal& q) {
  QuotientEvaluator ev(q);
  return {ev(p_def), ev(q_def)};
}

namespace {

// P^e with the half-powers shared across terms.
class PowerTable {
 public:
  PowerTable(const BigReal& x, const char* var) : x_(x), var_(var) {}
  const BigReal& get(const Rational& e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    if (!e.is_integer() && x_.sign() <= 0) {
      throw DomainError(std::string(var_) + " = " + x_.to_scientific(6) + " is not positive under the power " +
                        e.to_string());
    }
    return cache_.emplace(e, pow_rational(x_, e)).first->second;
  }

 private:
  BigReal x_;
  const char* var_;
  std::map<Rational, BigReal> cache_;
};

BigReal residual_of(const std::vector<Term>& terms, PowerTable& pp, PowerTable& qq, const Precision& prec) {
  BigReal sum(0L, prec);
  for (const Term& t : terms) sum += BigReal(t.coef, prec) * pp.get(t.ep) * qq.get(t.eq);
  return abs(sum);
}

}  // namespace

BigReal relation_residual(const std::vector<Term>& terms, const PQ& pq) {
  PowerTable pp(pq.p, "P"), qq(pq.q, "Q");
  return residual_of(terms, pp, qq, wider(pq.p.precision(), pq.q.precision()));
}

BigReal residual(const Identity& id, const ThetaPoint& q, const Precision& prec) {
  try {
    return relation_residual(id.terms, eval_pq(id.p_def, id.q_def, q.realize(prec)));
  } catch (const DomainError& ex) {
    throw DomainError(id.name + " at q = " + q.describe() + ": " + ex.what());
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// P and Q at every sample, or the error text for samples that cannot be evaluated.
struct SampleValues {
  std::vector<std::string> q;
  std::vector<std::optional<PQ>> pq;
  std::vector<std::string> error;
};

SampleValues evaluate_samples(const Expr& p_def, const Expr& q_def, const std::vector<ThetaPoint>& samples,
                              const Precision& prec) {
  SampleValues sv;
  for (const ThetaPoint& s : samples) {
    sv.q.push_back(s.describe());
    try {
      sv.pq.emplace_back(eval_pq(p_def, q_def, s.realize(prec)));
      sv.error.emplace_back();
    } catch (const DomainError& ex) {
      sv.pq.emplace_back();
      sv.error.emplace_back(ex.what());
    } catch (const EvalError& ex) {
      sv.pq.emplace_back();
      sv.error.emplace_back(ex.what());
    }
  }
  return sv;
}

VerificationReport report_from(const std::string& name, const std::vector<Term>& terms, const SampleValues& sv,
                               const BigReal& tol, const Precision& prec) {
  auto t0 = Clock::now();
  VerificationReport rep;
  rep.name = name;
  rep.digits = prec.digits;
  rep.tolerance = tol;
  for (std::size_t i = 0; i < sv.q.size(); ++i) {
    SampleResidual s;
    s.q = sv.q[i];
    if (!sv.pq[i]) {
      s.error = sv.error[i];
    } else {
      try {
        s.residual = relation_residual(terms, *sv.pq[i]);
      } catch (const DomainError& ex) {
        s.error = name + " at q = " + s.q + ": " + ex.what();
      }
    }
    rep.add(std::move(s));
  }
  rep.finish();
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

// Cheap rejection: stops at the first sample that misses tol.
bool holds_everywhere(const std::vector<Term>& terms, const SampleValues& sv, const BigReal& tol) {
  for (const auto& pq : sv.pq) {
    if (!pq) return false;
    try {
      if (!(relation_residual(terms, *pq) < tol)) return false;
    } catch (const DomainError&) {
      return false;
    }
  }
  return true;
}

std::optional<std::vector<Term>> try_expand(const Expr& e) {
  try {
    return expand_laurent(e);
  } catch (const ExpansionError&) {
    return std::nullopt;
  }
}

std::string coef_text(const Rational& c) { return c.to_string(); }

// Monomials whose coefficients differ between a and b.
std::vector<std::string> coefficient_diffs(const std::vector<Term>& from, const std::vector<Term>& to) {
  std::map<std::pair<Rational, Rational>, std::pair<Rational, Rational>> m;
  for (const Term& t : from) m[{t.ep, t.eq}].first = t.coef;
  for (const Term& t : to) m[{t.ep, t.eq}].second = t.coef;
  std::vector<std::string> out;
  for (const auto& [k, v] : m) {
    if (v.first == v.second) continue;
    out.push_back(print_monomial({Rational(1), k.first, k.second}) + ": " + coef_text(v.first) + " -> " +
                  coef_text(v.second));
  }
  return out;
}

std::vector<Term> negated(std::vector<Term> t) {
  for (Term& x : t) x.coef = -x.coef;
  return t;
}

std::pair<int, int> degree_bounds(const std::vector<Term>& terms) {
  int a = 0, b = 0;
  for (const Term& t : terms) {
    Rational ta = t.ep * Rational(2), tb = t.eq * Rational(2);
    if (ta.is_integer()) a = std::max<int>(a, static_cast<int>(std::llabs(ta.num())));
    if (tb.is_integer()) b = std::max<int>(b, static_cast<int>(std::llabs(tb.num())));
  }
  return {a, b};
}

}  // namespace

VerificationReport verify(const Identity& id, const std::vector<ThetaPoint>& samples, const BigReal& tol,
                          const Precision& prec) {
  auto t0 = Clock::now();
  VerificationReport rep = report_from(id.name, id.terms, evaluate_samples(id.p_def, id.q_def, samples, prec), tol, prec);
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

// ---------------------------------------------------------------- reconstruction

namespace {

struct BasisFn {
  int a;
  int b;
};

Expr half_power(const char* var, int twice) {
  Expr v = Expr::symbol(var);
  return twice == 2 ? v : Expr::pow(v, Rational(twice, 2));
}

Expr half_power_pair(const char* var, int twice, bool minus) {
  Expr down = Expr::pow(Expr::symbol(var), Rational(-twice, 2));
  return Expr::add({half_power(var, twice), minus ? Expr::neg(down) : down});
}

std::vector<Expr> basis_factors(const BasisFn& f) {
  std::vector<Expr> factors;
  if (f.a > 0) factors.push_back(half_power_pair("P", f.a, f.a % 2 == 1));
  if (f.b > 0) factors.push_back(half_power_pair("Q", f.b, false));
  return factors;
}

BigReal basis_value(const BasisFn& f, PowerTable& pp, PowerTable& qq, const Precision& prec) {
  BigReal x(1L, prec);
  if (f.a > 0) {
    BigReal up = pp.get(Rational(f.a, 2)), down = pp.get(Rational(-f.a, 2));
    x *= f.a % 2 == 1 ? up - down : up + down;
  }
  if (f.b > 0) x *= qq.get(Rational(f.b, 2)) + qq.get(Rational(-f.b, 2));
  return x;
}

long gcd_all(const std::vector<long>& v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, std::labs(x));
  return g == 0 ? 1 : g;
}

}  // namespace

std::optional<Reconstruction> reconstruct_relation(const Expr& p_def, const Expr& q_def, int max_a, int max_b,
                                                   const Precision& fit_prec) {
  std::vector<BasisFn> basis;
  for (int a = 0; a <= max_a; ++a) {
    for (int b = 0; b <= max_b; ++b) {
      if ((a - b) % 2 == 0) basis.push_back({a, b});
    }
  }
  const std::size_t n = basis.size();
  if (n < 2) return std::nullopt;
  const std::size_t m = n + 6;

  // Fit nomes interleave with, and never coincide with, the verification grid.
  std::vector<std::vector<BigReal>> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Rational qi = Rational(1, 20) + Rational(static_cast<std::int64_t>(11 * (2 * i + 1)),
                                             static_cast<std::int64_t>(40 * m));
    PQ pq = eval_pq(p_def, q_def, BigReal(qi, fit_prec));
    PowerTable pp(pq.p, "P"), qq(pq.q, "Q");
    std::vector<BigReal> row;
    row.reserve(n);
    for (const BasisFn& f : basis) row.push_back(basis_value(f, pp, qq, fit_prec));
    rows.push_back(std::move(row));
  }

  // Gaussian elimination with full pivoting; the column left over spans the null space.
  std::vector<std::size_t> col(n);
  std::iota(col.begin(), col.end(), 0);
  std::vector<double> pivot_log;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t br = k, bc = k;
    BigReal best(0L, fit_prec);
    for (std::size_t i = k; i < m; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        BigReal v = abs(rows[i][col[j]]);
        if (v > best) {
          best = v;
          br = i;
          bc = j;
        }
      }
    }
    if (best.is_zero()) return std::nullopt;
    std::swap(rows[k], rows[br]);
    std::swap(col[k], col[bc]);
    pivot_log.push_back(best.log_abs());
    const BigReal& piv = rows[k][col[k]];
    for (std::size_t i = k + 1; i < m; ++i) {
      BigReal factor = rows[i][col[k]] / piv;
      if (factor.is_zero()) continue;
      for (std::size_t j = k; j < n; ++j) rows[i][col[j]] -= factor * rows[k][col[j]];
    }
  }
  BigReal resid(0L, fit_prec);
  for (std::size_t i = n - 1; i < m; ++i) {
    BigReal v = abs(rows[i][col[n - 1]]);
    if (v > resid) resid = v;
  }
  double last = resid.is_zero() ? -1e9 : resid.log_abs();
  double gap = (pivot_log.back() - last) / std::log(10.0);
  // A genuine relation leaves a remainder near the fit precision; anything
  // shallower means the basis does not contain one.
  if (gap < fit_prec.digits / 2.0) return std::nullopt;

  std::vector<BigReal> x(n, BigReal(0L, fit_prec));
  x[col[n - 1]] = BigReal(1L, fit_prec);
  for (std::size_t k = n - 1; k-- > 0;) {
    BigReal s(0L, fit_prec);
    for (std::size_t j = k + 1; j < n; ++j) s += rows[k][col[j]] * x[col[j]];
    x[col[k]] = -s / rows[k][col[k]];
  }

  BigReal big(0L, fit_prec);
  for (const BigReal& v : x) big = std::max(big, abs(v));
  BigReal floor = big * pow10(-fit_prec.digits / 3, fit_prec);
  std::optional<BigReal> smallest;
  for (const BigReal& v : x) {
    BigReal av = abs(v);
    if (av > floor && (!smallest || av < *smallest)) smallest = av;
  }
  if (!smallest) return std::nullopt;

  BigReal slack = pow10(-fit_prec.digits / 4, fit_prec);
  std::vector<long> coef;
  for (long mult = 1; mult <= 12 && coef.empty(); ++mult) {
    std::vector<long> trial;
    bool ok = true;
    for (const BigReal& v : x) {
      BigReal s = v / *smallest * BigReal(mult, fit_prec);
      double d = s.to_double();
      if (std::fabs(d) > 1e15) {
        ok = false;
        break;
      }
      long r = std::lround(d);
      if (!(abs(s - BigReal(r, fit_prec)) < slack)) {
        ok = false;
        break;
      }
      trial.push_back(r);
    }
    if (ok) coef = std::move(trial);
  }
  if (coef.empty()) return std::nullopt;
  long g = gcd_all(coef);
  for (long& c : coef) c /= g;

  std::vector<Expr> summands;
  for (std::size_t i = 0; i < n; ++i) {
    if (coef[i] == 0) continue;
    std::vector<Expr> factors = basis_factors(basis[i]);
    long c = std::labs(coef[i]);
    if (c != 1 || factors.empty()) factors.insert(factors.begin(), Expr::integer(c));
    Expr term = factors.size() == 1 ? factors[0] : Expr::mul(std::move(factors));
    summands.push_back(coef[i] < 0 ? Expr::neg(term) : term);
  }
  if (summands.empty()) return std::nullopt;
  Reconstruction out;
  out.relation = summands.size() == 1 ? summands[0] : Expr::add(std::move(summands));
  out.terms = expand_laurent(out.relation);
  out.null_gap_digits = gap;
  out.basis_size = n;
  return out;
}

// ---------------------------------------------------------------- adjudication

Adjudication adjudicate(const IdentityRecord& record, const IdentityErratum* erratum,
                        const std::vector<ThetaPoint>& samples, const Precision& prec,
                        const AdjudicationOptions& options) {
  Adjudication out;
  out.name = record.name;
  const BigReal tol = default_tolerance(prec);
  Identity printed = Identity::from_record(record);

  auto t0 = Clock::now();
  SampleValues sv = evaluate_samples(printed.p_def, printed.q_def, samples, prec);
  out.printed = report_from(printed.name, printed.terms, sv, tol, prec);
  double eval_ms = ms_since(t0);
  out.printed.elapsed_ms = eval_ms;

  auto accept = [&](Verdict v, Identity id, VerificationReport rep, std::string correction) {
    out.verdict = v;
    out.correction = std::move(correction);
    if (v != Verdict::AsPrinted) out.corrected = std::move(rep);
    out.effective = std::move(id);
  };

  if (out.printed.pass) {
    accept(Verdict::AsPrinted, printed, out.printed, "");
  }

  if (!out.pass() && options.search_edits && sv.pq.size() == samples.size()) {
    std::map<std::vector<std::pair<Rational, std::pair<Rational, Rational>>>, std::size_t> seen;
    std::vector<Edit> hits;
    std::vector<std::vector<std::string>> aliases;
    for (const Edit& ed : single_edits(printed.relation)) {
      auto terms = try_expand(ed.result);
      if (!terms || terms->empty() || *terms == printed.terms) continue;
      std::vector<std::pair<Rational, std::pair<Rational, Rational>>> key;
      for (const Term& t : *terms) key.push_back({t.coef, {t.ep, t.eq}});
      if (auto it = seen.find(key); it != seen.end()) {
        if (it->second != SIZE_MAX) aliases[it->second].push_back(ed.description);
        continue;
      }
      if (!holds_everywhere(*terms, sv, tol)) {
        seen.emplace(std::move(key), SIZE_MAX);
        continue;
      }
      seen.emplace(std::move(key), hits.size());
      hits.push_back(ed);
      aliases.emplace_back();
    }
    if (!hits.empty()) {
      Identity fixed = printed.with_relation(hits[0].result);
      VerificationReport rep = report_from(printed.name, fixed.terms, sv, tol, prec);
      for (const std::string& a : aliases[0]) out.details.push_back("same relation: " + a);
      for (std::size_t i = 1; i < hits.size(); ++i) out.details.push_back("also verifies: " + hits[i].description);
      if (rep.pass) accept(Verdict::SingleEdit, fixed, std::move(rep), hits[0].description);
    }
  }

  if (!out.pass() && erratum) {
    Identity fixed(printed.name, erratum->p_def.value_or(printed.p_def), erratum->q_def.value_or(printed.q_def),
                   erratum->relation.value_or(printed.relation));
    VerificationReport rep = verify(fixed, samples, tol, prec);
    std::string what;
    if (erratum->p_def) what += "P = " + print(*erratum->p_def);
    if (erratum->q_def) what += std::string(what.empty() ? "" : "; ") + "Q = " + print(*erratum->q_def);
    if (erratum->relation) what += std::string(what.empty() ? "" : "; ") + "relation = " + print(*erratum->relation);
    if (rep.pass) {
      accept(Verdict::Documented, fixed, std::move(rep), "erratum: " + what);
    } else {
      out.details.push_back("documented erratum does not hold: " + what);
    }
  }

  if (!out.pass() && options.reconstruct && !printed.terms.empty()) {
    auto [max_a, max_b] = degree_bounds(printed.terms);
    std::optional<Reconstruction> rec;
    try {
      rec = reconstruct_relation(printed.p_def, printed.q_def, max_a, max_b, Precision(options.fit_digits));
    } catch (const DomainError& ex) {
      out.details.push_back(std::string("reconstruction failed: ") + ex.what());
    }
    if (rec) {
      std::vector<Term> terms = rec->terms;
      Expr relation = rec->relation;
      auto diffs = coefficient_diffs(printed.terms, terms);
      auto flipped = coefficient_diffs(printed.terms, negated(terms));
      if (flipped.size() < diffs.size()) {
        terms = negated(terms);
        relation = Expr::neg(relation);
        diffs = std::move(flipped);
      }
      Identity fixed = printed.with_relation(relation);
      VerificationReport rep = report_from(printed.name, fixed.terms, sv, tol, prec);

      // Among the printed relation and its single edits, the one nearest the recovered relation.
      std::string closest = "as printed";
      std::size_t closest_n = diffs.size();
      for (const Edit& ed : single_edits(printed.relation)) {
        auto t = try_expand(ed.result);
        if (!t) continue;
        std::size_t d = coefficient_diffs(*t, terms).size();
        if (d < closest_n) {
          closest_n = d;
          closest = ed.description;
        }
      }
      out.details.push_back("relation recovered over " + std::to_string(rec->basis_size) + " basis functions; " +
                            std::to_string(diffs.size()) + " coefficients differ from the printed relation");
      for (const std::string& d : diffs) out.details.push_back("  " + d);
      out.details.push_back("closest reading: " + closest + " (" + std::to_string(closest_n) +
                            " coefficients still differ)");
      if (rep.pass) {
        accept(Verdict::Reconstructed, fixed, std::move(rep), "reconstructed: " + print(relation));
      }
    } else {
      out.details.push_back("no integer relation found in the basis bounded by the printed degrees");
    }
  }

  if (out.pass() && options.rerun_digits > 0) {
    Precision hi(options.rerun_digits, prec.guard);
    out.rerun = verify(*out.effective, samples, default_tolerance(hi), hi);
  }
  if (out.corrected) out.corrected->elapsed_ms += eval_ms;
  return out;
}

// ---------------------------------------------------------------- factors

std::vector<BigReal> factor_analysis(const FactoredIdentity& fid, const ThetaPoint& q, const Precision& prec) {
  PQ pq = eval_pq(fid.p_def, fid.q_def, q.realize(prec));
  EvalContext ctx;
  ctx.prec = prec;
  ctx.bindings.emplace("P", pq.p);
  ctx.bindings.emplace("Q", pq.q);
  std::vector<BigReal> out;
  for (const Expr& f : fid.factors) out.push_back(eval(f, ctx));
  return out;
}

FactorReport verify_factors(const FactoredIdentity& fid, const std::vector<ThetaPoint>& samples, const BigReal& tol,
                            const Precision& prec) {
  FactorReport rep;
  rep.name = fid.name;
  rep.vanishing_max = BigReal(0L, prec);
  std::optional<BigReal> others;
  for (const ThetaPoint& s : samples) {
    rep.q.push_back(s.describe());
    try {
      auto vals = factor_analysis(fid, s, prec);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        BigReal v = abs(vals[i]);
        if (i == fid.vanishing_index) {
          if (v > rep.vanishing_max) rep.vanishing_max = v;
        } else if (!others || v < *others) {
          others = v;
        }
      }
      rep.values.push_back(std::move(vals));
    } catch (const std::exception& ex) {
      if (rep.errors++ == 0) rep.first_error = fid.name + " at q = " + s.describe() + ": " + ex.what();
      rep.values.emplace_back();
    }
  }
  rep.others_min = others.value_or(BigReal(0L, prec));
  bool others_ok = !others || *others > BigReal(Rational(1, 100), prec);
  rep.pass = rep.errors == 0 && fid.vanishing_index < fid.factors.size() && rep.vanishing_max < tol && others_ok;
  return rep;
}

// ---------------------------------------------------------------- bridges

BridgeResiduals check_quotient_bridges(const ThetaPoint& point, const Precision& prec) {
  BigReal q = point.realize(prec);
  BigReal F = theta_fneg(pow_int(q, 2)) * theta_fneg(pow_int(q, 30)) /
              (theta_fneg(pow_int(q, 6)) * theta_fneg(pow_int(q, 10)));
  BigReal F3 = pow_int(F, 3);
  BigReal B2cube = pow_int(eval_quotient(QuotientKind::B, 2, q), 3);
  BigReal u = eval_quotient(QuotientKind::A, 1, q);
  BigReal c = eval_quotient(QuotientKind::C, 1, q);
  BigReal one(1L, prec);
  if ((u - one).is_zero() || (c - one).is_zero()) throw DomainError("bridge singular at q = " + point.describe());
  BigReal phi_rhs = u * pow_int((u - one) / (u + one), 2);
  BigReal psi_printed = c * c * pow_int((c + one) / (c - one), 2);
  BigReal psi_rhs = c * c * (one + c) / (one - c);
  BigReal ui = one / u;
  return {abs(F3 - phi_rhs), abs(F3 - psi_printed), abs(B2cube - phi_rhs), abs(B2cube - psi_rhs),
          abs(one / c - (one + ui) / (one - ui))};
}

}  // namespace theta
