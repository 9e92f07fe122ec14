#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "theta/catalog.hpp"
#include "theta/mp.hpp"
#include "theta/qseries.hpp"
#include "theta/radexpr.hpp"
#include "theta/report.hpp"

namespace theta {

enum class QuotientKind { A, B, C };

// A(r), B(r), C(r): the degree-15 quotients of phi, f(-q) and psi(-q) at q^r.
BigReal eval_quotient(QuotientKind kind, long r, const BigReal& q);
BigReal eval_quotient(QuotientKind kind, long r, const ThetaPoint& q, const Precision& prec);

// Evaluates theta-quotient expressions (symbol q, calls phi/psi/psim/fneg/A/B/C)
// at one nome, memoizing repeated calls.
class QuotientEvaluator {
 public:
  explicit QuotientEvaluator(BigReal q);
  BigReal operator()(const Expr& e);
  const BigReal& q() const { return q_; }

 private:
  BigReal q_;
  std::map<std::string, BigReal> memo_;
};

using Term = Monomial;

struct Identity {
  std::string name;
  Expr p_def;
  Expr q_def;
  Expr relation;
  std::vector<Term> terms;  // relation expanded in P and Q

  Identity(std::string name, Expr p_def, Expr q_def, Expr relation);
  static Identity from_record(const IdentityRecord& r) { return {r.name, r.p_def, r.q_def, r.relation}; }
  Identity with_relation(Expr relation) const { return {name, p_def, q_def, std::move(relation)}; }
};

// 20 (or `count`) evenly spaced exact nomes in [q_min, q_max].
std::vector<ThetaPoint> sample_grid(int count = 20, const Rational& q_min = Rational(1, 20),
                                    const Rational& q_max = Rational(3, 5));

struct PQ {
  BigReal p;
  BigReal q;
};

PQ eval_pq(const Expr& p_def, const Expr& q_def, const BigReal& q);
// |sum coef P^eP Q^eQ|
BigReal relation_residual(const std::vector<Term>& terms, const PQ& pq);
BigReal residual(const Identity& id, const ThetaPoint& q, const Precision& prec);

VerificationReport verify(const Identity& id, const std::vector<ThetaPoint>& samples, const BigReal& tol,
                          const Precision& prec);

struct AdjudicationOptions {
  bool search_edits = true;
  bool reconstruct = true;
  int fit_digits = 150;
  int rerun_digits = 0;  // when set, the accepted relation is re-verified at this precision
};

struct Adjudication {
  std::string name;
  Verdict verdict = Verdict::Failed;
  VerificationReport printed;
  std::optional<VerificationReport> corrected;
  std::string correction;
  std::vector<std::string> details;  // coefficient differences, equivalent edits
  std::optional<Identity> effective;
  std::optional<VerificationReport> rerun;
  bool pass() const { return verdict_passes(verdict); }
  const VerificationReport& final_report() const { return corrected ? *corrected : printed; }
};

// As printed; else the unique single edit of the relation that verifies; else the
// catalog's erratum line; else a numerically reconstructed integer relation.
Adjudication adjudicate(const IdentityRecord& record, const IdentityErratum* erratum,
                        const std::vector<ThetaPoint>& samples, const Precision& prec,
                        const AdjudicationOptions& options = {});

// Integer relation in the reciprocal-symmetric basis
//   (P^(a/2) +- P^(-a/2)) (Q^(b/2) + Q^(-b/2)),   0 <= a <= max_a, 0 <= b <= max_b, a = b mod 2,
// with + for even a and - for odd a, fitted as the null vector of values at
// nomes disjoint from the verification grid.
struct Reconstruction {
  std::vector<Term> terms;
  Expr relation = Expr::integer(0);
  double null_gap_digits = 0;  // how far the smallest pivot sits below the next one
  std::size_t basis_size = 0;
};
std::optional<Reconstruction> reconstruct_relation(const Expr& p_def, const Expr& q_def, int max_a, int max_b,
                                                   const Precision& fit_prec);

struct FactoredIdentity {
  std::string name;
  Expr p_def;
  Expr q_def;
  std::vector<Expr> factors;
  std::size_t vanishing_index = 0;
  static FactoredIdentity from_record(const FactoredRecord& r) {
    return {r.name, r.p_def, r.q_def, r.factors, r.vanishing_index};
  }
};

std::vector<BigReal> factor_analysis(const FactoredIdentity& fid, const ThetaPoint& q, const Precision& prec);

struct FactorReport {
  std::string name;
  std::vector<std::string> q;
  std::vector<std::vector<BigReal>> values;  // [sample][factor]
  BigReal vanishing_max;
  BigReal others_min;
  std::size_t errors = 0;
  std::string first_error;
  bool pass = false;
};
// Designated factor below tol, every other factor above 10^-2 in magnitude.
FactorReport verify_factors(const FactoredIdentity& fid, const std::vector<ThetaPoint>& samples, const BigReal& tol,
                            const Precision& prec);

// F = f(-q^2) f(-q^30) / (f(-q^6) f(-q^10)), u = A(1), c = C(1).
// Written with F^3 on the left, both forms are off by the factor q^2 (F^3 is
// near 1, the right sides are O(q^2)); they hold with B(2)^3 = q^2 F^3, and the
// psi form needs (1+c)/(1-c) to the first power.
struct BridgeResiduals {
  BigReal printed_phi;  // |F^3 - u ((u-1)/(u+1))^2|
  BigReal printed_psi;  // |F^3 - c^2 ((c+1)/(c-1))^2|
  BigReal phi_form;     // |B(2)^3 - u ((u-1)/(u+1))^2|
  BigReal psi_form;     // |B(2)^3 - c^2 (1+c)/(1-c)|
  BigReal consistency;  // 1/c = (1 + 1/u)/(1 - 1/u)
};
BridgeResiduals check_quotient_bridges(const ThetaPoint& q, const Precision& prec);

}  // namespace theta
