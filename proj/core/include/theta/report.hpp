#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "theta/mp.hpp"
#include "theta/radexpr.hpp"

namespace theta {

// How a record was settled.
enum class Verdict {
  AsPrinted,      // holds exactly as written
  SingleEdit,     // one automatic edit makes it hold
  Documented,     // the catalog's erratum line holds
  Reconstructed,  // relation recovered numerically, then verified
  Failed,
};

std::string_view verdict_name(Verdict v);
inline bool verdict_passes(Verdict v) { return v != Verdict::Failed; }

struct SampleResidual {
  std::string q;
  std::optional<BigReal> residual;
  std::string error;  // set when the sample could not be evaluated
};

struct VerificationReport {
  std::string name;
  int digits = 0;
  BigReal tolerance;
  std::vector<SampleResidual> samples;
  std::optional<BigReal> max_residual;
  std::size_t errors = 0;
  bool pass = false;
  double elapsed_ms = 0;

  void add(SampleResidual s);
  // Sets pass from the samples.
  void finish();
};

// 10^(10 - digits)
BigReal default_tolerance(const Precision& prec);

// Settles a closed-form value: as written, else the unique single edit (by value),
// else the documented erratum.
struct ValueCheck {
  std::string name;
  Verdict verdict = Verdict::Failed;
  std::optional<BigReal> printed_residual;
  std::string printed_error;
  std::optional<BigReal> residual;  // of the accepted form
  std::string correction;
  std::vector<std::string> equivalent_edits;
  Expr effective = Expr::integer(0);
  bool pass() const { return verdict_passes(verdict); }
};

ValueCheck adjudicate_value(std::string name, const Expr& printed, const std::optional<Expr>& documented,
                            const std::function<BigReal(const Expr&)>& evaluate, const BigReal& target,
                            const BigReal& tol, bool search_edits = true);

}  // namespace theta
