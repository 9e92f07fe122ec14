#include "theta/report.hpp"

namespace theta {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AsPrinted:
      return "verified";
    case Verdict::SingleEdit:
      return "corrected";
    case Verdict::Documented:
      return "erratum";
    case Verdict::Reconstructed:
      return "reconstructed";
    case Verdict::Failed:
      return "failed";
  }
  return "?";
}

void VerificationReport::add(SampleResidual s) {
  if (s.residual) {
    if (!max_residual || *s.residual > *max_residual) max_residual = *s.residual;
  } else {
    ++errors;
  }
  samples.push_back(std::move(s));
}

void VerificationReport::finish() { pass = errors == 0 && max_residual && *max_residual < tolerance; }

BigReal default_tolerance(const Precision& prec) { return pow10(10 - prec.digits, prec); }

namespace {

std::optional<BigReal> try_residual(const std::function<BigReal(const Expr&)>& evaluate, const Expr& e,
                                    const BigReal& target, std::string* error) {
  try {
    return abs(evaluate(e) - target);
  } catch (const DomainError& ex) {
    if (error) *error = ex.what();
  } catch (const EvalError& ex) {
    if (error) *error = ex.what();
  }
  return std::nullopt;
}

}  // namespace

ValueCheck adjudicate_value(std::string name, const Expr& printed, const std::optional<Expr>& documented,
                            const std::function<BigReal(const Expr&)>& evaluate, const BigReal& target,
                            const BigReal& tol, bool search_edits) {
  ValueCheck out;
  out.name = std::move(name);
  out.effective = printed;
  out.printed_residual = try_residual(evaluate, printed, target, &out.printed_error);
  if (out.printed_residual && *out.printed_residual < tol) {
    out.verdict = Verdict::AsPrinted;
    out.residual = out.printed_residual;
    return out;
  }

  if (search_edits) {
    for (const Edit& ed : single_edits(printed)) {
      auto r = try_residual(evaluate, ed.result, target, nullptr);
      if (!r || !(*r < tol)) continue;
      if (out.verdict == Verdict::SingleEdit) {
        out.equivalent_edits.push_back(ed.description);
        continue;
      }
      out.verdict = Verdict::SingleEdit;
      out.correction = ed.description;
      out.effective = ed.result;
      out.residual = r;
    }
    if (out.verdict == Verdict::SingleEdit) return out;
  }

  if (documented) {
    auto r = try_residual(evaluate, *documented, target, nullptr);
    if (r && *r < tol) {
      out.verdict = Verdict::Documented;
      out.correction = "erratum: " + print(*documented);
      out.effective = *documented;
      out.residual = r;
      return out;
    }
    out.correction = "documented erratum does not hold either";
  }
  return out;
}

}  // namespace theta
