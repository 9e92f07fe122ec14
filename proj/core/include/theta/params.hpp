#pragma once

#include <vector>

#include "theta/catalog.hpp"
#include "theta/mp.hpp"
#include "theta/param_spec.hpp"
#include "theta/report.hpp"

namespace theta {

// The defining theta quotient with both nomes e^(-pi sqrt(n/k)), e^(-pi sqrt(nk))
// realized at prec. l and l' divide by the extra factor e^(-(k-1) pi sqrt(n/k) / 8).
BigReal eval_param(const ParamSpec& spec, const Precision& prec);

struct SymmetryResiduals {
  BigReal product;  // |p(k,n) p(k,1/n) - 1|
  BigReal swap;     // |p(k,n) - p(n,k)|
};
SymmetryResiduals check_reciprocal_symmetry(Family family, const Rational& k, const Rational& n,
                                            const Precision& prec);

// Product laws, the h-l relations and the h-forms of two degree-15 identities,
// each at a fixed list of instances. One sample per instance, labelled in `q`.
VerificationReport check_cross_relations(const Precision& prec);

ValueCheck verify_closed_form(const ClosedFormRecord& entry, const EvalContext& constants, const Precision& prec,
                              bool search_edits = true);
std::vector<ValueCheck> verify_closed_forms(const Catalog& catalog, const Precision& prec);
std::vector<ValueCheck> verify_intermediates(const Catalog& catalog, const Precision& prec);

}  // namespace theta
