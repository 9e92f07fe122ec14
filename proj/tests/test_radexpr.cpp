#include "theta/radexpr.hpp"

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "catalog_walk.hpp"
#include "theta/catalog.hpp"

using namespace theta;
using testing_support::Sample;
using testing_support::catalog_expressions;

namespace {

BigReal ev(std::string_view text, int digits = 50) {
  EvalContext ctx{Precision(digits), {}, {}};
  return eval(parse(text), ctx);
}

}  // namespace

TEST(Parser, BuildsExpectedTree) {
  Expr e = parse("3^(1/4)*(5^(1/2) - 2)^(1/4)");
  ASSERT_EQ(e.kind(), NodeKind::Mul);
  ASSERT_EQ(e.children().size(), 2u);
  EXPECT_EQ(e.child(0).kind(), NodeKind::Pow);
  EXPECT_EQ(e.child(0).exponent(), Rational(1, 4));
  EXPECT_EQ(e.child(1).child(0).kind(), NodeKind::Add);

  Expr r = parse("P + P*Q - 9 - Q", SymbolPolicy::IdentityVars);
  ASSERT_EQ(r.kind(), NodeKind::Add);
  EXPECT_EQ(r.children().size(), 4u);
  EXPECT_EQ(r.child(2).kind(), NodeKind::Neg);
}

TEST(Parser, PrecedenceAndAssociativity) {
  EXPECT_EQ(ev("-2^2"), -4L);
  EXPECT_EQ(ev("2*3^2"), 18L);
  EXPECT_EQ(ev("12/3/2"), 2L);
  EXPECT_EQ(ev("10 - 4 - 3"), 3L);
  EXPECT_EQ(ev("2^(-1)"), BigReal(Rational(1, 2), Precision(50)));
  // a numeric /M right after ^N belongs to the exponent
  EXPECT_LT(abs(ev("8^2/3") - BigReal(4L, Precision(50))), pow10(-50, Precision(50)));
  EXPECT_EQ(ev("8^2/(3)"), BigReal(Rational(64, 3), Precision(50)));
}

TEST(Parser, ReportsPositionedErrors) {
  try {
    parse("sqrt(5");
    FAIL() << "accepted unbalanced input";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
    EXPECT_EQ(e.expected(), "')'");
    EXPECT_EQ(e.found(), "end of input");
  }
  auto position = [](std::string_view s, SymbolPolicy policy = SymbolPolicy::ConstantsOnly) -> long {
    try {
      parse(s, policy);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(position("1 + * 2"), 4);
  EXPECT_EQ(position("2 3"), 2);
  EXPECT_EQ(position("x + 1"), 0);
  EXPECT_EQ(position("P*Q"), 0);
  EXPECT_EQ(position("P*R", SymbolPolicy::IdentityVars), 2);
  EXPECT_EQ(position("phi(q)", SymbolPolicy::IdentityVars), 0);
  EXPECT_EQ(position("2^x"), 2);
  EXPECT_EQ(position("2^(1/0)"), 5);
  EXPECT_EQ(position("2^2^2"), 3);
  EXPECT_EQ(position("()"), 1);
  EXPECT_EQ(position(""), 0);
  EXPECT_EQ(position("0.3"), -1);
}

TEST(Parser, SymbolPolicies) {
  EXPECT_NO_THROW(parse("phi(q^3)*psim(q)/fneg(q^5) + A(1)*B(2)/C(3)", SymbolPolicy::ThetaFuncs));
  EXPECT_THROW(parse("phi(q)", SymbolPolicy::ConstantsOnly), ParseError);
  EXPECT_THROW(parse("P", SymbolPolicy::ThetaFuncs), ParseError);
  ParseOptions lets{SymbolPolicy::ConstantsOnly, {"a", "b"}};
  EXPECT_NO_THROW(parse("(a*b)^(1/2)", lets));
  EXPECT_TRUE(is_registered_call("sqrt", SymbolPolicy::ConstantsOnly));
  EXPECT_TRUE(is_registered_call("phi", SymbolPolicy::ThetaFuncs));
  EXPECT_FALSE(is_registered_call("phi", SymbolPolicy::IdentityVars));
}

TEST(Printer, CanonicalExponents) {
  Expr half = Expr::pow(Expr::symbol("P"), Rational(1, 2));
  EXPECT_EQ(print(half), "P^(1/2)");
  EXPECT_EQ(print(Expr::pow(Expr::integer(3), Rational(2))), "3^2");
  EXPECT_EQ(print(parse("1/Q^3", SymbolPolicy::IdentityVars)), "1/Q^3");
}

TEST(Printer, RoundTripsEveryCatalogExpression) {
  std::vector<Sample> all = catalog_expressions();
  EXPECT_GT(all.size(), 100u);
  for (const Sample& s : all) {
    std::string text = print(s.expr);
    Expr again = parse(text, s.options);
    EXPECT_TRUE(again == s.expr) << s.where << ": " << text;
    EXPECT_EQ(print(again), text) << s.where;
  }
}

TEST(Parser, TokenDeletionGivesPositionedErrors) {
  testing_support::MutationResult r = testing_support::check_token_deletions();
  EXPECT_GT(r.invalid, 1000u);
  EXPECT_TRUE(r.violations.empty()) << r.violations.size() << " violations, first: " << r.violations.front();
}

TEST(Eval, NestedRadicals) {
  BigReal s47 = ev("(5^(1/2) + 3^(1/2))*(3^(1/2) - 1)/2");
  EXPECT_LT(abs(s47 - BigReal::from_string("1.45243228056937494762132269477", Precision(50))),
            pow10(-29, Precision(50)));
  BigReal a = ev("(11689 - 3696*10^(1/2))^(1/2) - (11688 - 3696*10^(1/2))^(1/2)");
  EXPECT_LT(abs(a - BigReal::from_string("0.634413638266241063258424367761", Precision(50))),
            pow10(-29, Precision(50)));
  EXPECT_LT(abs(ev("sqrt(2)") - ev("2^(1/2)")), pow10(-55, Precision(50)));
  EXPECT_EQ(ev("0.25*4"), 1L);
}

TEST(Eval, Errors) {
  EXPECT_THROW(ev("(1 - 2)^(1/2)"), DomainError);
  EXPECT_THROW(ev("1/(2 - 2)"), DomainError);
  EvalContext empty{Precision(30), {}, {}};
  EXPECT_THROW(eval(parse("P + 1", SymbolPolicy::IdentityVars), empty), EvalError);
  EXPECT_THROW(eval(parse("phi(q)", SymbolPolicy::ThetaFuncs), empty), EvalError);
  EvalContext bound{Precision(30), {{"P", BigReal(2L, Precision(30))}, {"Q", BigReal(3L, Precision(30))}}, {}};
  EXPECT_EQ(eval(parse("P*Q - P^2", SymbolPolicy::IdentityVars), bound), 2L);
}

TEST(Eval, PrecisionMonotoneOnCatalog) {
  Catalog c = Catalog::builtin();
  EvalContext lo = c.constants(Precision(50)), hi = c.constants(Precision(80));
  int checked = 0;
  for (const Sample& s : catalog_expressions()) {
    if (s.options.policy != SymbolPolicy::ConstantsOnly) continue;
    BigReal a = eval(s.expr, lo), b = eval(s.expr, hi);
    BigReal scale = abs(b) > 1L ? abs(b) : BigReal(1L, Precision(80));
    EXPECT_LT(abs(a.with_precision(Precision(80)) - b) / scale, pow10(-45, Precision(80))) << s.where;
    ++checked;
  }
  EXPECT_GE(checked, 30 + 12 + 5);
}

TEST(Laurent, ExpandsProductsAndPowers) {
  auto terms = expand_laurent(parse("(P^(1/2) + P^(-1/2))^2 - Q/P", SymbolPolicy::IdentityVars));
  std::vector<Monomial> want = {{Rational(1), Rational(-1), Rational(0)},
                                {Rational(-1), Rational(-1), Rational(1)},
                                {Rational(2), Rational(0), Rational(0)},
                                {Rational(1), Rational(1), Rational(0)}};
  EXPECT_EQ(terms, want);
  EXPECT_TRUE(expand_laurent(parse("P*Q - Q*P", SymbolPolicy::IdentityVars)).empty());
  EXPECT_EQ(print_monomial({Rational(-3), Rational(1, 2), Rational(-2)}), "P^(1/2)*Q^(-2)");
  EXPECT_EQ(print_monomial({Rational(5), Rational(0), Rational(0)}), "1");
}

TEST(Laurent, RejectsNonPolynomials) {
  EXPECT_THROW(expand_laurent(parse("(P + 1)^(1/2)", SymbolPolicy::IdentityVars)), ExpansionError);
  EXPECT_THROW(expand_laurent(parse("1/(P + Q)", SymbolPolicy::IdentityVars)), ExpansionError);
  EXPECT_THROW(expand_laurent(parse("sqrt(P)", SymbolPolicy::IdentityVars)), ExpansionError);
}

TEST(SingleEdits, CoversEditClasses) {
  Expr e = parse("(Q^3 - 1/Q^3)*(P - 2) + (P - 2)", SymbolPolicy::IdentityVars);
  std::vector<Edit> edits = single_edits(e);
  auto has = [&](const std::string& text) {
    for (const Edit& x : edits)
      if (print(x.result) == text) return true;
    return false;
  };
  EXPECT_TRUE(has("(Q^3 + 1/Q^3)*(P - 2) + (P - 2)"));
  EXPECT_TRUE(has("(Q^3 - 1/Q^(3/2))*(P - 2) + (P - 2)"));
  EXPECT_TRUE(has("(Q^3 - 1/Q^3)*(P + 2) + (P + 2)"));  // both copies at once
  EXPECT_TRUE(has("(Q^3 - 1/Q^3)*(P + 2) + (P - 2)"));
  EXPECT_TRUE(has("(Q^3 - 1/Q^3)*(P - 2) - (P - 2)"));
  EXPECT_TRUE(has("(Q^3 - 1/Q^3)^(1/2)*(P - 2) + (P - 2)"));
  for (std::size_t i = 0; i < edits.size(); ++i) {
    EXPECT_FALSE(edits[i].result == e);
    for (std::size_t j = i + 1; j < edits.size(); ++j) EXPECT_FALSE(edits[i].result == edits[j].result);
  }
}

TEST(SingleEdits, ReplaceAllCountsCopies) {
  Expr e = parse("(P - 2)*Q + (P - 2)", SymbolPolicy::IdentityVars);
  std::size_t n = 0;
  Expr r = replace_all(e, parse("P - 2", SymbolPolicy::IdentityVars), parse("P + 2", SymbolPolicy::IdentityVars), &n);
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(print(r), "(P + 2)*Q + (P + 2)");
}
