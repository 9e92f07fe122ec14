#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "theta/mp.hpp"

namespace theta {

enum class NodeKind { Integer, Rational, Symbol, Add, Mul, Neg, Pow, Call };

// Immutable expression tree with value semantics; copies share nodes.
// Subtraction is an Add child wrapped in Neg, division a Mul child raised to -1.
class Expr {
 public:
  static Expr integer(std::int64_t value);
  // Terminating decimal such as 0.25; the denominator must be 2^a 5^b.
  static Expr rational(const Rational& value);
  static Expr symbol(std::string name);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr neg(Expr operand);
  static Expr pow(Expr base, const Rational& exponent);
  static Expr call(std::string function, std::vector<Expr> args);

  NodeKind kind() const;
  // Integer and Rational literal value.
  const Rational& value() const;
  const Rational& exponent() const;
  // Symbol or function name.
  const std::string& name() const;
  // Add terms, Mul factors, Neg operand, Pow base, Call arguments.
  const std::vector<Expr>& children() const;
  const Expr& child(std::size_t i) const { return children().at(i); }

  std::size_t node_count() const;
  bool is_literal() const { return kind() == NodeKind::Integer || kind() == NodeKind::Rational; }

  // Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class SymbolPolicy {
  ConstantsOnly,  // no free symbols
  IdentityVars,   // P and Q
  ThetaFuncs,     // q and the theta calls
};

struct ParseOptions {
  SymbolPolicy policy = SymbolPolicy::ConstantsOnly;
  // Additional names admitted as symbols, e.g. catalog `let` bindings.
  std::set<std::string, std::less<>> extra_symbols;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string expected, std::string found);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

Expr parse(std::string_view input, const ParseOptions& options = {});
Expr parse(std::string_view input, SymbolPolicy policy);
std::string print(const Expr& e);

// Functions callable under a policy; sqrt is always available.
bool is_registered_call(std::string_view name, SymbolPolicy policy);

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalContext {
  Precision prec;
  std::map<std::string, BigReal, std::less<>> bindings;
  // Resolves calls other than sqrt; receives the call node and evaluated arguments.
  std::function<BigReal(const Expr& call, const std::vector<BigReal>& args)> call;
};

BigReal eval(const Expr& e, const EvalContext& ctx);

// ---------------------------------------------------------------- Laurent form

struct Monomial {
  Rational coef;
  Rational ep;  // exponent of the first variable
  Rational eq;  // exponent of the second variable

  bool operator==(const Monomial&) const = default;
};

class ExpansionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expands e into a sum of monomials in x and y with rational exponents, sorted by
// (ep, eq) and without zero coefficients. Throws ExpansionError when e is not a
// Laurent polynomial (fractional power of a sum, calls, other symbols).
std::vector<Monomial> expand_laurent(const Expr& e, std::string_view x = "P", std::string_view y = "Q");
// The power product alone, without the coefficient: "P^(1/2)*Q^(-2)", "1".
std::string print_monomial(const Monomial& m, std::string_view x = "P", std::string_view y = "Q");

// ---------------------------------------------------------------- single edits

struct Edit {
  Expr result;
  std::string description;
  std::size_t occurrences = 1;  // how many identical subtrees were rewritten
};

// Every tree one edit away from `root`: negate a literal, flip the sign of a
// summand, change an exponent e to -e, e/2 or 2e, or raise a parenthesized sum to
// 1/2, 1/4 or 2. Each edit is offered at a single node and, when the edited
// subtree occurs more than once, at all of its copies. Results are distinct.
std::vector<Edit> single_edits(const Expr& root);

// Rewrites every copy of `target` inside `root`.
Expr replace_all(const Expr& root, const Expr& target, const Expr& replacement, std::size_t* count = nullptr);

}  // namespace theta
