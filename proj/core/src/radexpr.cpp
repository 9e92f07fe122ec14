#include "theta/radexpr.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace theta {

struct Expr::Node {
  NodeKind kind;
  Rational number;  // literal value or Pow exponent
  std::string name;
  std::vector<Expr> children;
};

namespace {

bool terminating_decimal(std::int64_t den) {
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

}  // namespace

Expr Expr::integer(std::int64_t value) {
  if (value < 0) throw std::invalid_argument("integer literals are non-negative; wrap in neg()");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Integer, Rational(value), {}, {}}));
}

Expr Expr::rational(const Rational& value) {
  if (value.sign() < 0) throw std::invalid_argument("rational literals are non-negative; wrap in neg()");
  if (!terminating_decimal(value.den())) throw std::invalid_argument("rational literal must be a terminating decimal");
  if (value.is_integer()) return integer(value.num());
  return Expr(std::make_shared<const Node>(Node{NodeKind::Rational, value, {}, {}}));
}

Expr Expr::symbol(std::string name) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Symbol, {}, std::move(name), {}}));
}

Expr Expr::add(std::vector<Expr> terms) {
  if (terms.empty()) throw std::invalid_argument("empty sum");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Add, {}, {}, std::move(terms)}));
}

Expr Expr::mul(std::vector<Expr> factors) {
  if (factors.empty()) throw std::invalid_argument("empty product");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Mul, {}, {}, std::move(factors)}));
}

Expr Expr::neg(Expr operand) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Neg, {}, {}, {std::move(operand)}}));
}

Expr Expr::pow(Expr base, const Rational& exponent) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Pow, exponent, {}, {std::move(base)}}));
}

Expr Expr::call(std::string function, std::vector<Expr> args) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Call, {}, std::move(function), std::move(args)}));
}

NodeKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->number; }
const Rational& Expr::exponent() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.number == y.number && x.name == y.name && x.children == y.children;
}

// ---------------------------------------------------------------- parser

ParseError::ParseError(std::size_t position, std::string expected, std::string found)
    : std::runtime_error("at offset " + std::to_string(position) + ": expected " + expected + " but found " + found),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

bool is_registered_call(std::string_view name, SymbolPolicy policy) {
  if (name == "sqrt") return true;
  if (policy != SymbolPolicy::ThetaFuncs) return false;
  static const std::set<std::string_view> theta = {"phi", "psi", "psim", "fneg", "A", "B", "C"};
  return theta.count(name) != 0;
}

namespace {

struct Token {
  enum Kind { Number, Ident, Punct, End } kind;
  std::string_view text;
  std::size_t pos;
};

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {
    std::size_t i = 0;
    while (true) {
      while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
      if (i == src_.size()) break;
      const std::size_t start = i;
      const char c = src_[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
        if (i < src_.size() && src_[i] == '.') {
          ++i;
          if (i == src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i]))) {
            throw ParseError(i, "digit after '.'", found_at(i));
          }
          while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
        }
        tokens_.push_back({Token::Number, src_.substr(start, i - start), start});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_')) ++i;
        tokens_.push_back({Token::Ident, src_.substr(start, i - start), start});
      } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
        tokens_.push_back({Token::Punct, src_.substr(start, 1), start});
        ++i;
      } else {
        throw ParseError(start, "number, symbol, operator or parenthesis", found_at(start));
      }
    }
    tokens_.push_back({Token::End, {}, src_.size()});
  }

  const Token& peek() const { return tokens_[at_]; }
  const Token& peek2() const { return tokens_[std::min(at_ + 1, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[at_ == tokens_.size() - 1 ? at_ : at_++]; }
  bool at_punct(char c) const { return peek().kind == Token::Punct && peek().text[0] == c; }

  static std::string describe(const Token& t) {
    if (t.kind == Token::End) return "end of input";
    return "'" + std::string(t.text) + "'";
  }

 private:
  std::string found_at(std::size_t i) const {
    if (i >= src_.size()) return "end of input";
    return "'" + std::string(1, src_[i]) + "'";
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : scan_(src), opts_(opts) {}

  Expr run() {
    Expr e = expr();
    if (scan_.peek().kind != Token::End) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(scan_.peek().pos, expected, Scanner::describe(scan_.peek()));
  }

  void expect(char c) {
    if (!scan_.at_punct(c)) fail(std::string("'") + c + "'");
    scan_.next();
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (scan_.at_punct('+') || scan_.at_punct('-')) {
      const bool minus = scan_.next().text[0] == '-';
      Expr t = term();
      terms.push_back(minus ? Expr::neg(std::move(t)) : std::move(t));
    }
    return terms.size() == 1 ? terms.front() : Expr::add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    while (scan_.at_punct('*') || scan_.at_punct('/')) {
      const bool divide = scan_.next().text[0] == '/';
      Expr f = unary();
      factors.push_back(divide ? Expr::pow(std::move(f), Rational(-1)) : std::move(f));
    }
    return factors.size() == 1 ? factors.front() : Expr::mul(std::move(factors));
  }

  Expr unary() {
    if (scan_.at_punct('-')) {
      scan_.next();
      return Expr::neg(power());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!scan_.at_punct('^')) return base;
    scan_.next();
    Rational e = exponent();
    if (scan_.at_punct('^')) fail("parentheses around the base of a repeated '^'");
    return Expr::pow(std::move(base), e);
  }

  std::int64_t integer_token(const char* what) {
    const Token& t = scan_.peek();
    if (t.kind != Token::Number || t.text.find('.') != std::string_view::npos) fail(what);
    scan_.next();
    try {
      return Rational::parse(t.text).num();
    } catch (const std::exception&) {
      throw ParseError(t.pos, "integer that fits in 64 bits", Scanner::describe(t));
    }
  }

  Rational exponent() {
    if (scan_.at_punct('(')) {
      scan_.next();
      bool negative = false;
      if (scan_.at_punct('-')) {
        scan_.next();
        negative = true;
      }
      std::int64_t num = integer_token("integer exponent");
      std::int64_t den = 1;
      if (scan_.at_punct('/')) {
        scan_.next();
        den = positive_integer();
      }
      expect(')');
      return Rational(negative ? -num : num, den);
    }
    std::int64_t num = integer_token("integer or parenthesized rational exponent");
    std::int64_t den = 1;
    // x^3/2 is x^(3/2); x^4/phi(q) divides.
    if (scan_.at_punct('/') && scan_.peek2().kind == Token::Number) {
      scan_.next();
      den = positive_integer();
    }
    return Rational(num, den);
  }

  std::int64_t positive_integer() {
    const std::size_t pos = scan_.peek().pos;
    const std::string found = Scanner::describe(scan_.peek());
    std::int64_t d = integer_token("positive integer denominator");
    if (d <= 0) throw ParseError(pos, "positive integer denominator", found);
    return d;
  }

  Expr atom() {
    const Token t = scan_.peek();
    if (t.kind == Token::Number) {
      scan_.next();
      Rational v;
      try {
        v = Rational::parse(t.text);
      } catch (const std::exception&) {
        throw ParseError(t.pos, "number that fits in 64 bits", Scanner::describe(t));
      }
      return v.is_integer() ? Expr::integer(v.num()) : Expr::rational(v);
    }
    if (t.kind == Token::Ident) {
      scan_.next();
      std::string name(t.text);
      if (scan_.at_punct('(')) {
        if (!is_registered_call(name, opts_.policy)) {
          throw ParseError(t.pos, "registered function", Scanner::describe(t));
        }
        scan_.next();
        Expr arg = expr();
        expect(')');
        return Expr::call(std::move(name), {std::move(arg)});
      }
      if (!symbol_allowed(name)) throw ParseError(t.pos, symbol_expectation(), Scanner::describe(t));
      return Expr::symbol(std::move(name));
    }
    if (scan_.at_punct('(')) {
      scan_.next();
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail("number, symbol or '('");
  }

  bool symbol_allowed(const std::string& name) const {
    if (opts_.extra_symbols.count(name) != 0) return true;
    switch (opts_.policy) {
      case SymbolPolicy::IdentityVars:
        return name == "P" || name == "Q";
      case SymbolPolicy::ThetaFuncs:
        return name == "q";
      case SymbolPolicy::ConstantsOnly:
        return false;
    }
    return false;
  }

  std::string symbol_expectation() const {
    switch (opts_.policy) {
      case SymbolPolicy::IdentityVars:
        return "symbol P or Q";
      case SymbolPolicy::ThetaFuncs:
        return "symbol q";
      case SymbolPolicy::ConstantsOnly:
        break;
    }
    return opts_.extra_symbols.empty() ? "a constant (no symbols here)" : "a bound name";
  }

  Scanner scan_;
  const ParseOptions& opts_;
};

}  // namespace

Expr parse(std::string_view input, const ParseOptions& options) { return Parser(input, options).run(); }

Expr parse(std::string_view input, SymbolPolicy policy) {
  ParseOptions o;
  o.policy = policy;
  return parse(input, o);
}

// ---------------------------------------------------------------- printer

namespace {

int level(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Add:
      return 0;
    case NodeKind::Mul:
      return 1;
    case NodeKind::Neg:
      return 2;
    case NodeKind::Pow:
      return 3;
    default:
      return 4;
  }
}

std::string decimal_text(const Rational& v) {
  std::int64_t den = v.den(), scale = 1;
  int places = 0;
  while (scale % den != 0) {
    scale *= 10;
    ++places;
  }
  const std::int64_t scaled = v.num() * (scale / den);
  std::string digits = std::to_string(scaled);
  if (digits.size() <= static_cast<std::size_t>(places)) digits.insert(0, places - digits.size() + 1, '0');
  return digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
}

void print_into(const Expr& e, int min_level, std::string& out);

void print_raw(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Integer:
      out += std::to_string(e.value().num());
      return;
    case NodeKind::Rational:
      out += decimal_text(e.value());
      return;
    case NodeKind::Symbol:
      out += e.name();
      return;
    case NodeKind::Call:
      out += e.name();
      out += '(';
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += ", ";
        print_into(e.child(i), 0, out);
      }
      out += ')';
      return;
    case NodeKind::Neg:
      out += '-';
      print_into(e.child(0), 3, out);
      return;
    case NodeKind::Pow: {
      print_into(e.child(0), 4, out);
      out += '^';
      const Rational& p = e.exponent();
      if (p.is_integer() && p.sign() >= 0) {
        out += p.to_string();
      } else {
        out += "(" + p.to_string() + ")";
      }
      return;
    }
    case NodeKind::Mul:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        const Expr& c = e.child(i);
        if (i > 0 && c.kind() == NodeKind::Pow && c.exponent() == Rational(-1)) {
          out += '/';
          print_into(c.child(0), 2, out);
        } else {
          if (i) out += '*';
          print_into(c, 2, out);
        }
      }
      return;
    case NodeKind::Add:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        const Expr& c = e.child(i);
        if (i == 0) {
          print_into(c, 1, out);
        } else if (c.kind() == NodeKind::Neg) {
          out += " - ";
          print_into(c.child(0), 1, out);
        } else {
          out += " + ";
          print_into(c, 1, out);
        }
      }
      return;
  }
}

void print_into(const Expr& e, int min_level, std::string& out) {
  if (level(e) < min_level) {
    out += '(';
    print_raw(e, out);
    out += ')';
  } else {
    print_raw(e, out);
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_raw(e, out);
  return out;
}

// ---------------------------------------------------------------- evaluation

BigReal eval(const Expr& e, const EvalContext& ctx) {
  switch (e.kind()) {
    case NodeKind::Integer:
    case NodeKind::Rational:
      return BigReal(e.value(), ctx.prec);
    case NodeKind::Symbol: {
      auto it = ctx.bindings.find(e.name());
      if (it == ctx.bindings.end()) throw EvalError("unbound symbol '" + e.name() + "'");
      return it->second;
    }
    case NodeKind::Add: {
      BigReal s = eval(e.child(0), ctx);
      for (std::size_t i = 1; i < e.children().size(); ++i) s += eval(e.child(i), ctx);
      return s;
    }
    case NodeKind::Mul: {
      BigReal p = eval(e.child(0), ctx);
      for (std::size_t i = 1; i < e.children().size(); ++i) p *= eval(e.child(i), ctx);
      return p;
    }
    case NodeKind::Neg:
      return -eval(e.child(0), ctx);
    case NodeKind::Pow: {
      BigReal b = eval(e.child(0), ctx);
      if (b.sign() < 0 && !e.exponent().is_integer()) {
        throw DomainError("negative base " + b.to_string(10) + " in `" + print(e) + "`");
      }
      return pow_rational(b, e.exponent());
    }
    case NodeKind::Call: {
      std::vector<BigReal> args;
      args.reserve(e.children().size());
      for (const auto& c : e.children()) args.push_back(eval(c, ctx));
      if (e.name() == "sqrt") {
        if (args.size() != 1) throw EvalError("sqrt takes one argument");
        if (args[0].sign() < 0) throw DomainError("square root of negative value in `" + print(e) + "`");
        return sqrt(args[0]);
      }
      if (!ctx.call) throw EvalError("no evaluator for function '" + e.name() + "'");
      return ctx.call(e, args);
    }
  }
  throw EvalError("corrupt expression");
}

// ---------------------------------------------------------------- Laurent form

namespace {

using Key = std::pair<Rational, Rational>;
using Poly = std::map<Key, Rational>;

void add_into(Poly& acc, const Poly& p, const Rational& scale = Rational(1)) {
  for (const auto& [k, c] : p) {
    Rational& slot = acc[k];
    slot += c * scale;
    if (slot.sign() == 0) acc.erase(k);
  }
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      Key k{ka.first + kb.first, ka.second + kb.second};
      Rational& slot = out[k];
      slot += ca * cb;
      if (slot.sign() == 0) out.erase(k);
    }
  }
  return out;
}

Rational int_power(const Rational& c, std::int64_t n) {
  Rational r(1);
  const Rational base = n < 0 ? Rational(1) / c : c;
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) r *= base;
  return r;
}

Poly expand(const Expr& e, std::string_view x, std::string_view y) {
  switch (e.kind()) {
    case NodeKind::Integer:
    case NodeKind::Rational:
      if (e.value().sign() == 0) return {};
      return {{Key{Rational(0), Rational(0)}, e.value()}};
    case NodeKind::Symbol:
      if (e.name() == x) return {{Key{Rational(1), Rational(0)}, Rational(1)}};
      if (e.name() == y) return {{Key{Rational(0), Rational(1)}, Rational(1)}};
      throw ExpansionError("symbol '" + e.name() + "' is not a variable");
    case NodeKind::Add: {
      Poly acc;
      for (const auto& c : e.children()) add_into(acc, expand(c, x, y));
      return acc;
    }
    case NodeKind::Mul: {
      Poly acc = expand(e.child(0), x, y);
      for (std::size_t i = 1; i < e.children().size(); ++i) acc = multiply(acc, expand(e.child(i), x, y));
      return acc;
    }
    case NodeKind::Neg: {
      Poly acc;
      add_into(acc, expand(e.child(0), x, y), Rational(-1));
      return acc;
    }
    case NodeKind::Pow: {
      Poly base = expand(e.child(0), x, y);
      const Rational& p = e.exponent();
      if (p.is_integer() && p.sign() >= 0) {
        if (p.num() > 64) throw ExpansionError("exponent too large to expand");
        Poly acc{{Key{Rational(0), Rational(0)}, Rational(1)}};
        for (std::int64_t i = 0; i < p.num(); ++i) acc = multiply(acc, base);
        return acc;
      }
      if (base.size() != 1) throw ExpansionError("non-integer or negative power of a sum in `" + print(e) + "`");
      const auto& [k, c] = *base.begin();
      Rational coef;
      if (c == Rational(1)) {
        coef = Rational(1);
      } else if (p.is_integer()) {
        coef = int_power(c, p.num());
      } else {
        throw ExpansionError("fractional power of a coefficient in `" + print(e) + "`");
      }
      return {{Key{k.first * p, k.second * p}, coef}};
    }
    case NodeKind::Call:
      throw ExpansionError("function call '" + e.name() + "' in a relation");
  }
  throw ExpansionError("corrupt expression");
}

}  // namespace

std::vector<Monomial> expand_laurent(const Expr& e, std::string_view x, std::string_view y) {
  std::vector<Monomial> out;
  for (const auto& [k, c] : expand(e, x, y)) out.push_back({c, k.first, k.second});
  return out;
}

std::string print_monomial(const Monomial& m, std::string_view x, std::string_view y) {
  auto factor = [](std::string_view v, const Rational& e) -> std::string {
    if (e.sign() == 0) return "";
    if (e == Rational(1)) return std::string(v);
    if (e.is_integer() && e.sign() > 0) return std::string(v) + "^" + e.to_string();
    return std::string(v) + "^(" + e.to_string() + ")";
  };
  std::string fx = factor(x, m.ep), fy = factor(y, m.eq);
  std::string body = fx.empty() ? fy : fy.empty() ? fx : fx + "*" + fy;
  if (body.empty()) return "1";
  return body;
}

// ---------------------------------------------------------------- edits

namespace {

Expr with_children(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
    case NodeKind::Add:
      return Expr::add(std::move(kids));
    case NodeKind::Mul:
      return Expr::mul(std::move(kids));
    case NodeKind::Neg:
      return Expr::neg(std::move(kids.at(0)));
    case NodeKind::Pow:
      return Expr::pow(std::move(kids.at(0)), e.exponent());
    case NodeKind::Call:
      return Expr::call(e.name(), std::move(kids));
    default:
      return e;
  }
}

Expr replace_at(const Expr& root, const std::vector<std::size_t>& path, std::size_t depth, const Expr& repl) {
  if (depth == path.size()) return repl;
  std::vector<Expr> kids = root.children();
  kids[path[depth]] = replace_at(kids[path[depth]], path, depth + 1, repl);
  return with_children(root, std::move(kids));
}

std::string quoted(const Expr& e) { return "`" + print(e) + "`"; }

struct Rewrite {
  Expr target;
  Expr replacement;
  std::string description;
};

void rewrites_at(const Expr& node, const Expr* parent, std::vector<Rewrite>& out) {
  const bool parent_add = parent && parent->kind() == NodeKind::Add;
  const bool parent_neg = parent && parent->kind() == NodeKind::Neg;
  const bool parent_pow = parent && parent->kind() == NodeKind::Pow;

  if (node.is_literal() && !parent_add && !parent_neg) {
    out.push_back({node, Expr::neg(node), "negate literal " + quoted(node)});
  }
  if (node.kind() == NodeKind::Neg && node.child(0).is_literal() && !parent_add) {
    out.push_back({node, node.child(0), "negate literal " + quoted(node)});
  }
  if (node.kind() == NodeKind::Add) {
    for (std::size_t i = 0; i < node.children().size(); ++i) {
      std::vector<Expr> kids = node.children();
      const Expr& c = kids[i];
      Expr flipped = c.kind() == NodeKind::Neg ? c.child(0) : Expr::neg(c);
      const std::string before = print(c);
      kids[i] = flipped;
      out.push_back({node, Expr::add(std::move(kids)),
                     "flip the sign of summand `" + before + "` in " + quoted(node)});
    }
    if (!parent_add && !parent_pow) {
      for (const Rational& r : {Rational(1, 2), Rational(1, 4), Rational(2)}) {
        out.push_back({node, Expr::pow(node, r), "raise " + quoted(node) + " to the power " + r.to_string()});
      }
    }
  }
  if (node.kind() == NodeKind::Pow) {
    const Rational& e = node.exponent();
    for (const Rational& r : {-e, e / Rational(2), e * Rational(2)}) {
      if (r == e) continue;
      Expr repl = Expr::pow(node.child(0), r);
      out.push_back({node, repl, quoted(node) + " -> " + quoted(repl)});
    }
  }
}

void collect(const Expr& node, const Expr* parent, std::vector<std::size_t>& path,
             std::vector<std::pair<std::vector<std::size_t>, Rewrite>>& out) {
  std::vector<Rewrite> local;
  rewrites_at(node, parent, local);
  for (auto& r : local) out.emplace_back(path, std::move(r));
  for (std::size_t i = 0; i < node.children().size(); ++i) {
    path.push_back(i);
    collect(node.child(i), &node, path, out);
    path.pop_back();
  }
}

}  // namespace

Expr replace_all(const Expr& root, const Expr& target, const Expr& replacement, std::size_t* count) {
  if (root == target) {
    if (count) ++*count;
    return replacement;
  }
  if (root.children().empty()) return root;
  std::vector<Expr> kids;
  kids.reserve(root.children().size());
  for (const auto& c : root.children()) kids.push_back(replace_all(c, target, replacement, count));
  return with_children(root, std::move(kids));
}

std::vector<Edit> single_edits(const Expr& root) {
  std::vector<std::pair<std::vector<std::size_t>, Rewrite>> found;
  std::vector<std::size_t> path;
  collect(root, nullptr, path, found);

  std::vector<Edit> edits;
  std::unordered_set<std::string> seen{print(root)};
  for (const auto& [where, rw] : found) {
    Expr one = replace_at(root, where, 0, rw.replacement);
    if (seen.insert(print(one)).second) edits.push_back({one, rw.description, 1});
    std::size_t n = 0;
    Expr all = replace_all(root, rw.target, rw.replacement, &n);
    if (n > 1 && seen.insert(print(all)).second) {
      edits.push_back({all, rw.description + " (all " + std::to_string(n) + " copies)", n});
    }
  }
  return edits;
}

}  // namespace theta
