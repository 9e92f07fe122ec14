#include "theta/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace theta {

// ---------------------------------------------------------------- ParamSpec

std::string_view family_name(Family f) {
  switch (f) {
    case Family::H:
      return "h";
    case Family::HPrime:
      return "h'";
    case Family::L:
      return "l";
    case Family::LPrime:
      return "l'";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "h") return Family::H;
  if (text == "h'") return Family::HPrime;
  if (text == "l") return Family::L;
  if (text == "l'") return Family::LPrime;
  throw std::invalid_argument("unknown parameter family '" + std::string(text) + "'");
}

std::string ParamSpec::to_string() const {
  return std::string(family_name(family)) + "(" + k.to_string() + "," + n.to_string() + ")";
}

// ---------------------------------------------------------------- errors

namespace {

std::string render(const std::string& source, int line, int column, const std::string& message,
                   std::string_view line_text) {
  std::ostringstream os;
  os << source << ":" << line << ":" << column << ": " << message << "\n  " << line_text << "\n  "
     << std::string(static_cast<std::size_t>(std::max(column - 1, 0)), ' ') << "^";
  return os.str();
}

}  // namespace

CatalogError::CatalogError(std::string source, int line, int column, const std::string& message,
                           std::string_view line_text)
    : std::runtime_error(render(source, line, column, message, line_text)),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------- parsing

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// One record after joining continuation lines with '\n'.
struct Record {
  std::string text;
  int first_line = 0;
  std::vector<std::size_t> starts;  // offset of each physical line within text
  std::vector<std::string> lines;
};

struct Field {
  std::size_t offset;   // within the record text
  std::string_view text;
};

class RecordParser {
 public:
  RecordParser(const std::string& source, Catalog& out, std::set<std::string, std::less<>>& lets)
      : source_(source), out_(out), lets_(lets) {}

  void run(const Record& r) {
    rec_ = &r;
    std::string_view all(r.text);
    Field whole{0, all};
    auto [head, rest] = split_word(whole);
    if (head.text == "let") {
      let_line(rest);
    } else if (head.text == "identity") {
      identity_line(rest);
    } else if (head.text == "factored") {
      factored_line(rest);
    } else if (head.text == "intermediate") {
      intermediate_line(rest, false);
    } else if (head.text == "H") {
      table_line(rest, false);
    } else if (head.text == "erratum") {
      erratum_line(rest);
    } else if (is_family(head.text)) {
      closed_form_line(head, rest, false);
    } else {
      fail(head.offset, "unknown record kind '" + std::string(head.text) + "'");
    }
  }

  // Errata refer to records that may appear later in the file.
  struct PendingErratum {
    std::string kind;  // "closed", "intermediate", "table"
    ParamSpec spec;
    std::string name;
    Rational n;
    Expr expr;
    int line;
    std::size_t offset;
    const Record* record;
  };
  std::vector<PendingErratum> pending;

  [[noreturn]] void fail_in(const Record& r, std::size_t offset, const std::string& message) const {
    std::size_t idx = 0;
    while (idx + 1 < r.starts.size() && r.starts[idx + 1] <= offset) ++idx;
    const int col = static_cast<int>(offset - r.starts[idx]) + 1;
    throw CatalogError(source_, r.first_line + static_cast<int>(idx), col, message, r.lines[idx]);
  }

 private:
  [[noreturn]] void fail(std::size_t offset, const std::string& message) const { fail_in(*rec_, offset, message); }

  static bool is_family(std::string_view w) { return w == "h" || w == "h'" || w == "l" || w == "l'"; }

  static Field trim(Field f) {
    while (!f.text.empty() && is_space(f.text.front())) {
      f.text.remove_prefix(1);
      ++f.offset;
    }
    while (!f.text.empty() && is_space(f.text.back())) f.text.remove_suffix(1);
    return f;
  }

  // First whitespace-delimited word and the remainder.
  static std::pair<Field, Field> split_word(Field f) {
    f = trim(f);
    std::size_t i = 0;
    while (i < f.text.size() && !is_space(f.text[i])) ++i;
    return {Field{f.offset, f.text.substr(0, i)}, trim(Field{f.offset + i, f.text.substr(i)})};
  }

  static std::vector<Field> split(Field f, char sep) {
    std::vector<Field> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= f.text.size(); ++i) {
      if (i == f.text.size() || f.text[i] == sep) {
        parts.push_back(trim(Field{f.offset + start, f.text.substr(start, i - start)}));
        start = i + 1;
      }
    }
    return parts;
  }

  // "LEFT <sep> RIGHT" at the first occurrence of sep.
  std::pair<Field, Field> split_once(Field f, char sep, const char* what) const {
    auto at = f.text.find(sep);
    if (at == std::string_view::npos) fail(f.offset + f.text.size(), std::string("expected '") + sep + "' " + what);
    return {trim(Field{f.offset, f.text.substr(0, at)}), trim(Field{f.offset + at + 1, f.text.substr(at + 1)})};
  }

  Expr expr(Field f, SymbolPolicy policy) const {
    ParseOptions o;
    o.policy = policy;
    if (policy == SymbolPolicy::ConstantsOnly) o.extra_symbols = lets_;
    try {
      return theta::parse(f.text, o);
    } catch (const ParseError& e) {
      fail(f.offset + e.position(), "expected " + e.expected() + " but found " + e.found());
    }
  }

  std::string name(Field f) const {
    if (f.text.empty()) fail(f.offset, "expected a record name");
    for (char c : f.text) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.')) {
        fail(f.offset, "invalid record name '" + std::string(f.text) + "'");
      }
    }
    return std::string(f.text);
  }

  Rational positive_rational(Field f) const {
    try {
      Rational r = Rational::parse(f.text);
      if (r.sign() > 0) return r;
    } catch (const std::exception&) {
    }
    fail(f.offset, "expected a positive rational, found '" + std::string(f.text) + "'");
  }

  ParamSpec param(Field f) const {
    auto [fam, rest] = split_word(f);
    if (!is_family(fam.text)) fail(fam.offset, "expected h, h', l or l'");
    auto [k, rest2] = split_word(rest);
    auto [n, extra] = split_word(rest2);
    if (!extra.text.empty()) fail(extra.offset, "unexpected text after parameter");
    return {parse_family(fam.text), positive_rational(k), positive_rational(n)};
  }

  std::string_view key_of(Field lhs) const { return lhs.text; }

  void let_line(Field rest) {
    auto [lhs, rhs] = split_once(rest, '=', "after let name");
    std::string nm = name(lhs);
    if (lets_.count(nm)) fail(lhs.offset, "duplicate let binding '" + nm + "'");
    Expr e = expr(rhs, SymbolPolicy::ConstantsOnly);
    lets_.insert(nm);
    out_.lets.push_back({nm, e, rec_->first_line});
  }

  struct Defs {
    std::optional<Expr> p, q, relation;
    std::vector<Expr> factors;
    std::optional<std::size_t> vanishing;
  };

  Defs fields(Field body, bool factored) const {
    Defs d;
    for (const Field& part : split(body, ';')) {
      auto [lhs, rhs] = split_once(part, '=', "in field");
      const std::string_view key = key_of(lhs);
      if (key == "P") {
        d.p = expr(rhs, SymbolPolicy::ThetaFuncs);
      } else if (key == "Q") {
        d.q = expr(rhs, SymbolPolicy::ThetaFuncs);
      } else if (key == "relation" && !factored) {
        d.relation = expr(rhs, SymbolPolicy::IdentityVars);
      } else if (key == "factors" && factored) {
        for (const Field& f : split(rhs, '|')) d.factors.push_back(expr(f, SymbolPolicy::IdentityVars));
      } else if (key == "vanishing" && factored) {
        Rational r = positive_rational(rhs);
        if (!r.is_integer()) fail(rhs.offset, "vanishing index must be an integer");
        d.vanishing = static_cast<std::size_t>(r.num());
      } else {
        fail(lhs.offset, "unknown field '" + std::string(key) + "'");
      }
    }
    return d;
  }

  void identity_line(Field rest) {
    auto [head, body] = split_once(rest, ':', "after identity name");
    std::string nm = name(head);
    Defs d = fields(body, false);
    if (!d.p || !d.q || !d.relation) fail(body.offset, "identity needs P, Q and relation");
    out_.identities.push_back({nm, *d.p, *d.q, *d.relation, rec_->first_line});
  }

  void factored_line(Field rest) {
    auto [head, body] = split_once(rest, ':', "after record name");
    std::string nm = name(head);
    Defs d = fields(body, true);
    if (!d.p || !d.q || d.factors.empty() || !d.vanishing) {
      fail(body.offset, "factored record needs P, Q, factors and vanishing");
    }
    if (*d.vanishing < 1 || *d.vanishing > d.factors.size()) fail(body.offset, "vanishing index out of range");
    out_.factored.push_back({nm, *d.p, *d.q, d.factors, *d.vanishing - 1, rec_->first_line});
  }

  void closed_form_line(Field family, Field rest, bool erratum) {
    auto [lhs, rhs] = split_once(rest, '=', "after parameter");
    std::string label;
    Field spec_part = lhs;
    if (auto open = lhs.text.find('['); open != std::string_view::npos) {
      auto close = lhs.text.find(']', open);
      if (close == std::string_view::npos) fail(lhs.offset + open, "unterminated label");
      label = std::string(trim(Field{0, lhs.text.substr(open + 1, close - open - 1)}).text);
      if (!trim(Field{0, lhs.text.substr(close + 1)}).text.empty()) fail(lhs.offset + close + 1, "text after label");
      spec_part = trim(Field{lhs.offset, lhs.text.substr(0, open)});
    }
    const std::string spec_text = std::string(family.text) + " " + std::string(spec_part.text);
    auto [k, rest2] = split_word(spec_part);
    auto [n, extra] = split_word(rest2);
    if (!extra.text.empty()) fail(extra.offset, "unexpected text after parameter");
    ParamSpec spec{parse_family(family.text), positive_rational(k), positive_rational(n)};
    Expr e = expr(rhs, SymbolPolicy::ConstantsOnly);
    if (erratum) {
      if (!label.empty()) fail(lhs.offset, "erratum lines carry no label");
      pending.push_back({"closed", spec, {}, {}, e, rec_->first_line, family.offset, rec_});
      return;
    }
    out_.closed_forms.push_back({spec, label, e, std::nullopt, rec_->first_line});
  }

  void intermediate_line(Field rest, bool erratum) {
    if (erratum) {
      auto [lhs, rhs] = split_once(rest, '=', "after intermediate name");
      pending.push_back({"intermediate", {}, name(lhs), {}, expr(rhs, SymbolPolicy::ConstantsOnly),
                         rec_->first_line, lhs.offset, rec_});
      return;
    }
    auto [head, body] = split_once(rest, ':', "after intermediate name");
    auto [product, rhs] = split_once(body, '=', "after product");
    auto [left, right] = split_once(product, '*', "between the two parameters");
    out_.intermediates.push_back(
        {name(head), param(left), param(right), expr(rhs, SymbolPolicy::ConstantsOnly), std::nullopt, rec_->first_line});
  }

  void table_line(Field rest, bool erratum) {
    auto [lhs, rhs] = split_once(rest, '=', "after table argument");
    Rational n = positive_rational(lhs);
    Expr e = expr(rhs, SymbolPolicy::ConstantsOnly);
    if (erratum) {
      pending.push_back({"table", {}, {}, n, e, rec_->first_line, lhs.offset, rec_});
      return;
    }
    out_.table.push_back({n, e, std::nullopt, rec_->first_line});
  }

  void erratum_line(Field rest) {
    auto [head, body] = split_word(rest);
    if (head.text == "identity") {
      auto [nm, defs] = split_once(body, ':', "after identity name");
      Defs d = fields(defs, false);
      out_.identity_errata.push_back({name(nm), d.p, d.q, d.relation, rec_->first_line});
    } else if (head.text == "intermediate") {
      intermediate_line(body, true);
    } else if (head.text == "H") {
      table_line(body, true);
    } else if (is_family(head.text)) {
      closed_form_line(head, body, true);
    } else {
      fail(head.offset, "erratum must name an identity, closed form, intermediate or table row");
    }
  }

  const std::string& source_;
  Catalog& out_;
  std::set<std::string, std::less<>>& lets_;
  const Record* rec_ = nullptr;
};

std::vector<Record> split_records(std::string_view text, const std::string& source) {
  std::vector<Record> out;
  bool open = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = line;
    if (auto hash = body.find('#'); hash != std::string::npos) body.replace(hash, std::string::npos, "");
    const bool blank = std::all_of(body.begin(), body.end(), is_space);
    if (blank) {
      open = false;
    } else if (is_space(body.front())) {
      if (!open) throw CatalogError(source, line_no, 1, "continuation line without a record", line);
      Record& r = out.back();
      r.text += '\n';
      r.starts.push_back(r.text.size());
      r.text += body;
      r.lines.push_back(line);
    } else {
      out.push_back(Record{body, line_no, {0}, {line}});
      open = true;
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

void check_unique_names(const Catalog& c, const std::string& source) {
  std::set<std::string> seen;
  auto add = [&](const std::string& n, int line) {
    if (!seen.insert(n).second) throw CatalogError(source, line, 1, "duplicate record name '" + n + "'", "");
  };
  for (const auto& r : c.identities) add(r.name, r.line);
  for (const auto& r : c.factored) add(r.name, r.line);
  for (const auto& r : c.closed_forms) add(r.name(), r.line);
  for (const auto& r : c.intermediates) add(r.name, r.line);
  for (const auto& r : c.table) add(r.name(), r.line);
}

}  // namespace

Catalog Catalog::parse(std::string_view text, const std::string& source) {
  Catalog out;
  std::set<std::string, std::less<>> lets;
  RecordParser rp(source, out, lets);
  std::vector<Record> records = split_records(text, source);
  for (const Record& r : records) rp.run(r);

  for (const auto& p : rp.pending) {
    std::optional<Expr>* slot = nullptr;
    if (p.kind == "closed") {
      for (auto& c : out.closed_forms) {
        if (c.spec == p.spec) slot = &c.erratum;
      }
    } else if (p.kind == "intermediate") {
      for (auto& c : out.intermediates) {
        if (c.name == p.name) slot = &c.erratum;
      }
    } else {
      for (auto& c : out.table) {
        if (c.n == p.n) slot = &c.erratum;
      }
    }
    if (!slot) rp.fail_in(*p.record, p.offset, "erratum does not match any record");
    if (slot->has_value()) rp.fail_in(*p.record, p.offset, "second erratum for the same record");
    *slot = p.expr;
  }
  for (const auto& e : out.identity_errata) {
    bool found = std::any_of(out.identities.begin(), out.identities.end(),
                             [&](const IdentityRecord& r) { return r.name == e.name; });
    if (!found) throw CatalogError(source, e.line, 1, "erratum for unknown identity '" + e.name + "'", "");
  }
  check_unique_names(out, source);
  return out;
}

Catalog Catalog::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError(path, 0, 0, "cannot open catalog file", "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Catalog Catalog::builtin() {
  Catalog c = parse(builtin_identities_text(), "identities.cat");
  c.merge(parse(builtin_closed_forms_text(), "closed_forms.cat"));
  c.merge(parse(builtin_table_text(), "h_table.cat"));
  return c;
}

void Catalog::merge(Catalog other) {
  auto move_all = [](auto& dst, auto& src) {
    for (auto& x : src) dst.push_back(std::move(x));
  };
  for (const auto& l : other.lets) {
    for (const auto& mine : lets) {
      if (mine.name == l.name) throw CatalogError("<merge>", l.line, 1, "duplicate let binding '" + l.name + "'", "");
    }
  }
  move_all(lets, other.lets);
  move_all(identities, other.identities);
  move_all(identity_errata, other.identity_errata);
  move_all(factored, other.factored);
  move_all(closed_forms, other.closed_forms);
  move_all(intermediates, other.intermediates);
  move_all(table, other.table);
  check_unique_names(*this, "<merge>");
}

const IdentityErratum* Catalog::erratum_for(std::string_view identity) const {
  for (const auto& e : identity_errata) {
    if (e.name == identity) return &e;
  }
  return nullptr;
}

EvalContext Catalog::constants(const Precision& prec) const {
  EvalContext ctx{prec, {}, {}};
  for (const auto& l : lets) ctx.bindings.insert_or_assign(l.name, eval(l.expr, ctx));
  return ctx;
}

}  // namespace theta
