#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "theta/param_spec.hpp"
#include "theta/radexpr.hpp"

namespace theta {

// A malformed catalog line. The message carries source:line:column, the
// offending line and a caret under the first bad byte.
class CatalogError : public std::runtime_error {
 public:
  CatalogError(std::string source, int line, int column, const std::string& message, std::string_view line_text);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

struct LetBinding {
  std::string name;
  Expr expr;
  int line = 0;
};

struct IdentityRecord {
  std::string name;
  Expr p_def;
  Expr q_def;
  Expr relation;
  int line = 0;
};

// Replacement fields for an identity; absent fields keep the original.
struct IdentityErratum {
  std::string name;
  std::optional<Expr> p_def;
  std::optional<Expr> q_def;
  std::optional<Expr> relation;
  int line = 0;
};

struct FactoredRecord {
  std::string name;
  Expr p_def;
  Expr q_def;
  std::vector<Expr> factors;
  std::size_t vanishing_index = 0;  // zero-based
  int line = 0;
};

struct ClosedFormRecord {
  ParamSpec spec;
  std::string label;
  Expr expr;
  std::optional<Expr> erratum;
  int line = 0;

  // label when present, otherwise the parameter, e.g. "l(3,7/5)"
  std::string name() const { return label.empty() ? spec.to_string() : label; }
};

struct IntermediateRecord {
  std::string name;
  ParamSpec left;
  ParamSpec right;
  Expr expr;
  std::optional<Expr> erratum;
  int line = 0;
};

struct TableRecord {
  Rational n;
  Expr expr;
  std::optional<Expr> erratum;
  int line = 0;

  std::string name() const { return "H(" + n.to_string() + ")"; }
};

struct Catalog {
  std::vector<LetBinding> lets;
  std::vector<IdentityRecord> identities;
  std::vector<IdentityErratum> identity_errata;
  std::vector<FactoredRecord> factored;
  std::vector<ClosedFormRecord> closed_forms;
  std::vector<IntermediateRecord> intermediates;
  std::vector<TableRecord> table;

  static Catalog parse(std::string_view text, const std::string& source = "<catalog>");
  static Catalog from_file(const std::string& path);
  // The three catalogs compiled into the library.
  static Catalog builtin();

  // Appends every record of `other`; names must stay unique.
  void merge(Catalog other);

  const IdentityErratum* erratum_for(std::string_view identity) const;
  // Values of all `let` bindings at the given precision.
  EvalContext constants(const Precision& prec) const;
};

std::string_view builtin_identities_text();
std::string_view builtin_closed_forms_text();
std::string_view builtin_table_text();

}  // namespace theta
