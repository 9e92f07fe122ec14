#include "attest/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "attest/suites.hpp"
#include "theta/cfrac.hpp"
#include "theta/identities.hpp"
#include "theta/params.hpp"
#include "theta/qseries.hpp"

namespace attest {

using namespace theta;
using Json = nlohmann::ordered_json;

namespace {

// Raised for configuration problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_digits() {
  const char* env = std::getenv("THETA_ATTEST_DIGITS");
  if (!env || !*env) return 50;
  try {
    std::size_t used = 0;
    int d = std::stoi(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return d;
  } catch (const std::exception&) {
    throw UsageError(std::string("THETA_ATTEST_DIGITS is not an integer: ") + env);
  }
}

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": not a rational number: " + text);
  }
}

Catalog load_catalog(const std::vector<std::string>& paths) {
  if (paths.empty()) return Catalog::builtin();
  Catalog c = Catalog::from_file(paths[0]);
  for (std::size_t i = 1; i < paths.size(); ++i) c.merge(Catalog::from_file(paths[i]));
  return c;
}

// Correct leading digits of `x` against the reference `ref`, capped at `cap`.
int agreement(const BigReal& x, const BigReal& ref, int cap) {
  BigReal d = abs(x - ref);
  if (d.is_zero()) return cap;
  double rel = d.log_abs() - abs(ref).log_abs();
  int digits = static_cast<int>(std::floor(-rel / std::log(10.0)));
  return std::clamp(digits, 0, cap);
}

std::string ms_text(double ms) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << ms;
  return s.str();
}

std::string format_ms(double ms) { return ms_text(ms) + " ms"; }

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::optional<int> digits;
  std::string filter = "*";
  int samples = 20;
  std::string q_min = "1/20";
  std::string q_max = "3/5";
  std::vector<std::string> catalogs;
  int rerun = 0;
  bool json = false;
  bool timing = false;
};

Json entry_json(const Entry& e, bool timing) {
  Json j;
  j["suite"] = e.suite;
  j["name"] = e.name;
  j["verdict"] = e.verdict;
  j["pass"] = e.pass;
  j["tolerance"] = e.tolerance;
  j["max_residual"] = e.max_residual ? Json(*e.max_residual) : Json(nullptr);
  if (e.printed_residual) j["printed_max_residual"] = *e.printed_residual;
  if (e.rerun_residual) j["rerun_max_residual"] = *e.rerun_residual;
  if (!e.correction.empty()) j["correction"] = e.correction;
  if (!e.details.empty()) j["details"] = e.details;
  if (!e.error.empty()) j["error"] = e.error;
  Json samples = Json::array();
  for (const auto& [q, r] : e.samples) samples.push_back({{"q", q}, {"residual", r}});
  j["samples"] = std::move(samples);
  if (timing) j["elapsed_ms"] = ms_text(e.elapsed_ms);
  return j;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  int digits = a.digits ? *a.digits : default_digits();
  if (digits < 20) throw UsageError("verify needs --digits >= 20 (got " + std::to_string(digits) + ")");
  cfg.prec = Precision(digits);
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  cfg.samples = a.samples;
  cfg.q_min = parse_rational(a.q_min, "--q-min");
  cfg.q_max = parse_rational(a.q_max, "--q-max");
  if (!(cfg.q_min > Rational(0)) || !(cfg.q_max < Rational(1)) || !(cfg.q_min < cfg.q_max)) {
    throw UsageError("sample window must satisfy 0 < q-min < q-max < 1");
  }
  cfg.filter = a.filter;
  if (a.rerun != 0 && a.rerun <= digits) throw UsageError("--rerun must exceed --digits");
  cfg.rerun_digits = a.rerun;

  Catalog catalog = load_catalog(a.catalogs);
  std::vector<Entry> entries = run_suites(catalog, cfg);
  if (entries.empty()) throw UsageError("no check matches --filter '" + a.filter + "'");

  std::size_t passed = 0, failed = 0;
  bool domain = false;
  for (const Entry& e : entries) {
    (e.pass ? passed : failed)++;
    if (!e.pass && e.domain_error) domain = true;
  }
  const std::string tol = sci(default_tolerance(cfg.prec));

  if (a.json) {
    Json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["digits"] = digits;
    j["tolerance"] = tol;
    j["samples"] = {{"count", cfg.samples}, {"q_min", cfg.q_min.to_string()}, {"q_max", cfg.q_max.to_string()}};
    j["filter"] = cfg.filter;
    j["catalogs"] = a.catalogs.empty() ? Json::array({"builtin"}) : Json(a.catalogs);
    if (cfg.rerun_digits) j["rerun_digits"] = cfg.rerun_digits;
    Json results = Json::array();
    for (const Entry& e : entries) results.push_back(entry_json(e, a.timing));
    j["results"] = std::move(results);
    j["summary"] = {{"passed", passed}, {"failed", failed}};
    out << j.dump(2) << "\n";
  } else {
    out << "verify: " << digits << " digits, " << cfg.samples << " samples in [" << cfg.q_min.to_string() << ", "
        << cfg.q_max.to_string() << "], tolerance " << tol << "\n";
    for (const Entry& e : entries) {
      out << std::left << std::setw(13) << e.suite << std::setw(18) << e.name << std::setw(14) << e.verdict
          << "max " << (e.max_residual ? *e.max_residual : std::string("n/a"));
      if (e.printed_residual) out << "  (as printed " << *e.printed_residual << ")";
      if (e.rerun_residual) out << "  rerun " << *e.rerun_residual;
      if (a.timing) out << "  " << format_ms(e.elapsed_ms);
      out << "\n";
      if (!e.correction.empty()) out << "    correction: " << e.correction << "\n";
      for (const std::string& d : e.details) out << "    " << d << "\n";
      if (!e.error.empty()) out << "    error: " << e.error << "\n";
    }
    out << "summary: " << passed << " passed, " << failed << " failed\n";
  }
  if (domain) {
    for (const Entry& e : entries) {
      if (!e.pass && e.domain_error) err << "domain error in " << e.name << ": " << e.error << "\n";
    }
    return kDomain;
  }
  return failed == 0 ? kPass : kFail;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::optional<int> digits;
  std::string function;
  std::string q, nome, b;
  std::string family, k, n;
  std::string expr;
  std::vector<std::string> catalogs;
};

Precision eval_precision(const EvalArgs& a) {
  int d = a.digits ? *a.digits : default_digits();
  if (d < 10) throw UsageError("--digits must be at least 10");
  return Precision(d);
}

BigReal nome_arg(const EvalArgs& a, const Precision& p, std::string* label) {
  if (!a.q.empty() && !a.nome.empty()) throw UsageError("give either --q or --nome");
  if (!a.nome.empty()) {
    Rational n = parse_rational(a.nome, "--nome");
    if (!(n > Rational(0))) throw UsageError("--nome must be positive");
    *label = "e^(-pi*sqrt(" + n.to_string() + "))";
    return ThetaPoint::nome(n).realize(p);
  }
  if (a.q.empty()) throw UsageError("missing --q or --nome");
  Rational q = parse_rational(a.q, "--q");
  *label = q.to_string();
  return BigReal(q, p);
}

int cmd_eval_theta(const EvalArgs& a, std::ostream& out) {
  Precision p = eval_precision(a);
  std::string label;
  BigReal q = nome_arg(a, p, &label);
  const std::string& f = a.function;
  BigReal v(p);
  std::string route;
  if (f == "phi") {
    v = theta_phi(q);
    route = "1 + 2 sum q^(n^2), " + std::to_string(phi_terms(q)) + " terms";
  } else if (f == "psi") {
    v = theta_psi(q);
    route = "sum q^(n(n+1)/2), " + std::to_string(psi_terms(q)) + " terms";
  } else if (f == "psim") {
    v = theta_psi(-q);
    route = "sum (-q)^(n(n+1)/2), " + std::to_string(psi_terms(-q)) + " terms";
  } else if (f == "fneg") {
    v = theta_fneg(q);
    route = "pentagonal series, " + std::to_string(fneg_terms(q)) + " terms; product agrees to " +
            std::to_string(agreement(euler_product(q), v, p.digits)) + " digits";
  } else if (f == "euler") {
    v = euler_product(q);
    route = "prod (1 - q^n), " + std::to_string(euler_terms(q)) + " factors";
  } else if (f == "general") {
    if (a.b.empty()) throw UsageError("general needs --b");
    BigReal b(parse_rational(a.b, "--b"), p);
    v = theta_general(q, b);
    route = "two-sided sum with a = q, b = " + a.b;
  } else {
    throw UsageError("unknown theta function '" + f + "' (phi, psi, psim, fneg, euler, general)");
  }
  out << f << "(" << label << ") = " << v.to_string(p.digits) << "\n";
  out << "  route: " << route << "\n";
  return kPass;
}

int cmd_eval_param(const EvalArgs& a, std::ostream& out) {
  Precision p = eval_precision(a);
  Family fam;
  try {
    fam = parse_family(a.family);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown family '" + a.family + "' (h, h', l, l')");
  }
  ParamSpec spec{fam, parse_rational(a.k, "k"), parse_rational(a.n, "n")};
  if (!(spec.k > Rational(0)) || !(spec.n > Rational(0))) throw UsageError("k and n must be positive");
  BigReal v = eval_param(spec, p);
  out << spec.to_string() << " = " << v.to_string(p.digits) << "\n";
  out << "  route: theta quotient at e^(-pi*sqrt(" << (spec.n / spec.k).to_string() << ")) and e^(-pi*sqrt("
      << (spec.n * spec.k).to_string() << "))\n";
  Catalog cat = load_catalog(a.catalogs);
  EvalContext k = cat.constants(p);
  for (const ClosedFormRecord& r : cat.closed_forms) {
    if (!(r.spec == spec)) continue;
    ValueCheck c = verify_closed_form(r, k, p);
    BigReal closed = eval(c.effective, k);
    out << "  closed form " << r.name() << " [" << verdict_name(c.verdict) << "] = " << closed.to_string(p.digits)
        << "\n  agreement: " << agreement(closed, v, p.digits) << " digits\n";
    if (!c.correction.empty()) out << "  correction: " << c.correction << "\n";
  }
  return kPass;
}

int cmd_eval_cf(const EvalArgs& a, std::ostream& out) {
  Precision p = eval_precision(a);
  std::optional<Rational> n;
  std::string label;
  BigReal q(p);
  if (!a.n.empty()) {
    if (!a.q.empty()) throw UsageError("give either --n or --q");
    n = parse_rational(a.n, "--n");
    if (!(*n > Rational(0))) throw UsageError("--n must be positive");
    label = "e^(-pi*sqrt(" + n->to_string() + "))";
    q = ThetaPoint::nome(*n).realize(p);
  } else {
    EvalArgs b = a;
    q = nome_arg(b, p, &label);
  }
  if (!(q > 0L) || !(q < 1L)) throw DomainError("H(q) needs 0 < q < 1");
  BigReal theta = H_theta(q);
  out << "H(" << label << ") = " << theta.to_string(p.digits) << "\n";
  out << "  theta quotient  " << theta.to_string(p.digits) << "\n";
  auto route = [&](const std::string& name, const BigReal& v) {
    out << "  " << std::left << std::setw(16) << name << v.to_string(p.digits) << "  agrees to "
        << agreement(v, theta, p.digits) << " digits\n";
  };
  route("product", H_product(q));
  if (in_prefix_window(q)) {
    route("cf prefix", H_cf_prefix(q));
  } else {
    out << "  cf prefix       not used: q > 0.15\n";
  }
  if (n) {
    route("via h(3," + (Rational(3) * *n).to_string() + ")", H_from_param(*n, p));
    Catalog cat = load_catalog(a.catalogs);
    EvalContext k = cat.constants(p);
    for (const TableRecord& r : cat.table) {
      if (!(r.n == *n)) continue;
      auto evaluate = [&](const Expr& e) { return eval(e, k); };
      ValueCheck c = adjudicate_value(r.name(), r.expr, r.erratum, evaluate, theta, default_tolerance(p));
      route("table", eval(c.effective, k));
      if (!c.correction.empty()) out << "  correction: " << c.correction << "\n";
    }
  }
  return kPass;
}

int cmd_eval_expr(const EvalArgs& a, std::ostream& out) {
  Precision p = eval_precision(a);
  Catalog cat = load_catalog(a.catalogs);
  ParseOptions opt;
  for (const LetBinding& l : cat.lets) opt.extra_symbols.insert(l.name);
  Expr e = parse(a.expr, opt);
  BigReal v = eval(e, cat.constants(p));
  out << print(e) << " = " << v.to_string(p.digits) << "\n";
  return kPass;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::optional<int> digits;
  std::vector<std::string> catalogs;
  bool json = false;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
  int digits = a.digits ? *a.digits : default_digits();
  if (digits < 20) throw UsageError("table needs --digits >= 20 (got " + std::to_string(digits) + ")");
  Precision p(digits);
  Catalog cat = load_catalog(a.catalogs);
  if (cat.table.empty()) throw UsageError("catalog has no H rows");
  std::vector<TableRow> rows = verify_table(cat, p);
  const BigReal bridge_tol = pow10(8 - digits, p);
  bool ok = true;
  struct Line {
    std::string n, verdict, closed, series, delta, bridge, correction;
    bool pass;
  };
  std::vector<Line> lines;
  for (const TableRow& r : rows) {
    bool pass = r.check.pass() && r.bridge_residual < bridge_tol;
    ok = ok && pass;
    lines.push_back({r.n.to_string(), std::string(verdict_name(r.check.verdict)), r.closed.to_string(digits),
                     r.series.to_string(digits), sci(r.delta), sci(r.bridge_residual), r.check.correction, pass});
  }
  if (a.json) {
    Json j;
    j["schema"] = 1;
    j["command"] = "table";
    j["digits"] = digits;
    j["tolerance"] = sci(default_tolerance(p));
    Json arr = Json::array();
    for (const Line& l : lines) {
      Json row;
      row["n"] = l.n;
      row["closed"] = l.closed;
      row["series"] = l.series;
      row["delta"] = l.delta;
      row["bridge_residual"] = l.bridge;
      row["verdict"] = l.verdict;
      row["pass"] = l.pass;
      if (!l.correction.empty()) row["correction"] = l.correction;
      arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    out << j.dump(2) << "\n";
  } else {
    out << "H(e^(-pi*sqrt(n))) at " << digits << " digits, tolerance " << sci(default_tolerance(p)) << "\n";
    for (const Line& l : lines) {
      out << "n = " << l.n << "  [" << l.verdict << "]\n";
      out << "  closed  " << l.closed << "\n";
      out << "  series  " << l.series << "\n";
      out << "  |delta| " << l.delta << "\n";
      out << "  bridge  " << l.bridge << "\n";
      if (!l.correction.empty()) out << "  correction: " << l.correction << "\n";
    }
  }
  return ok ? kPass : kFail;
}

void render_parse_error(std::ostream& err, const ParseError& e, const std::string& input) {
  err << "parse error " << e.what() << "\n  " << input << "\n  " << std::string(e.position(), ' ') << "^\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Numerical verification of theta-function identities and evaluations", "theta_attest"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "verify identities, parameter values and the H table");
  verify->add_option("--filter", va.filter, "glob over check names");
  verify->add_option("--digits", va.digits, "decimal digits (>= 20)");
  verify->add_option("--samples", va.samples, "number of sample nomes");
  verify->add_option("--q-min", va.q_min, "smallest sample nome");
  verify->add_option("--q-max", va.q_max, "largest sample nome");
  verify->add_option("--catalog", va.catalogs, "catalog file replacing the built-in one (repeatable)");
  verify->add_option("--rerun", va.rerun, "re-verify accepted records at this precision");
  verify->add_flag("--json", va.json, "machine-readable report");
  verify->add_flag("--timing", va.timing, "include per-check timings");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "evaluate a single quantity");
  ev->require_subcommand(1);
  auto* ev_theta = ev->add_subcommand("theta", "phi, psi, psim, fneg, euler or general at a nome");
  ev_theta->add_option("function", ea.function)->required();
  ev_theta->add_option("--q", ea.q, "nome as a rational or decimal");
  ev_theta->add_option("--nome", ea.nome, "use q = e^(-pi sqrt(N))");
  ev_theta->add_option("--b", ea.b, "second argument of the general theta function");
  auto* ev_param = ev->add_subcommand("param", "h, h', l or l' at (k, n)");
  ev_param->add_option("family", ea.family)->required();
  ev_param->add_option("k", ea.k)->required();
  ev_param->add_option("n", ea.n)->required();
  auto* ev_cf = ev->add_subcommand("cf", "the order-12 continued fraction H by every route");
  ev_cf->add_option("--n", ea.n, "evaluate at q = e^(-pi sqrt(n))");
  ev_cf->add_option("--q", ea.q, "evaluate at a literal nome");
  auto* ev_expr = ev->add_subcommand("expr", "a constant expression in the catalog DSL");
  ev_expr->add_option("expression", ea.expr)->required();
  for (auto* sc : {ev_theta, ev_param, ev_cf, ev_expr}) {
    sc->add_option("--digits", ea.digits, "decimal digits");
    if (sc != ev_theta) sc->add_option("--catalog", ea.catalogs, "catalog file (repeatable)");
  }

  TableArgs ta;
  auto* table = app.add_subcommand("table", "reproduce the H table");
  table->add_option("--digits", ta.digits, "decimal digits (>= 20)");
  table->add_option("--catalog", ta.catalogs, "catalog file (repeatable)");
  table->add_flag("--json", ta.json, "machine-readable output");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (argc <= 1) err << app.help();
    return kUsage;
  }

  int rc = kPass;
  try {
    if (*verify) {
      rc = cmd_verify(va, out, err);
    } else if (*ev_theta) {
      rc = cmd_eval_theta(ea, out);
    } else if (*ev_param) {
      rc = cmd_eval_param(ea, out);
    } else if (*ev_cf) {
      rc = cmd_eval_cf(ea, out);
    } else if (*ev_expr) {
      try {
        rc = cmd_eval_expr(ea, out);
      } catch (const ParseError& e) {
        render_parse_error(err, e, ea.expr);
        return kUsage;
      }
    } else if (*table) {
      rc = cmd_table(ta, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CatalogError& e) {
    err << "catalog error: " << e.what() << "\n";
    return kUsage;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << "elapsed " << std::fixed << std::setprecision(2) << secs << " s\n";
  return rc;
}

}  // namespace attest
