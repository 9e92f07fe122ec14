#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "theta/catalog.hpp"
#include "theta/mp.hpp"

namespace attest {

struct SuiteConfig {
  theta::Precision prec{50};
  int samples = 20;
  theta::Rational q_min{1, 20};
  theta::Rational q_max{3, 5};
  std::string filter = "*";
  int rerun_digits = 0;  // 0: no rerun
};

// One line of a verification report.
struct Entry {
  std::string suite;
  std::string name;
  std::string verdict;  // verified, corrected, erratum, reconstructed, failed
  bool pass = false;
  std::string tolerance;
  std::optional<std::string> max_residual;
  std::optional<std::string> printed_residual;  // set when the record needed a correction
  std::optional<std::string> rerun_residual;
  std::string correction;
  std::vector<std::string> details;
  std::vector<std::pair<std::string, std::string>> samples;  // q, residual or error
  std::string error;                                         // first evaluation error
  bool domain_error = false;
  double elapsed_ms = 0;
};

bool name_matches(const std::string& glob, const std::string& name);

// Every suite, in a fixed order; entries whose name misses the filter are skipped.
std::vector<Entry> run_suites(const theta::Catalog& catalog, const SuiteConfig& config);

std::string sci(const theta::BigReal& x);

}  // namespace attest
