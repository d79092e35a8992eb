#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellspin/types.hpp"

namespace ellspin {

enum class Suite { Elliptic, Rmatrix, Chain, Qmbs, Limits, All };

std::optional<Suite> parse_suite(const std::string& s);
std::string suite_name(Suite s);

// Values that replace the randomly drawn ones. A check that sweeps a
// parameter (eta in the isotropic limit, kappa in the short-range limit, ...)
// keeps its own values for that parameter.
struct Overrides {
  std::optional<int> N;
  std::optional<double> kappa;
  std::optional<cplx> eta;
  std::optional<cplx> a;
  std::optional<double> gamma;
  std::optional<cplx> a_prime;
  int draws = 20;
  int jobs = 1;
};

struct CheckResult {
  std::string name;
  double residual = 0;  // NaN when the check could not be evaluated
  double tolerance = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  nlohmann::json params_used;
  std::int64_t runtime_ms = 0;
  std::string status;  // ok, fail, precondition_violation, error
};

// Names of every registered check, in report order.
std::vector<std::string> registry_names();
std::vector<std::string> suite_checks(Suite s);

// Deterministic given seed and overrides; results follow registry order
// whatever the number of jobs.
std::vector<CheckResult> run_suite(Suite s, std::uint64_t seed, const Overrides& ov = {});

nlohmann::json to_json(const CheckResult& r);
nlohmann::json report_json(const std::vector<CheckResult>& results);

}  // namespace ellspin
