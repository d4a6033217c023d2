#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "condreg/cover.h"
#include "condreg/list_regression.h"

namespace condreg {

struct RunConfig {
  long k = 2;
  double mu = 0.25;
  double gamma = 0.1;
  double delta = 0.1;
  std::optional<double> epsilon;  // defaults to gamma / t_est
  double s0 = 1.0;
  double t_est = 4.0;
  double kappa = 0.0;
  double r_init = 10.0;
  double r_final = 0.1;
  double tol = 1e-6;
  double c_q = 8.0;
  double c_rho = 1.0;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  bool verbose = false;

  double effective_epsilon() const { return epsilon ? *epsilon : gamma / t_est; }
  int effective_threads() const;
  // Throws ParameterError.
  void validate() const;
};

struct CandidateRecord {
  CandidateSolution solution;
  std::string status;  // "ok", "partial_cover" or "empty"
  std::string message;
  std::vector<long> terms;  // enumeration indices of chosen terms
};

struct Report {
  RunConfig config;
  long N = 0, n = 0, d = 0;
  long num_terms = 0;
  long num_terms_kept = 0;
  long n_prime = 0;
  double lambda = 0.0;
  std::vector<CandidateRecord> candidates;
  std::optional<long> selected;
  std::string selection_error;
  double best_coverage = 0.0;
  ListRegressionResult list;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timing_ms;
  // JSON-lines trace, filled only when config.verbose.
  std::vector<nlohmann::json> trace;
};

// Whole pipeline. Selection failure is recorded in the report, not thrown.
Report run_fit(const Dataset& data, const RunConfig& config,
               const SoftRunObserver& observer = {});

nlohmann::json to_json(const Report& report);
nlohmann::json to_json(const RunConfig& config);
// Applies every recognised key of `j` onto `config`; unknown keys are a ParameterError.
void apply_json(RunConfig& config, const nlohmann::json& j);

}  // namespace condreg
