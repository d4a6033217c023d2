#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "condreg/soft_regression.h"

namespace condreg {

struct ListRegressionParams {
  double mu = 0.25;
  long num_points = 0;     // raw N
  double s0 = 1.0;         // S = s0 * radius for every soft-regression call
  double epsilon = 0.025;
  double delta = 0.1;
  double r_init = 10.0;
  double r_final = 0.1;
  double gamma = 0.1;
  double t_est = 4.0;
  double c_q = 8.0;
  double c_rho = 1.0;
  double delta_pd = 0.125;
  SdpOptions sdp;
  double qp_tol = 1e-9;
  int threads = 1;
};

// Called once per finished soft-regression run (possibly from worker threads).
struct SoftRunInfo {
  int outer_iteration = 0;    // 0 for the initial run
  long decomposition = -1;
  std::vector<long> terms;    // indices into the loss list
  Vector origin;
  double radius = 0.0;
  bool completed = true;      // false if the trace bound was never reached
  const SoftRegressionState* state = nullptr;
};
using SoftRunObserver = std::function<void(const SoftRunInfo&)>;

struct OuterIteration {
  int iteration = 0;
  double radius = 0.0;
  long num_decompositions = 0;
  double rho = 0.0;
  long assigned_before = 0;
  long assigned_after = 0;
  std::vector<long> clusters_per_h;
  long incomplete_runs = 0;
};

struct ListRegressionResult {
  std::vector<Vector> candidates;
  std::vector<std::optional<Vector>> w_hat;  // nullopt = unassigned
  int iterations = 0;
  std::vector<double> radius_schedule;
  std::vector<OuterIteration> trace;
  std::vector<std::string> warnings;
};

ListRegressionResult run_list_regression(const std::vector<QuadLoss>& losses,
                                         const std::vector<long>& sizes,
                                         const ListRegressionParams& params, std::uint64_t seed,
                                         const SoftRunObserver& observer = {});

// Smallest h0 whose vector is within r_ell/3 of at least half the assigned
// entries; -1 if none.
long select_h0(const std::vector<std::optional<Vector>>& w_bars, double r_ell);

// Greedy scan over assigned w_hat in term order. u = w_hat_i is accepted when
// the ball B(u, 2 r_final) holds weight >= (1-eps) mu mass and u is farther
// than 4 r_final from every accepted center.
std::vector<Vector> extract_candidates(const std::vector<std::optional<Vector>>& w_hat,
                                       const std::vector<long>& sizes, double r_final,
                                       double epsilon, double mu, double mass);

// splitmix64-style mix; used to derive per-decomposition seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace condreg
