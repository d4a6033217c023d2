#pragma once

#include <functional>
#include <vector>

#include "condreg/solver.h"

namespace condreg {

struct SoftRegressionConfig {
  double mu = 1.0;
  long num_points = 0;   // raw N used in lambda
  double muN = 0.0;      // good mass used for the neighbor box caps
  double t_est = 1.0;
  SdpOptions sdp;
  double qp_tol = 1e-9;
  int max_iter = -1;     // < 0 means m + 10
  int threads = 1;
};

struct SoftIteration {
  int iteration = 0;
  Vector c;              // weights the SDP was solved with
  double trace = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool sdp_converged = true;
  int sdp_iterations = 0;
  double min_block_eig = 0.0;
  long nonzero = 0;
  bool bound_met = false;
  // Filled when a weight update followed this solve.
  bool updated = false;
  Vector z;
  Vector c_next;
};

struct SoftRegressionState {
  Vector c;
  std::vector<Vector> w_hat;
  Matrix Y;
  int iteration = 0;
  double lambda = 0.0;
  double trace_bound = 0.0;
  std::vector<SoftIteration> history;
  std::vector<std::string> warnings;
};

class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, SoftRegressionState state)
      : Error(what), state_(std::move(state)) {}
  const SoftRegressionState& state() const { return state_; }

 private:
  SoftRegressionState state_;
};

// lambda = sqrt(8 mu) N t S / r
double soft_lambda(double mu, long N, double t_est, double S, double r);

struct WeightUpdate {
  Vector c;
  Vector z;
  double z_max = 0.0;
  bool applied = false;
};

// c_i <- c_i (z_max - z_i)/z_max with z_max over nonzero c; argmax set to 0.
// No-op (applied = false) when z_max <= 0.
WeightUpdate reweight(const Vector& c, const Vector& z);

// Neighbor QP per term gives z_i = f_i(w~_i) - f_i(w^_i), then reweight.
WeightUpdate update_weights(const Vector& c, const std::vector<Vector>& w_hat,
                            const std::vector<QuadLoss>& losses, const std::vector<long>& sizes,
                            double muN, double qp_tol, int threads = 1);

// Alternates the SDP with weight updates until tr(Y) <= 6 r^2 / mu.
// Throws PartialResultError if the bound is not reached.
SoftRegressionState run_soft_regression(const std::vector<QuadLoss>& losses,
                                        const std::vector<long>& sizes, double S, double r,
                                        const Vector& origin, const SoftRegressionConfig& cfg,
                                        const SdpWarmStart* warm = nullptr);

}  // namespace condreg
