#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "condreg/errors.h"
#include "condreg/loss.h"

namespace condreg {

struct SdpOptions {
  double tol = 1e-6;
  int max_iter = 10000;
  // Global hypothesis radius: ||w_i|| <= hypothesis_radius (centered at 0).
  double hypothesis_radius = std::numeric_limits<double>::infinity();
};

struct SdpSolution {
  std::vector<Vector> w;
  Matrix Y;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SdpWarmStart {
  std::vector<Vector> w;
  Matrix Y;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, SdpSolution best)
      : Error(what), best_(std::move(best)) {}
  const SdpSolution& best() const { return best_; }
  double residual() const { return best_.kkt_residual; }

 private:
  SdpSolution best_;
};

// min sum_i c_i |t_i| f_i(w_i) + lambda tr(Y)
// s.t. (w_i - o)(w_i - o)^T <= Y for all i, ||w_i|| <= hypothesis_radius.
// Log-barrier Newton on the lifted blocks [[Y, w_i - o], [(w_i - o)^T, 1]] >= 0.
// max_iter caps the total number of Newton steps.
SdpSolution solve_soft_sdp(const std::vector<QuadLoss>& losses, const Vector& c, double lambda,
                           const Vector& origin, const SdpOptions& opts = {},
                           const SdpWarmStart* warm = nullptr);

// Smallest eigenvalue over the Schur blocks [[Y, w_i - o], [., 1]].
double min_block_eigenvalue(const SdpSolution& sol, const Vector& origin);

struct NeighborSolution {
  Vector a;
  Vector w_tilde;
  double loss = 0.0;
  double gap = 0.0;  // Frank-Wolfe duality gap at a
};

// min_a f_i(sum_j a_j w_hat_j)  s.t.  sum a = 1, 0 <= a_j <= 2|t_j|/muN.
NeighborSolution solve_neighbor_qp(long i, const QuadLoss& loss_i, const std::vector<Vector>& w_hat,
                                   const std::vector<long>& sizes, double muN, double tol = 1e-9);

// Euclidean projection onto {sum a = 1, 0 <= a <= cap}.
Vector project_box_simplex(const Vector& x, const Vector& cap);

}  // namespace condreg
