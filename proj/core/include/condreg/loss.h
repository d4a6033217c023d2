#pragma once

#include <vector>

#include "condreg/dataset.h"

namespace condreg {

// f(w) = [1,w] A [1,w]^T + (kappa/2)||w||^2, A = (1/|t|) [[z'z, -z'Y], [-Y'z, Y'Y]].
struct QuadLoss {
  Matrix A;
  double weight = 0.0;  // |t|
  double kappa = 0.0;

  long dim() const { return static_cast<long>(A.rows()) - 1; }
  // Quadratic part H = Y'Y/|t| and linear part b = Y'z/|t|, so f = a0 - 2b'w + w'Hw.
  auto H() const { return A.bottomRightCorner(dim(), dim()); }
  Vector b() const { return -A.col(0).tail(dim()); }
  double a0() const { return A(0, 0); }
};

QuadLoss build_quad_loss(const Matrix& y, const Vector& z, double kappa = 0.0);

double eval(const QuadLoss& loss, const Vector& w);
// Squared-error part only (kappa term dropped).
double eval_raw(const QuadLoss& loss, const Vector& w);
Vector gradient(const QuadLoss& loss, const Vector& w);

// Minimizer of eval(); least-norm solution when H + kappa/2 is singular.
Vector unconstrained_minimizer(const QuadLoss& loss);

double weighted_total(const std::vector<QuadLoss>& losses, const Vector& c,
                      const std::vector<Vector>& w_list);

// Condition number of H + kappa/2 I (infinity when singular).
double condition_number(const QuadLoss& loss);
// Smallest kappa bringing the condition number under `limit`.
double recommend_kappa(const QuadLoss& loss, double limit);

}  // namespace condreg
