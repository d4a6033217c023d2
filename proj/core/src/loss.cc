#include "condreg/loss.h"

#include <cmath>
#include <limits>

#include "condreg/errors.h"

namespace condreg {

QuadLoss build_quad_loss(const Matrix& y, const Vector& z, double kappa) {
  const long t = y.rows();
  if (t < 1) throw ParameterError("build_quad_loss: term has no points");
  if (z.size() != t) throw ParameterError("build_quad_loss: y and z lengths differ");
  if (kappa < 0) throw ParameterError("build_quad_loss: kappa must be >= 0");
  const long d = y.cols();
  QuadLoss L;
  L.weight = static_cast<double>(t);
  L.kappa = kappa;
  L.A.resize(d + 1, d + 1);
  L.A(0, 0) = z.squaredNorm();
  Vector yz = y.transpose() * z;
  L.A.col(0).tail(d) = -yz;
  L.A.row(0).tail(d) = -yz.transpose();
  L.A.bottomRightCorner(d, d).noalias() = y.transpose() * y;
  L.A /= L.weight;
  return L;
}

namespace {
void check_dim(const QuadLoss& loss, const Vector& w) {
  if (w.size() != loss.dim())
    throw ParameterError("loss dimension " + std::to_string(loss.dim()) + " vs vector " +
                         std::to_string(w.size()));
}
}  // namespace

double eval_raw(const QuadLoss& loss, const Vector& w) {
  check_dim(loss, w);
  const long d = loss.dim();
  double v = loss.A(0, 0) + 2.0 * loss.A.col(0).tail(d).dot(w) + w.dot(loss.H() * w);
  // Rounding can push an exact fit slightly below zero.
  return std::max(v, 0.0);
}

double eval(const QuadLoss& loss, const Vector& w) {
  return eval_raw(loss, w) + 0.5 * loss.kappa * w.squaredNorm();
}

Vector gradient(const QuadLoss& loss, const Vector& w) {
  check_dim(loss, w);
  return 2.0 * (loss.H() * w - loss.b()) + loss.kappa * w;
}

Vector unconstrained_minimizer(const QuadLoss& loss) {
  const long d = loss.dim();
  Matrix G = loss.H();
  G.diagonal().array() += 0.5 * loss.kappa;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  const Vector& ev = es.eigenvalues();
  const double cut = std::max(ev.cwiseAbs().maxCoeff(), 1e-300) * 1e-12;
  Vector rhs = es.eigenvectors().transpose() * loss.b();
  for (long k = 0; k < d; ++k) rhs(k) = ev(k) > cut ? rhs(k) / ev(k) : 0.0;
  return es.eigenvectors() * rhs;
}

double weighted_total(const std::vector<QuadLoss>& losses, const Vector& c,
                      const std::vector<Vector>& w_list) {
  if (static_cast<long>(losses.size()) != c.size() || losses.size() != w_list.size())
    throw ParameterError("weighted_total: length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < losses.size(); ++i)
    if (c(i) != 0) s += c(i) * losses[i].weight * eval(losses[i], w_list[i]);
  return s;
}

double condition_number(const QuadLoss& loss) {
  Matrix G = loss.H();
  G.diagonal().array() += 0.5 * loss.kappa;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double recommend_kappa(const QuadLoss& loss, double limit) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(loss.H()), Eigen::EigenvaluesOnly);
  double lo = std::max(es.eigenvalues().minCoeff(), 0.0), hi = es.eigenvalues().maxCoeff();
  // (hi + k/2) / (lo + k/2) <= limit
  double k2 = (hi - limit * lo) / (limit - 1.0);
  return std::max(0.0, 2.0 * k2);
}

}  // namespace condreg
