#include <algorithm>
#include <cmath>
#include <numeric>

#include "condreg/solver.h"

namespace condreg {

Vector project_box_simplex(const Vector& x, const Vector& cap) {
  const long m = x.size();
  // sum_j clamp(x_j - theta, 0, cap_j) is non-increasing in theta; bisect for = 1.
  auto mass = [&](double theta) {
    double s = 0;
    for (long j = 0; j < m; ++j) s += std::clamp(x(j) - theta, 0.0, cap(j));
    return s;
  };
  double lo = (x - cap).minCoeff() - 1.0;  // mass(lo) = sum cap >= 1
  double hi = x.maxCoeff();                // mass(hi) = 0
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (mass(mid) >= 1.0) lo = mid; else hi = mid;
  }
  Vector a(m);
  for (long j = 0; j < m; ++j) a(j) = std::clamp(x(j) - lo, 0.0, cap(j));
  // Spread the leftover over coordinates strictly inside their box.
  double excess = a.sum() - 1.0;
  for (long j = 0; j < m && std::abs(excess) > 0; ++j) {
    double room = excess > 0 ? a(j) : cap(j) - a(j);
    double take = std::min(room, std::abs(excess));
    a(j) -= excess > 0 ? take : -take;
    excess += excess > 0 ? -take : take;
  }
  return a;
}

namespace {

// Fill caps in the given order until the mass reaches 1.
Vector greedy_fill(const std::vector<long>& order, const Vector& cap) {
  Vector a = Vector::Zero(cap.size());
  double left = 1.0;
  for (long j : order) {
    if (left <= 0) break;
    a(j) = std::min(cap(j), left);
    left -= a(j);
  }
  return a;
}

}  // namespace

NeighborSolution solve_neighbor_qp(long i, const QuadLoss& loss_i, const std::vector<Vector>& w_hat,
                                   const std::vector<long>& sizes, double muN, double tol) {
  const long m = static_cast<long>(w_hat.size());
  const long d = loss_i.dim();
  if (m < 1 || static_cast<long>(sizes.size()) != m)
    throw ParameterError("solve_neighbor_qp: w_hat and sizes disagree");
  if (i < 0 || i >= m) throw ParameterError("solve_neighbor_qp: term index out of range");
  if (!(muN > 0)) throw ParameterError("solve_neighbor_qp: muN must be > 0");
  Vector cap(m);
  for (long j = 0; j < m; ++j) cap(j) = 2.0 * static_cast<double>(sizes[j]) / muN;
  if (cap.sum() < 1.0 - 1e-12)
    throw ConfigurationError("neighbor box-simplex is empty: sum of caps " +
                             std::to_string(cap.sum()) + " < 1 (mu too large)");

  Matrix W(d, m);
  for (long j = 0; j < m; ++j) W.col(j) = w_hat[j];
  Matrix Hk = loss_i.H();
  Hk.diagonal().array() += 0.5 * loss_i.kappa;
  const Vector bv = loss_i.b();
  // F(a) = f_i(W a), grad = 2 W^T (Hk W a - b).
  auto objective = [&](const Vector& a) { return eval(loss_i, W * a); };
  auto grad = [&](const Vector& a) -> Vector { return 2.0 * W.transpose() * (Hk * (W * a) - bv); };
  auto fw_gap = [&](const Vector& a, const Vector& g, Vector* vertex) {
    std::vector<long> order(m);
    std::iota(order.begin(), order.end(), 0L);
    std::stable_sort(order.begin(), order.end(), [&](long p, long q) { return g(p) < g(q); });
    Vector s = greedy_fill(order, cap);
    if (vertex) *vertex = s;
    return g.dot(a - s);
  };

  Matrix WtHW = W.transpose() * Hk * W;
  double L = 2.0 * Eigen::SelfAdjointEigenSolver<Matrix>(WtHW, Eigen::EigenvaluesOnly)
                       .eigenvalues()
                       .cwiseAbs()
                       .maxCoeff();
  if (!(L > 0)) L = 1.0;

  // Start from the caps filled nearest-first around w_hat_i.
  std::vector<long> near(m);
  std::iota(near.begin(), near.end(), 0L);
  std::stable_sort(near.begin(), near.end(), [&](long p, long q) {
    return (w_hat[p] - w_hat[i]).squaredNorm() < (w_hat[q] - w_hat[i]).squaredNorm();
  });
  Vector a = greedy_fill(near, cap);
  Vector yk = a, a_prev = a;
  double tk = 1.0;
  double f = objective(a);
  double gap = fw_gap(a, grad(a), nullptr);
  for (int it = 0; it < 20000 && gap > tol * (1.0 + std::abs(f)); ++it) {
    Vector g = grad(yk);
    a_prev = a;
    a = project_box_simplex(yk - g / L, cap);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    double f_new = objective(a);
    if (f_new > f) {  // restart momentum
      tk = 1.0;
      t_next = 1.0;
      yk = a;
    } else {
      yk = a + ((tk - 1.0) / t_next) * (a - a_prev);
    }
    tk = t_next;
    f = f_new;
    if (it % 10 == 0) gap = fw_gap(a, grad(a), nullptr);
  }
  gap = fw_gap(a, grad(a), nullptr);

  // Canonical vertex: fill by (gradient, distance to w_tilde, index); kept
  // only if it is as good as the iterate. Resolves ties towards low indices.
  {
    Vector g = grad(a);
    Vector wt = W * a;
    const double q = 1e-9 * std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<long> order(m);
    std::iota(order.begin(), order.end(), 0L);
    std::vector<double> dist(m);
    for (long j = 0; j < m; ++j) dist[j] = (w_hat[j] - wt).squaredNorm();
    std::stable_sort(order.begin(), order.end(), [&](long p, long r) {
      double kp = std::round(g(p) / q), kr = std::round(g(r) / q);
      if (kp != kr) return kp < kr;
      return dist[p] < dist[r];
    });
    Vector s = greedy_fill(order, cap);
    double fs = objective(s);
    if (fs <= f + 1e-12 * (1.0 + std::abs(f))) {
      a = s;
      f = fs;
      gap = fw_gap(a, grad(a), nullptr);
    }
  }

  NeighborSolution out;
  out.a = a;
  out.w_tilde = W * a;
  out.loss = eval(loss_i, out.w_tilde);
  out.gap = std::max(gap, 0.0);
  return out;
}

}  // namespace condreg
