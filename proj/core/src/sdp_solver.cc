// Log-barrier interior-point method for the soft-regression SDP.
//
// Variables are the upper triangle of Y and v_i = w_i - o. Each constraint
// block M_i = [[Y, v_i], [v_i^T, 1]] gets -log det M_i; the hypothesis ball
// gets -log(R^2 - ||w_i||^2). The Newton system has arrow structure (every
// v_i couples only to Y), so the v-blocks are eliminated term by term and
// only a d(d+1)/2 system is factored.

#include <algorithm>
#include <cmath>
#include <limits>

#include "condreg/solver.h"

namespace condreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector ball_project(const Vector& w, double R) {
  double n = w.norm();
  if (!std::isfinite(R) || n <= R) return w;
  return w * (R / n);
}

void build_block(const Matrix& Y, const Vector& v, Matrix& M) {
  const long d = Y.rows();
  M.topLeftCorner(d, d) = Y;
  M.topRightCorner(d, 1) = v;
  M.bottomLeftCorner(1, d) = v.transpose();
  M(d, d) = 1.0;
}

// Basis element of a symmetric (d+1)x(d+1) block: alpha (e_k e_l^T + e_l e_k^T).
struct Basis {
  long k, l;
  double alpha;
};

struct Problem {
  const std::vector<QuadLoss>& losses;
  const Vector& c;
  double lambda;
  const Vector& origin;
  double R;
  long m, d, p;
  std::vector<Basis> ybasis;
  std::vector<Matrix> Hq;  // Hessian of F_i = c|t| f_i : 2 c|t| (H + kappa/2)
  std::vector<Vector> gq;  // F_i gradient is Hq w - gq
  std::vector<double> F0;  // constant part of F_i

  double F(long i, const Vector& w) const {
    if (c(i) == 0) return 0.0;
    return F0[i] - gq[i].dot(w) + 0.5 * w.dot(Hq[i] * w);
  }
};

struct Point {
  Matrix Y;
  std::vector<Vector> v;
};

double objective(const Problem& P, const Point& x) {
  double s = P.lambda * x.Y.trace();
  for (long i = 0; i < P.m; ++i) s += P.F(i, P.origin + x.v[i]);
  return s;
}

// t * objective + barrier; +inf outside the domain.
double merit(const Problem& P, const Point& x, double t) {
  Matrix M(P.d + 1, P.d + 1);
  double bar = 0.0;
  for (long i = 0; i < P.m; ++i) {
    build_block(x.Y, x.v[i], M);
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success) return kInf;
    const auto& L = llt.matrixLLT();
    for (long k = 0; k <= P.d; ++k) {
      if (!(L(k, k) > 0)) return kInf;
      bar -= 2.0 * std::log(L(k, k));
    }
    if (std::isfinite(P.R)) {
      double s = P.R * P.R - (P.origin + x.v[i]).squaredNorm();
      if (!(s > 0)) return kInf;
      bar -= std::log(s);
    }
  }
  return t * objective(P, x) + bar;
}

}  // namespace

double min_block_eigenvalue(const SdpSolution& sol, const Vector& origin) {
  const long d = sol.Y.rows();
  double lo = kInf;
  Matrix M(d + 1, d + 1);
  for (const auto& w : sol.w) {
    build_block(sol.Y, w - origin, M);
    Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

SdpSolution solve_soft_sdp(const std::vector<QuadLoss>& losses, const Vector& c, double lambda,
                           const Vector& origin, const SdpOptions& opts,
                           const SdpWarmStart* warm) {
  const long m = static_cast<long>(losses.size());
  if (m < 1) throw ParameterError("solve_soft_sdp: no terms");
  if (c.size() != m) throw ParameterError("solve_soft_sdp: weight vector length mismatch");
  if (!(lambda > 0)) throw ParameterError("solve_soft_sdp: lambda must be > 0");
  const long d = losses[0].dim();
  if (origin.size() != d) throw ParameterError("solve_soft_sdp: origin dimension mismatch");
  for (long i = 0; i < m; ++i) {
    if (losses[i].dim() != d) throw ParameterError("solve_soft_sdp: mixed dimensions");
    if (!(c(i) >= 0 && c(i) <= 1)) throw ParameterError("solve_soft_sdp: c must lie in [0,1]");
  }
  const double R = opts.hypothesis_radius;
  if (!(R > 0)) throw ParameterError("solve_soft_sdp: hypothesis radius must be > 0");

  auto pack = [&](const Point& x, double res, int iters, bool ok) {
    SdpSolution sol;
    sol.Y = 0.5 * (x.Y + x.Y.transpose());
    sol.w.resize(m);
    for (long i = 0; i < m; ++i) sol.w[i] = origin + x.v[i];
    sol.objective = weighted_total(losses, c, sol.w) + lambda * sol.Y.trace();
    sol.kkt_residual = res;
    sol.iterations = iters;
    sol.converged = ok;
    return sol;
  };

  if ((c.array() == 0).all()) {
    // Optimum is Y = 0 with every w_i at the origin (or its projection).
    Point x;
    Vector w = ball_project(origin, R);
    x.v.assign(m, w - origin);
    x.Y = x.v[0] * x.v[0].transpose();
    return pack(x, 0.0, 0, true);
  }

  Problem P{losses, c, lambda, origin, R, m, d, d * (d + 1) / 2, {}, {}, {}, {}};
  for (long k = 0; k < d; ++k)
    for (long l = k; l < d; ++l) P.ybasis.push_back({k, l, k == l ? 0.5 : 1.0});
  P.Hq.resize(m);
  P.gq.resize(m);
  P.F0.resize(m);
  double f_lower = 0.0;  // sum of per-term minima: a lower bound on the optimum
  for (long i = 0; i < m; ++i) {
    const double s = c(i) * losses[i].weight;
    Matrix G = losses[i].H();
    G.diagonal().array() += 0.5 * losses[i].kappa;
    P.Hq[i] = 2.0 * s * G;
    P.gq[i] = 2.0 * s * losses[i].b();
    P.F0[i] = s * losses[i].a0();
    if (c(i) > 0) f_lower += s * eval(losses[i], unconstrained_minimizer(losses[i]));
  }

  // Strictly feasible start.
  Point x;
  x.v.resize(m);
  const double r_in = std::isfinite(R) ? 0.99 * R : kInf;
  for (long i = 0; i < m; ++i) {
    Vector w;
    if (warm && static_cast<long>(warm->w.size()) == m) w = warm->w[i];
    else if (c(i) > 0) w = unconstrained_minimizer(losses[i]);
    else w = origin;
    x.v[i] = ball_project(w, r_in) - origin;
  }
  {
    double base = 0.0;
    for (const auto& v : x.v) base = std::max(base, v.squaredNorm());
    x.Y = Matrix::Identity(d, d) * (1.5 * base + 1e-8 * (1.0 + origin.squaredNorm()));
    if (warm && warm->Y.rows() == d) {
      Point alt{warm->Y, x.v};
      if (std::isfinite(merit(P, alt, 1.0))) x.Y = warm->Y;
    }
  }

  const double nu = static_cast<double>(m) * (d + 1) + (std::isfinite(R) ? m : 0);
  double f0 = objective(P, x);
  double t = nu / std::max(f0 - f_lower, 1e-12 * (1.0 + std::abs(f0)));
  const double t_growth = 20.0;

  const long nvar = P.p + m * d;
  Vector g(nvar), dx(nvar);
  Matrix Hyy(P.p, P.p);
  std::vector<Matrix> Hyv(m, Matrix(P.p, d)), Hvv(m, Matrix(d, d));
  std::vector<Eigen::LLT<Matrix>> Lvv(m);
  Matrix M(d + 1, d + 1), Pm(d + 1, d + 1);
  const Matrix I1 = Matrix::Identity(d + 1, d + 1);

  int newton = 0;
  double gap = nu / t;
  bool ok = false;
  while (newton < opts.max_iter) {
    // Centering at t.
    double prev_dec = kInf;
    for (int inner = 0; inner < 200 && newton < opts.max_iter; ++inner, ++newton) {
      g.setZero();
      Hyy.setZero();
      for (const auto& b : P.ybasis)
        if (b.k == b.l) g(&b - P.ybasis.data()) += t * lambda;
      for (long i = 0; i < m; ++i) {
        build_block(x.Y, x.v[i], M);
        Pm = M.llt().solve(I1);
        auto tr2 = [&](long k, long l, double a, long r, long s, double b) {
          return 2.0 * a * b * (Pm(l, r) * Pm(s, k) + Pm(l, s) * Pm(r, k));
        };
        // Y-Y
        for (long a = 0; a < P.p; ++a) {
          const Basis& A = P.ybasis[a];
          g(a) -= 2.0 * A.alpha * Pm(A.k, A.l);
          for (long b2 = a; b2 < P.p; ++b2) {
            const Basis& B = P.ybasis[b2];
            double h = tr2(A.k, A.l, A.alpha, B.k, B.l, B.alpha);
            Hyy(a, b2) += h;
          }
          for (long j = 0; j < d; ++j) Hyv[i](a, j) = tr2(A.k, A.l, A.alpha, j, d, 1.0);
        }
        // v-v, plus the loss and the ball barrier.
        const Vector w = origin + x.v[i];
        Vector gv = -2.0 * Pm.topRightCorner(d, 1);
        for (long j = 0; j < d; ++j)
          for (long j2 = j; j2 < d; ++j2) Hvv[i](j, j2) = Hvv[i](j2, j) = tr2(j, d, 1.0, j2, d, 1.0);
        if (c(i) > 0) {
          gv += t * (P.Hq[i] * w - P.gq[i]);
          Hvv[i] += t * P.Hq[i];
        }
        if (std::isfinite(R)) {
          double s = R * R - w.squaredNorm();
          gv += 2.0 * w / s;
          Hvv[i] += (2.0 / s) * Matrix::Identity(d, d) + (4.0 / (s * s)) * w * w.transpose();
        }
        g.segment(P.p + i * d, d) = gv;
      }
      Hyy = Hyy.selfadjointView<Eigen::Upper>();

      // Eliminate the v-blocks.
      Matrix S = Hyy;
      Vector rhs = -g.head(P.p);
      for (long i = 0; i < m; ++i) {
        Lvv[i].compute(Hvv[i]);
        Matrix K = Lvv[i].solve(Hyv[i].transpose());  // d x p
        S.noalias() -= Hyv[i] * K;
        rhs.noalias() += K.transpose() * g.segment(P.p + i * d, d);
      }
      Vector dy = S.ldlt().solve(rhs);
      dx.head(P.p) = dy;
      for (long i = 0; i < m; ++i)
        dx.segment(P.p + i * d, d) = Lvv[i].solve(-g.segment(P.p + i * d, d) - Hyv[i].transpose() * dy);

      const double dec = -g.dot(dx);
      if (!(dec > 1e-10) || !std::isfinite(dec)) break;

      auto moved = [&](double step) {
        Point y{x.Y, x.v};
        for (long a = 0; a < P.p; ++a) {
          const Basis& A = P.ybasis[a];
          y.Y(A.k, A.l) += step * dx(a);
          if (A.k != A.l) y.Y(A.l, A.k) += step * dx(a);
        }
        for (long i = 0; i < m; ++i) y.v[i] += step * dx.segment(P.p + i * d, d);
        return y;
      };
      if (dec < 0.1 && dec > 0.5 * prev_dec) break;  // roundoff floor
      prev_dec = dec;
      double step = 1.0;
      Point y = moved(step);
      if (dec < 0.1) {
        // Quadratic region of a self-concordant merit: the full step is
        // right, and merit differences are below roundoff at large t.
        while (!std::isfinite(merit(P, y, t)) && step > 1e-14) y = moved(step *= 0.5);
      } else {
        const double phi = merit(P, x, t);
        double phi_y = merit(P, y, t);
        while (!(phi_y <= phi - 0.25 * step * dec) && step > 1e-14) {
          y = moved(step *= 0.5);
          phi_y = merit(P, y, t);
        }
      }
      if (step <= 1e-14) break;
      x = std::move(y);
      if (dec < 1e-9) break;
    }
    const double obj = objective(P, x);
    gap = nu / t;
    const double scale = 1.0 + std::abs(obj - f_lower);
    if (gap <= opts.tol * scale) {
      ok = true;
      gap /= scale;
      break;
    }
    t *= t_growth;
  }
  if (!ok) {
    const double obj = objective(P, x);
    SdpSolution best = pack(x, gap / (1.0 + std::abs(obj - f_lower)), newton, false);
    throw SolverError("soft SDP did not reach tolerance: gap " + std::to_string(best.kkt_residual),
                      best);
  }
  return pack(x, gap, newton, true);
}

}  // namespace condreg
