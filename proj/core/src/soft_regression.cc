#include "condreg/soft_regression.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "condreg/parallel.h"

namespace condreg {

double soft_lambda(double mu, long N, double t_est, double S, double r) {
  if (!(mu > 0 && mu <= 1)) throw ParameterError("mu must lie in (0, 1]");
  if (!(t_est > 0)) throw ParameterError("t_est must be > 0");
  if (!(S > 0)) throw ParameterError("S must be > 0");
  if (!(r > 0)) throw ParameterError("radius must be > 0");
  if (N < 1) throw ParameterError("N must be >= 1");
  return std::sqrt(8.0 * mu) * static_cast<double>(N) * t_est * S / r;
}

WeightUpdate reweight(const Vector& c, const Vector& z) {
  const long m = c.size();
  if (z.size() != m) throw ParameterError("reweight: length mismatch");
  WeightUpdate out;
  out.z = z;
  out.c = c;
  double z_max = -std::numeric_limits<double>::infinity();
  long arg = -1;
  for (long i = 0; i < m; ++i)
    if (c(i) != 0 && z(i) > z_max) {
      z_max = z(i);
      arg = i;
    }
  out.z_max = z_max;
  if (!(z_max > 0)) return out;
  for (long i = 0; i < m; ++i) {
    // Negative z (a term fitting its neighborhood better than itself) would
    // raise c above its old value; clamping keeps the weights monotone.
    double f = std::clamp((z_max - z(i)) / z_max, 0.0, 1.0);
    out.c(i) = c(i) * f;
  }
  out.c(arg) = 0.0;
  out.applied = true;
  return out;
}

WeightUpdate update_weights(const Vector& c, const std::vector<Vector>& w_hat,
                            const std::vector<QuadLoss>& losses, const std::vector<long>& sizes,
                            double muN, double qp_tol, int threads) {
  const long m = c.size();
  if ((c.array() == 0).all()) throw ParameterError("update_weights: every weight is already 0");
  Vector z = Vector::Zero(m);
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t i) {
    NeighborSolution nb = solve_neighbor_qp(static_cast<long>(i), losses[i], w_hat, sizes, muN, qp_tol);
    z(i) = nb.loss - eval(losses[i], w_hat[i]);
  });
  return reweight(c, z);
}

SoftRegressionState run_soft_regression(const std::vector<QuadLoss>& losses,
                                        const std::vector<long>& sizes, double S, double r,
                                        const Vector& origin, const SoftRegressionConfig& cfg,
                                        const SdpWarmStart* warm) {
  const long m = static_cast<long>(losses.size());
  if (m < 1) throw ParameterError("run_soft_regression: no terms");
  if (static_cast<long>(sizes.size()) != m) throw ParameterError("sizes length mismatch");
  SoftRegressionState st;
  st.lambda = soft_lambda(cfg.mu, cfg.num_points, cfg.t_est, S, r);
  st.trace_bound = 6.0 * r * r / cfg.mu;
  st.c = Vector::Ones(m);
  const int cap = cfg.max_iter < 0 ? static_cast<int>(m) + 10 : cfg.max_iter;

  SdpWarmStart ws;
  if (warm) ws = *warm;
  for (int it = 0; it < cap; ++it) {
    SdpSolution sol;
    try {
      sol = solve_soft_sdp(losses, st.c, st.lambda, origin, cfg.sdp, ws.w.empty() ? nullptr : &ws);
    } catch (const SolverError& e) {
      // Keep going with the best iterate; it is strictly feasible.
      sol = e.best();
      st.warnings.push_back(e.what());
    }
    st.iteration = it + 1;
    st.w_hat = sol.w;
    st.Y = sol.Y;
    SoftIteration rec;
    rec.iteration = it + 1;
    rec.c = st.c;
    rec.trace = sol.Y.trace();
    rec.objective = sol.objective;
    rec.kkt_residual = sol.kkt_residual;
    rec.sdp_converged = sol.converged;
    rec.sdp_iterations = sol.iterations;
    rec.min_block_eig = min_block_eigenvalue(sol, origin);
    rec.nonzero = (st.c.array() != 0).count();
    rec.bound_met = rec.trace <= st.trace_bound;
    if (rec.bound_met) {
      st.history.push_back(std::move(rec));
      return st;
    }
    WeightUpdate upd = update_weights(st.c, st.w_hat, losses, sizes, cfg.muN, cfg.qp_tol, cfg.threads);
    rec.updated = upd.applied;
    rec.z = upd.z;
    rec.c_next = upd.c;
    st.history.push_back(std::move(rec));
    if (!upd.applied) {
      // The next solve would repeat this one exactly, so the cap cannot help.
      st.warnings.push_back("weight update was a no-op (z_max <= 0)");
      throw PartialResultError("trace bound not met and weight update is a no-op", std::move(st));
    }
    st.c = upd.c;
    ws.w = sol.w;
    ws.Y = sol.Y;
  }
  throw PartialResultError("trace bound not met within " + std::to_string(cap) + " iterations",
                           std::move(st));
}

}  // namespace condreg
