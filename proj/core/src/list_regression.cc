#include "condreg/list_regression.h"

#include <cmath>
#include <mutex>

#include "condreg/clustering.h"
#include "condreg/parallel.h"

namespace condreg {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (a + 1) + 0xD1B54A32D192ED03ull * (b + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

long select_h0(const std::vector<std::optional<Vector>>& w_bars, double r_ell) {
  long assigned = 0;
  for (const auto& w : w_bars) assigned += w.has_value();
  if (assigned == 0) return -1;
  const double lim2 = (r_ell / 3.0) * (r_ell / 3.0);
  for (std::size_t h0 = 0; h0 < w_bars.size(); ++h0) {
    if (!w_bars[h0]) continue;
    long close = 0;
    for (const auto& w : w_bars)
      if (w && (*w - *w_bars[h0]).squaredNorm() <= lim2) ++close;
    if (2 * close >= assigned) return static_cast<long>(h0);
  }
  return -1;
}

std::vector<Vector> extract_candidates(const std::vector<std::optional<Vector>>& w_hat,
                                       const std::vector<long>& sizes, double r_final,
                                       double epsilon, double mu, double mass) {
  const double threshold = (1.0 - epsilon) * mu * mass;
  const double ball2 = 4.0 * r_final * r_final;         // (2 r_final)^2
  const double sep2 = 16.0 * r_final * r_final;         // (4 r_final)^2
  std::vector<Vector> out;
  for (std::size_t i = 0; i < w_hat.size(); ++i) {
    if (!w_hat[i]) continue;
    const Vector& u = *w_hat[i];
    bool far = true;
    for (const auto& v : out)
      if ((u - v).squaredNorm() <= sep2) {
        far = false;
        break;
      }
    if (!far) continue;
    double weight = 0;
    for (std::size_t j = 0; j < w_hat.size(); ++j)
      if (w_hat[j] && (*w_hat[j] - u).squaredNorm() <= ball2) weight += static_cast<double>(sizes[j]);
    if (weight >= threshold) out.push_back(u);
  }
  return out;
}

namespace {

void check_params(const ListRegressionParams& p, long m, long sizes) {
  auto frac = [](double v) { return v > 0 && v <= 1; };
  if (m < 1 || sizes != m) throw ParameterError("run_list_regression: losses and sizes disagree");
  if (!frac(p.mu)) throw ParameterError("mu must lie in (0, 1]");
  if (!frac(p.gamma) || !frac(p.delta) || !(p.epsilon >= 0 && p.epsilon < 1))
    throw ParameterError("gamma, delta must lie in (0, 1] and epsilon in [0, 1)");
  if (!(p.r_final > 0) || !(p.r_final < p.r_init))
    throw ParameterError("need 0 < r_final < r_init");
  if (!(p.s0 > 0)) throw ParameterError("s0 must be > 0");
  if (!(p.c_q > 0) || !(p.c_rho > 0) || !(p.delta_pd > 0 && p.delta_pd < 1))
    throw ParameterError("c_q, c_rho must be > 0 and delta_pd in (0,1)");
  if (p.num_points < 1) throw ParameterError("num_points must be >= 1");
}

}  // namespace

ListRegressionResult run_list_regression(const std::vector<QuadLoss>& losses,
                                         const std::vector<long>& sizes,
                                         const ListRegressionParams& params, std::uint64_t seed,
                                         const SoftRunObserver& observer) {
  const long m = static_cast<long>(losses.size());
  check_params(params, m, static_cast<long>(sizes.size()));
  const long d = losses[0].dim();
  const double muN = params.mu * static_cast<double>(params.num_points);

  SoftRegressionConfig cfg;
  cfg.mu = params.mu;
  cfg.num_points = params.num_points;
  cfg.muN = muN;
  cfg.t_est = params.t_est;
  cfg.sdp = params.sdp;
  cfg.qp_tol = params.qp_tol;
  cfg.threads = 1;

  ListRegressionResult res;
  std::mutex observe_mu;
  auto notify = [&](SoftRunInfo info) {
    if (!observer) return;
    std::lock_guard lock(observe_mu);
    observer(info);
  };

  // Runs soft regression on a subset; incomplete runs still yield their last iterate.
  auto soft_run = [&](const std::vector<long>& idx, const Vector& origin, double radius,
                      const std::vector<Vector>* warm_w, int ell, long h, bool* completed) {
    std::vector<QuadLoss> sub;
    std::vector<long> sub_sizes;
    for (long i : idx) {
      sub.push_back(losses[i]);
      sub_sizes.push_back(sizes[i]);
    }
    SdpWarmStart warm;
    if (warm_w) warm.w = *warm_w;
    SoftRegressionState st;
    *completed = true;
    try {
      st = run_soft_regression(sub, sub_sizes, params.s0 * radius, radius, origin, cfg,
                               warm_w ? &warm : nullptr);
    } catch (const PartialResultError& e) {
      st = e.state();
      *completed = false;
    }
    notify({ell, h, idx, origin, radius, *completed, &st});
    return st;
  };

  std::vector<long> all(m);
  for (long i = 0; i < m; ++i) all[i] = i;
  res.w_hat.assign(m, std::nullopt);
  {
    bool ok = true;
    SoftRegressionState st = soft_run(all, Vector::Zero(d), params.r_init, nullptr, 0, -1, &ok);
    if (!ok) res.warnings.push_back("initial soft regression stopped before the trace bound");
    for (const auto& w : st.warnings) res.warnings.push_back(w);
    for (long i = 0; i < m; ++i) res.w_hat[i] = st.w_hat[i];
  }

  const double ratio = params.c_rho * std::log(2.0 / params.mu) / params.delta_pd;
  if (!(ratio > 2.0))
    throw ParameterError("padded decomposition ratio c_rho*log(2/mu)/delta_pd must exceed 2");

  double r = params.r_init;
  res.radius_schedule.push_back(r);
  for (int ell = 1; r >= params.r_final / 2.0; ++ell) {
    std::vector<long> W;
    for (long i = 0; i < m; ++i)
      if (res.w_hat[i]) W.push_back(i);
    std::vector<Vector> points;
    for (long i : W) points.push_back(*res.w_hat[i]);

    const double lq = std::log(static_cast<double>(ell) * (ell + 1) / params.delta);
    const long q = std::max(1L, static_cast<long>(std::ceil(params.c_q * lq)));
    const double tau = 2.0 * r;

    OuterIteration info;
    info.iteration = ell;
    info.radius = r;
    info.num_decompositions = q;
    info.rho = ratio * tau;
    info.assigned_before = static_cast<long>(W.size());
    info.clusters_per_h.assign(q, 0);
    std::vector<long> incomplete(q, 0);

    // w_bar[h][k] for the k-th member of W.
    std::vector<std::vector<Vector>> w_bar(q, std::vector<Vector>(W.size()));
    parallel_for(static_cast<std::size_t>(q), params.threads, [&](std::size_t h) {
      Partition P = padded_decomposition(points, ratio, tau, mix_seed(seed, ell, h));
      info.clusters_per_h[h] = static_cast<long>(P.clusters.size());
      for (std::size_t cl = 0; cl < P.clusters.size(); ++cl) {
        const auto& members = P.clusters[cl];
        std::vector<long> idx;
        std::vector<Vector> warm_w;
        for (long k : members) {
          idx.push_back(W[k]);
          warm_w.push_back(points[k]);
        }
        const Vector& u = points[P.centers[cl]];
        bool ok = true;
        SoftRegressionState st =
            soft_run(idx, u, P.radius() + r, &warm_w, ell, static_cast<long>(h), &ok);
        if (!ok) ++incomplete[h];
        for (std::size_t k = 0; k < members.size(); ++k) w_bar[h][members[k]] = st.w_hat[k];
      }
    });
    for (long h = 0; h < q; ++h) info.incomplete_runs += incomplete[h];

    std::vector<std::optional<Vector>> next(m, std::nullopt);
    long assigned = 0;
    for (std::size_t k = 0; k < W.size(); ++k) {
      std::vector<std::optional<Vector>> vals(q);
      for (long h = 0; h < q; ++h) vals[h] = w_bar[h][k];
      long h0 = select_h0(vals, r);
      if (h0 >= 0) {
        next[W[k]] = *vals[h0];
        ++assigned;
      }
    }
    info.assigned_after = assigned;
    res.trace.push_back(info);
    res.iterations = ell;
    if (assigned == 0)
      throw DegenerateInstanceError("every term became unassigned at radius " + std::to_string(r) +
                                    "; try a larger r_final or s0");
    res.w_hat = std::move(next);
    r /= 2.0;
    res.radius_schedule.push_back(r);
  }

  res.candidates = extract_candidates(res.w_hat, sizes, params.r_final, params.epsilon, params.mu,
                                      static_cast<double>(params.num_points));
  return res;
}

}  // namespace condreg
