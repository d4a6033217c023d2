#include "condreg/cover.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace condreg {

double harmonic(long n) {
  double h = 0;
  for (long i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

CoverInstance build_cover_instance(const DisjointInstance& instance,
                                   const std::vector<QuadLoss>& losses, const Vector& u,
                                   double mu, double gamma, double t_est) {
  if (static_cast<long>(losses.size()) != instance.num_terms())
    throw ParameterError("build_cover_instance: one loss per term expected");
  CoverInstance ci;
  ci.mu = mu;
  ci.gamma = gamma;
  ci.t_est = t_est;
  for (long j = 0; j < instance.num_terms(); ++j) {
    ci.sets.push_back(instance.terms[j].members);
    ci.costs.push_back(losses[j].weight * eval_raw(losses[j], u));
    ci.labels.push_back(instance.terms[j].literals);
  }
  return ci;
}

CoverResult greedy_partial_cover(const CoverInstance& instance, long N) {
  if (!(instance.mu > 0 && instance.mu <= 1) || !(instance.gamma > 0 && instance.gamma <= 1))
    throw ParameterError("greedy_partial_cover: mu and gamma must lie in (0, 1]");
  if (!(instance.t_est > 0)) throw ParameterError("greedy_partial_cover: t_est must be > 0");
  const long m = static_cast<long>(instance.sets.size());
  if (static_cast<long>(instance.costs.size()) != m)
    throw ParameterError("greedy_partial_cover: one cost per set expected");
  for (double c : instance.costs)
    if (!(c >= 0)) throw ParameterError("greedy_partial_cover: costs must be >= 0");

  const double muN = instance.mu * static_cast<double>(N);
  const double target = (1.0 - 2.0 * instance.gamma / 3.0) * muN;
  const double min_new = std::max(1.0, instance.mu * instance.gamma * static_cast<double>(N) /
                                           (3.0 * instance.t_est));
  std::vector<char> covered(N, 0), used(m, 0);
  CoverResult res;
  while (static_cast<double>(res.covered) < target) {
    long best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (long j = 0; j < m; ++j) {
      if (used[j]) continue;
      long fresh = 0;
      for (long p : instance.sets[j]) fresh += !covered[p];
      if (static_cast<double>(fresh) < min_new) continue;
      double ratio = instance.costs[j] / static_cast<double>(fresh);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = j;
      }
    }
    if (best < 0) {
      double cov = static_cast<double>(res.covered) / static_cast<double>(N);
      throw PartialCoverError("no eligible term left at coverage " + std::to_string(cov), res, cov);
    }
    used[best] = 1;
    res.chosen.push_back(best);
    res.cost += instance.costs[best];
    for (long p : instance.sets[best])
      if (!covered[p]) {
        covered[p] = 1;
        ++res.covered;
      }
    if (!instance.labels.empty()) res.dnf.terms.push_back(instance.labels[best]);
  }
  return res;
}

CandidateSolution evaluate_candidate(const Vector& u, const Dnf& dnf, const Dataset& data) {
  if (u.size() != data.d())
    throw ValidationError("candidate has dimension " + std::to_string(u.size()) +
                          " but the data has d = " + std::to_string(data.d()));
  std::vector<long> rows = covered_rows(dnf, data);
  if (rows.empty()) throw EvaluationError("condition covers no rows");
  double s = 0;
  for (long i : rows) {
    double e = data.z(i) - data.y.row(i).dot(u);
    s += e * e;
  }
  CandidateSolution out;
  out.u = u;
  out.dnf = dnf;
  out.covered = static_cast<long>(rows.size());
  out.coverage = static_cast<double>(rows.size()) / static_cast<double>(data.size());
  out.cond_loss = s / static_cast<double>(rows.size());
  return out;
}

long select_final(const std::vector<CandidateSolution>& candidates, double mu, double gamma) {
  if (candidates.empty()) throw SelectionError("no candidates to select from", 0.0);
  const double need = (1.0 - gamma) * mu;
  long best = -1;
  double best_cov = 0.0;
  for (long i = 0; i < static_cast<long>(candidates.size()); ++i) {
    const auto& c = candidates[i];
    best_cov = std::max(best_cov, c.coverage);
    if (c.coverage < need) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const auto& b = candidates[best];
    if (c.cond_loss < b.cond_loss || (c.cond_loss == b.cond_loss && c.coverage > b.coverage))
      best = i;
  }
  if (best < 0)
    throw SelectionError("no candidate covers (1-gamma)*mu = " + std::to_string(need) +
                             "; best coverage " + std::to_string(best_cov),
                         best_cov);
  return best;
}

}  // namespace condreg
