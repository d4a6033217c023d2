#include "condreg/clustering.h"

#include <random>

#include "condreg/errors.h"

namespace condreg {

Partition padded_decomposition(const std::vector<Vector>& points, double rho, double tau,
                               std::uint64_t seed) {
  if (points.empty()) throw ParameterError("padded_decomposition: no points");
  if (!(rho > 2)) throw ParameterError("padded_decomposition: rho must exceed 2");
  if (!(tau > 0)) throw ParameterError("padded_decomposition: tau must be positive");
  const long m = static_cast<long>(points.size());
  std::mt19937_64 rng(seed);
  Partition P;
  P.tau = tau;
  P.k = std::uniform_real_distribution<double>(2.0, rho)(rng);
  const double radius2 = P.radius() * P.radius();
  std::uniform_int_distribution<long> pick(0, m - 1);
  std::vector<char> taken(m, 0);
  long remaining = m;
  while (remaining > 0) {
    const long center = pick(rng);
    std::vector<long> cluster;
    for (long j = 0; j < m; ++j) {
      if (taken[j]) continue;
      if ((points[j] - points[center]).squaredNorm() <= radius2) {
        taken[j] = 1;
        cluster.push_back(j);
      }
    }
    if (cluster.empty()) continue;
    remaining -= static_cast<long>(cluster.size());
    P.clusters.push_back(std::move(cluster));
    P.centers.push_back(center);
  }
  return P;
}

}  // namespace condreg
