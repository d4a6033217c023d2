#pragma once

#include <cstdint>
#include <vector>

#include "condreg/dataset.h"

namespace condreg {

struct Partition {
  std::vector<std::vector<long>> clusters;  // indices into the input point list
  std::vector<long> centers;                // sampled center of each cluster
  double k = 0.0;                           // radius multiplier, ball radius = k * tau
  double tau = 0.0;

  double radius() const { return k * tau; }
};

// Padded decomposition: k ~ U(2, rho) once, then repeatedly carve
// Ball(point[i], k tau) out of the remaining points for uniform i.
Partition padded_decomposition(const std::vector<Vector>& points, double rho, double tau,
                               std::uint64_t seed);

}  // namespace condreg
