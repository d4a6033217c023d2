#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "condreg/dataset.h"
#include "condreg/loss.h"

namespace condreg::testing {

inline std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "condreg_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

inline Matrix random_matrix(long r, long c, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

inline Vector random_vector(long n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  return random_matrix(n, 1, rng, lo, hi).col(0);
}

// A term with `pts` points drawn around w + noise.
inline QuadLoss random_loss(long pts, long d, std::mt19937_64& rng, double kappa = 0.0) {
  Matrix y = random_matrix(pts, d, rng);
  Vector w = random_vector(d, rng, -2, 2);
  Vector z = y * w + 0.3 * random_vector(pts, rng);
  return build_quad_loss(y, z, kappa);
}

// Plain OLS through the normal equations, computed independently of QuadLoss.
inline Vector ols(const Matrix& y, const Vector& z) {
  return y.colPivHouseholderQr().solve(z);
}

}  // namespace condreg::testing
