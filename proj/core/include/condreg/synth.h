#pragma once

#include <cstdint>
#include <optional>

#include "condreg/dataset.h"
#include "condreg/terms.h"

namespace condreg {

struct PlantedSpec {
  Vector w_star;
  Dnf dnf_star;
  double mu = 1.0;
  double noise_sigma = 0.0;
};

struct SynthResult {
  Dataset data;
  PlantedSpec planted;
};

struct LineUniformParams {
  long n = 6;
  long k = 2;
  long num_terms = 4;           // size of the random DNF when dnf is not given
  std::optional<Dnf> dnf;       // planted condition; random k-DNF otherwise
  double mu = 0.25;
  long N = 1000;
  Vector w_star = Vector::Constant(1, -1.5);
  double noise_sigma = 10.0;
  double range = 100.0;         // y and bad-row z are uniform on [-range, range]
  std::uint64_t seed = 0;
};

// Good rows: x satisfies the DNF, z = <w*, y> + N(0, sigma^2).
// Bad rows: x violates it, z uniform. Exactly round(mu N) good rows.
SynthResult synth_line_uniform(const LineUniformParams& p);

// y uniform on [-pi, pi] plus a constant-1 column, z = sin(y) + noise.
// Attributes are "y >= a" for a in {-pi/2, 0, pi/2}.
Dataset synth_sine(long N, double noise_sigma, std::uint64_t seed);

struct ScaleUpParams {
  long n = 7;
  long d = 10;
  long N = 100000;
  double mu = 0.5;
  long num_terms = 4;
  long k = 2;
  double noise_variance = 100.0;
  std::uint64_t seed = 0;
};

SynthResult synth_scale_up(const ScaleUpParams& p);

// Random t-term DNF whose terms have exactly k literals each, resampled until
// both satisfying and (when need_unsat) violating assignments exist.
Dnf random_dnf(long n, long k, long num_terms, bool need_unsat, std::uint64_t seed);

}  // namespace condreg
