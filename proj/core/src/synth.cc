#include "condreg/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "condreg/errors.h"

namespace condreg {
namespace {

constexpr long kMaxEnumerate = 20;
constexpr long kRejectionCap = 1000000;

// Returns {has satisfying, has violating} assignment; exact for n <= 20.
std::pair<bool, bool> satisfiability(const Dnf& dnf, long n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> row(n);
  bool sat = false, unsat = false;
  auto test = [&] {
    if (dnf_satisfies(dnf, row)) sat = true;
    else unsat = true;
  };
  if (n <= kMaxEnumerate) {
    for (long mask = 0; mask < (1L << n) && !(sat && unsat); ++mask) {
      for (long a = 0; a < n; ++a) row[a] = (mask >> a) & 1;
      test();
    }
  } else {
    std::bernoulli_distribution coin(0.5);
    for (long it = 0; it < kRejectionCap && !(sat && unsat); ++it) {
      for (auto& b : row) b = coin(rng);
      test();
    }
  }
  return {sat, unsat};
}

void sample_row(const Dnf& dnf, bool want, std::uint8_t* out, long n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> row(n);
  for (long it = 0; it < kRejectionCap; ++it) {
    for (auto& b : row) b = coin(rng);
    if (dnf_satisfies(dnf, row) == want) {
      std::copy(row.begin(), row.end(), out);
      return;
    }
  }
  throw GenerationError("could not sample an assignment with the requested DNF value");
}

struct PlantedLayout {
  long n, N;
  double mu;
  Vector w_star;
  double y_range;     // y uniform on [-y_range, y_range]^d
  double z_bad_range; // bad z uniform on [-z_bad_range, z_bad_range]
  double noise_sd;
};

Dataset planted_rows(const PlantedLayout& L, const Dnf& dnf, std::mt19937_64& rng) {
  const long d = L.w_star.size();
  const long good = std::lround(L.mu * static_cast<double>(L.N));
  std::vector<std::uint8_t> is_good(L.N, 0);
  std::fill(is_good.begin(), is_good.begin() + good, 1);
  std::shuffle(is_good.begin(), is_good.end(), rng);

  Dataset data;
  data.x.resize(L.N, L.n);
  data.y.resize(L.N, d);
  data.z.resize(L.N);
  std::uniform_real_distribution<double> uy(-L.y_range, L.y_range);
  std::uniform_real_distribution<double> uz(-L.z_bad_range, L.z_bad_range);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (long i = 0; i < L.N; ++i) {
    sample_row(dnf, is_good[i] != 0, data.x.row(i).data(), L.n, rng);
    for (long j = 0; j < d; ++j) data.y(i, j) = uy(rng);
    if (is_good[i]) {
      double e = noise(rng);
      data.z(i) = data.y.row(i).dot(L.w_star) + L.noise_sd * e;
    } else {
      data.z(i) = uz(rng);
    }
  }
  return data;
}

}  // namespace

Dnf random_dnf(long n, long k, long num_terms, bool need_unsat, std::uint64_t seed) {
  if (k < 1 || k > n || num_terms < 1) throw ParameterError("random_dnf: bad shape");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<long> attrs(n);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Dnf dnf;
    for (long t = 0; t < num_terms; ++t) {
      for (long a = 0; a < n; ++a) attrs[a] = a;
      std::shuffle(attrs.begin(), attrs.end(), rng);
      std::vector<long> pick(attrs.begin(), attrs.begin() + k);
      std::sort(pick.begin(), pick.end());
      Conjunction c;
      for (long a : pick) c.push_back({a, coin(rng)});
      dnf.terms.push_back(std::move(c));
    }
    auto [sat, unsat] = satisfiability(dnf, n, rng);
    if (sat && (unsat || !need_unsat)) return dnf;
  }
  throw GenerationError("random_dnf: no admissible DNF after 1000 draws");
}

SynthResult synth_line_uniform(const LineUniformParams& p) {
  if (!(p.mu > 0 && p.mu <= 1)) throw ParameterError("mu must lie in (0, 1]");
  if (p.N < 1 || p.n < 1) throw ParameterError("N and n must be positive");
  if (p.noise_sigma < 0) throw ParameterError("noise_sigma must be >= 0");
  if (p.w_star.size() < 1) throw ParameterError("w_star must be non-empty");
  std::mt19937_64 rng(p.seed);
  const bool need_unsat = std::lround(p.mu * static_cast<double>(p.N)) < p.N;

  Dnf dnf;
  if (p.dnf) {
    dnf = *p.dnf;
    if (max_attribute(dnf) >= p.n) throw ParameterError("planted DNF uses attribute >= n");
    auto [sat, unsat] = satisfiability(dnf, p.n, rng);
    if (!sat) throw GenerationError("planted DNF is unsatisfiable");
    if (need_unsat && !unsat)
      throw GenerationError("planted DNF is a tautology but mu < 1 needs violating rows");
  } else {
    dnf = random_dnf(p.n, p.k, p.num_terms, need_unsat, rng());
  }

  PlantedLayout L{p.n, p.N, p.mu, p.w_star, p.range, p.range, p.noise_sigma};
  SynthResult out;
  out.data = planted_rows(L, dnf, rng);
  out.planted = {p.w_star, dnf, p.mu, p.noise_sigma};
  return out;
}

Dataset synth_sine(long N, double noise_sigma, std::uint64_t seed) {
  if (N < 1) throw ParameterError("N must be positive");
  if (noise_sigma < 0) throw ParameterError("noise_sigma must be >= 0");
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(-pi, pi);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset data;
  data.x.resize(N, 0);
  data.y.resize(N, 2);
  data.z.resize(N);
  for (long i = 0; i < N; ++i) {
    double y = uy(rng);
    data.y(i, 0) = y;
    data.y(i, 1) = 1.0;
    data.z(i) = std::sin(y) + noise_sigma * noise(rng);
  }
  return binarize(data, 0, {-pi / 2, 0.0, pi / 2}, ThresholdSense::kGreaterEqual);
}

SynthResult synth_scale_up(const ScaleUpParams& p) {
  if (p.n < 1 || p.d < 1 || p.N < 1 || !(p.mu > 0 && p.mu <= 1) || p.noise_variance < 0)
    throw ParameterError("synth_scale_up: parameters must be positive");
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> uw(-10.0, 10.0);
  Vector w(p.d);
  for (long j = 0; j < p.d; ++j) w(j) = uw(rng);
  const bool need_unsat = std::lround(p.mu * static_cast<double>(p.N)) < p.N;
  Dnf dnf = random_dnf(p.n, p.k, p.num_terms, need_unsat, rng());
  PlantedLayout L{p.n, p.N, p.mu, w, 1.0, 10.0, std::sqrt(p.noise_variance)};
  SynthResult out;
  out.data = planted_rows(L, dnf, rng);
  out.planted = {w, dnf, p.mu, std::sqrt(p.noise_variance)};
  return out;
}

}  // namespace condreg
