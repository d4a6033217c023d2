#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "condreg/errors.h"
#include "condreg/list_regression.h"
#include "test_util.h"

using namespace condreg;
using condreg::testing::random_vector;

namespace {

using Opt = std::optional<Vector>;

Opt at(double v) { return Vector::Constant(1, v); }

// Independent rescan: smallest h0 with at least half of the assigned values nearby.
long oracle_h0(const std::vector<Opt>& w, double r) {
  std::vector<long> assigned;
  for (std::size_t h = 0; h < w.size(); ++h)
    if (w[h]) assigned.push_back(static_cast<long>(h));
  for (long h0 : assigned) {
    long close = 0;
    for (long h : assigned) close += (*w[h] - *w[h0]).norm() <= r / 3.0;
    if (close * 2 >= static_cast<long>(assigned.size())) return h0;
  }
  return -1;
}

}  // namespace

TEST(SelectH0, AllAgree) {
  std::vector<Opt> w{at(1.0), at(1.0), at(1.0)};
  EXPECT_EQ(select_h0(w, 0.3), 0);
}

TEST(SelectH0, MajorityCluster) {
  std::vector<Opt> w{at(9.0), at(1.0), at(1.05), at(0.98)};
  EXPECT_EQ(select_h0(w, 0.3), 1);
  std::vector<Opt> none{std::nullopt, std::nullopt};
  EXPECT_EQ(select_h0(none, 1.0), -1);
}

TEST(SelectH0, ExhaustiveOracle) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution missing(0.2);
  for (int rep = 0; rep < 500; ++rep) {
    const long q = 1 + rep % 9, d = 1 + rep % 3;
    std::vector<Opt> w(q);
    for (auto& v : w)
      if (!missing(rng)) v = random_vector(d, rng);
    const double r = 0.2 + 0.01 * (rep % 100);
    EXPECT_EQ(select_h0(w, r), oracle_h0(w, r)) << "rep " << rep;
  }
}

TEST(ExtractCandidates, OneTightCluster) {
  std::vector<Opt> w{at(1.0), at(1.01), at(0.99), at(1.0)};
  auto u = extract_candidates(w, {10, 10, 10, 10}, 0.1, 0.1, 0.5, 60.0);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0](0), 1.0);
}

TEST(ExtractCandidates, TwoSeparatedClusters) {
  std::vector<Opt> w{at(0.0), at(0.01), at(1.0), at(1.01), std::nullopt};
  auto u = extract_candidates(w, {15, 15, 15, 15, 99}, 0.1, 0.0, 0.5, 50.0);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[0](0), 0.0);
  EXPECT_EQ(u[1](0), 1.0);
  EXPECT_TRUE(extract_candidates(w, {1, 1, 1, 1, 1}, 0.1, 0.0, 0.5, 50.0).empty());
}

TEST(ExtractCandidates, ValidAndMaximalByBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> sz(1, 10);
  for (int rep = 0; rep < 200; ++rep) {
    const long m = 2 + rep % 9;
    const double rf = 0.1, eps = 0.1, mu = 0.3;
    std::vector<Opt> w(m);
    std::vector<long> sizes(m);
    long mass = 0;
    for (long i = 0; i < m; ++i) {
      w[i] = random_vector(1 + rep % 2, rng, -1, 1);
      mass += (sizes[i] = sz(rng));
    }
    auto U = extract_candidates(w, sizes, rf, eps, mu, static_cast<double>(mass));
    auto weight = [&](const Vector& u) {
      double s = 0;
      for (long j = 0; j < m; ++j)
        if ((*w[j] - u).norm() <= 2 * rf) s += static_cast<double>(sizes[j]);
      return s;
    };
    const double thr = (1 - eps) * mu * static_cast<double>(mass);
    for (std::size_t a = 0; a < U.size(); ++a) {
      EXPECT_GE(weight(U[a]), thr);
      for (std::size_t b = a + 1; b < U.size(); ++b) EXPECT_GT((U[a] - U[b]).norm(), 4 * rf);
    }
    // Maximal: no remaining heavy center could be added.
    for (long i = 0; i < m; ++i) {
      if (weight(*w[i]) < thr) continue;
      bool blocked = false;
      for (const auto& u : U) blocked |= (*w[i] - u).norm() <= 4 * rf;
      EXPECT_TRUE(blocked) << "rep " << rep << " point " << i;
    }
    // Disjoint balls: size bound floor(1 / ((1 - eps) mu)).
    bool disjoint = true;
    for (std::size_t a = 0; a < U.size(); ++a)
      for (std::size_t b = a + 1; b < U.size(); ++b) disjoint &= (U[a] - U[b]).norm() > 4 * rf;
    if (disjoint) { EXPECT_LE(static_cast<double>(U.size()), std::floor(1.0 / ((1 - eps) * mu))); }
  }
}

TEST(RunListRegression, IdenticalTermsGiveOneCandidate) {
  std::mt19937_64 rng(3);
  QuadLoss L = condreg::testing::random_loss(20, 2, rng);
  std::vector<QuadLoss> losses(5, L);
  std::vector<long> sizes(5, 20);
  ListRegressionParams p;
  p.mu = 0.5;
  p.num_points = 100;
  p.r_init = 100;
  p.r_final = 1;
  p.s0 = 0.01;
  p.epsilon = 0.05;
  ListRegressionResult res = run_list_regression(losses, sizes, p, 7);
  // r: 100, 50, ..., 0.78125 are processed, then the loop stops below r_final / 2.
  EXPECT_EQ(res.iterations, 8);
  ASSERT_EQ(res.radius_schedule.size(), 9u);
  for (std::size_t i = 1; i < res.radius_schedule.size(); ++i)
    EXPECT_DOUBLE_EQ(res.radius_schedule[i], res.radius_schedule[i - 1] / 2);
  ASSERT_EQ(res.candidates.size(), 1u);
  // No second heavy ball farther than 4 r_final from the first.
  for (const auto& w : res.w_hat) {
    ASSERT_TRUE(w.has_value());
    EXPECT_LE((*w - res.candidates[0]).norm(), 4 * p.r_final);
  }
  EXPECT_LT((res.candidates[0] - unconstrained_minimizer(L)).norm(), 3 * p.r_final);
}

TEST(RunListRegression, DeterministicPerSeed) {
  std::mt19937_64 rng(4);
  std::vector<QuadLoss> losses;
  for (int i = 0; i < 6; ++i) losses.push_back(condreg::testing::random_loss(15, 1, rng));
  std::vector<long> sizes(6, 15);
  ListRegressionParams p;
  p.mu = 0.5;
  p.num_points = 90;
  p.r_init = 4;
  p.r_final = 0.5;
  p.threads = 3;
  ListRegressionResult a = run_list_regression(losses, sizes, p, 11);
  p.threads = 1;
  ListRegressionResult b = run_list_regression(losses, sizes, p, 11);
  ASSERT_EQ(a.candidates.size(), b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) EXPECT_EQ(a.candidates[i], b.candidates[i]);
  EXPECT_EQ(a.w_hat, b.w_hat);
}

TEST(RunListRegression, ParameterErrors) {
  std::mt19937_64 rng(5);
  std::vector<QuadLoss> losses{condreg::testing::random_loss(5, 1, rng)};
  ListRegressionParams p;
  p.num_points = 5;
  p.r_init = 1;
  p.r_final = 2;
  EXPECT_THROW(run_list_regression(losses, {5}, p, 0), ParameterError);
  p.r_final = 0.5;
  EXPECT_THROW(run_list_regression(losses, {5, 5}, p, 0), ParameterError);
  p.mu = 0.0;
  EXPECT_THROW(run_list_regression(losses, {5}, p, 0), ParameterError);
}

TEST(MixSeed, SpreadsNeighbouringInputs) {
  EXPECT_NE(mix_seed(1, 0, 0), mix_seed(1, 0, 1));
  EXPECT_NE(mix_seed(1, 1, 0), mix_seed(1, 0, 1));
  EXPECT_EQ(mix_seed(9, 2, 3), mix_seed(9, 2, 3));
}
