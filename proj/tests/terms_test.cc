#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "condreg/errors.h"
#include "condreg/synth.h"
#include "condreg/terms.h"
#include "test_util.h"

using namespace condreg;

namespace {

long binom(long n, long k) {
  long r = 1;
  for (long j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
  return r;
}

// Brute force: every map attribute -> {absent, positive, negative} with 1..k present.
long brute_force_count(long n, long k) {
  long total = 0, states = 1;
  for (long a = 0; a < n; ++a) states *= 3;
  for (long s = 0; s < states; ++s) {
    long v = s, present = 0;
    for (long a = 0; a < n; ++a, v /= 3) present += (v % 3) != 0;
    total += present >= 1 && present <= k;
  }
  return total;
}

Dataset random_bool_data(long N, long n, std::mt19937_64& rng) {
  Dataset d;
  d.x.resize(N, n);
  std::bernoulli_distribution b(0.5);
  for (long i = 0; i < N; ++i)
    for (long a = 0; a < n; ++a) d.x(i, a) = b(rng);
  d.y = condreg::testing::random_matrix(N, 1, rng);
  d.z = condreg::testing::random_vector(N, rng);
  return d;
}

}  // namespace

TEST(EnumerateTerms, ExampleOneCount) {
  EXPECT_EQ(enumerate_terms(6, 2).size(), 72u);
  EXPECT_EQ(term_count(6, 2), 72);
}

TEST(EnumerateTerms, SingleAttribute) {
  auto t = enumerate_terms(1, 1);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].literals, (Conjunction{{0, false}}));
  EXPECT_EQ(t[1].literals, (Conjunction{{0, true}}));
}

TEST(EnumerateTerms, BruteForceOracle) {
  EXPECT_EQ(brute_force_count(4, 2), 32);
  EXPECT_EQ(enumerate_terms(4, 2).size(), 32u);
}

TEST(EnumerateTerms, ClosedFormUpToTenByThree) {
  for (long n = 1; n <= 10; ++n)
    for (long k = 1; k <= std::min(3L, n); ++k) {
      long closed = 0;
      for (long j = 1; j <= k; ++j) closed += binom(n, j) << j;
      EXPECT_EQ(static_cast<long>(enumerate_terms(n, k).size()), closed) << n << "," << k;
      if (n <= 7) { EXPECT_EQ(brute_force_count(n, k), closed); }
    }
}

TEST(EnumerateTerms, DistinctAttributesAndOrder) {
  auto terms = enumerate_terms(5, 3);
  std::set<std::vector<std::pair<long, bool>>> seen;
  std::size_t prev_arity = 0;
  for (const auto& t : terms) {
    EXPECT_GE(t.literals.size(), prev_arity);
    prev_arity = t.literals.size();
    std::vector<std::pair<long, bool>> key;
    for (std::size_t j = 0; j < t.literals.size(); ++j) {
      key.emplace_back(t.literals[j].attribute, t.literals[j].negated);
      if (j) { EXPECT_LT(t.literals[j - 1].attribute, t.literals[j].attribute); }
    }
    EXPECT_TRUE(seen.insert(key).second);
  }
  // Within one arity, terms are sorted by attributes then negation bits.
  auto key = [](const Term& t) {
    std::vector<long> a, b;
    for (const auto& l : t.literals) {
      a.push_back(l.attribute);
      b.push_back(l.negated);
    }
    return std::make_tuple(t.literals.size(), a, b);
  };
  EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end(),
                             [&](const Term& x, const Term& y) { return key(x) < key(y); }));
}

TEST(EnumerateTerms, KAboveNRejected) {
  EXPECT_THROW(enumerate_terms(2, 3), ParameterError);
  EXPECT_THROW(enumerate_terms(3, 0), ParameterError);
}

TEST(AssignMembers, AllZeroColumnGivesEmptyTerm) {
  Dataset d;
  d.x = BoolMatrix::Zero(4, 2);
  d.y = Matrix::Zero(4, 1);
  d.z = Vector::Zero(4);
  auto terms = enumerate_terms(2, 1);
  assign_members(terms, d);
  EXPECT_TRUE(terms[0].members.empty());       // x_1
  EXPECT_EQ(terms[1].members.size(), 4u);      // not x_1
  for (const auto& t : terms) EXPECT_FALSE(t.literals.empty());
}

TEST(AssignMembers, PointwiseOracle) {
  std::mt19937_64 rng(3);
  Dataset d = random_bool_data(20, 4, rng);
  auto terms = enumerate_terms(4, 2);
  assign_members(terms, d);
  for (const auto& t : terms) {
    std::vector<long> want;
    for (long i = 0; i < 20; ++i) {
      bool ok = true;
      for (const auto& l : t.literals) ok &= (d.x(i, l.attribute) == 1) == !l.negated;
      if (ok) want.push_back(i);
    }
    EXPECT_EQ(t.members, want);
  }
}

TEST(Disjointify, PointInTwoTermsIsDuplicated) {
  Dataset d;
  d.x.resize(2, 2);
  d.x << 1, 1, 0, 0;
  d.y = Matrix::Ones(2, 1);
  d.z = Vector::Zero(2);
  std::vector<Term> terms(2);
  terms[0].literals = {{0, false}};
  terms[1].literals = {{1, false}};
  assign_members(terms, d);
  DisjointInstance inst = disjointify(d, terms);
  ASSERT_EQ(inst.n_prime(), 2);
  EXPECT_EQ(inst.provenance[0], std::make_pair(0L, 0L));
  EXPECT_EQ(inst.provenance[1], std::make_pair(1L, 0L));
  // Row 1 satisfies neither term: no copies.
  for (const auto& p : inst.provenance) EXPECT_NE(p.second, 1);
}

TEST(Disjointify, CountsAndConservation) {
  std::mt19937_64 rng(4);
  Dataset d = random_bool_data(30, 4, rng);
  auto terms = enumerate_terms(4, 2);
  assign_members(terms, d);
  DisjointInstance inst = disjointify(d, terms);
  long pairs = 0;
  for (long i = 0; i < d.size(); ++i)
    for (const auto& t : terms) pairs += satisfies(t.literals, &d.x(i, 0));
  EXPECT_EQ(inst.n_prime(), pairs);
  EXPECT_LE(inst.n_prime(), d.size() * inst.num_terms());
  for (long j = 0; j < inst.num_terms(); ++j) {
    const auto& m = inst.terms[j].members;
    ASSERT_EQ(inst.sub[j].z.size(), static_cast<long>(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r) {
      EXPECT_EQ(inst.sub[j].y.row(r), d.y.row(m[r]));
      EXPECT_EQ(inst.sub[j].z(r), d.z(m[r]));
    }
  }
  // Each duplicated point belongs to exactly one term.
  std::set<std::pair<long, long>> uniq(inst.provenance.begin(), inst.provenance.end());
  EXPECT_EQ(static_cast<long>(uniq.size()), inst.n_prime());
}

TEST(PruneSmall, ThresholdComparison) {
  DisjointInstance inst;
  inst.num_points = 100;
  for (long size : {5, 12, 30}) {
    Term t;
    t.literals = {{0, false}};
    for (long i = 0; i < size; ++i) t.members.push_back(i);
    inst.terms.push_back(t);
    inst.original_index.push_back(inst.num_terms() - 1);
    inst.sub.push_back({Matrix::Zero(size, 1), Vector::Zero(size)});
    for (long i = 0; i < size; ++i) inst.provenance.emplace_back(inst.num_terms() - 1, i);
  }
  // epsilon * mu * N = 0.2 * 0.5 * 100 = 10
  DisjointInstance p = prune_small(inst, 0.2, 0.5, 100);
  EXPECT_EQ(p.sizes(), (std::vector<long>{12, 30}));
  EXPECT_EQ(p.original_index, (std::vector<long>{1, 2}));
  EXPECT_EQ(p.n_prime(), 42);
  for (const auto& pr : p.provenance) EXPECT_LT(pr.first, 2);
  EXPECT_EQ(prune_small(inst, 0.0, 0.5, 100).num_terms(), 3);
  EXPECT_THROW(prune_small(inst, 1.0, 1.0, 100), EmptyModelError);

  DisjointInstance again = prune_small(p, 0.2, 0.5, 100);
  EXPECT_EQ(again.sizes(), p.sizes());
  EXPECT_EQ(again.original_index, p.original_index);
  EXPECT_EQ(again.provenance, p.provenance);
}

TEST(PruneSmall, ExampleOneLosesLittleGoodMass) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    LineUniformParams lp;
    lp.seed = seed;
    SynthResult r = synth_line_uniform(lp);
    auto terms = enumerate_terms(6, 2);
    assign_members(terms, r.data);
    DisjointInstance inst = disjointify(r.data, terms);
    const double gamma = 0.1, t_est = 4, mu = 0.25;
    DisjointInstance kept = prune_small(inst, gamma / t_est, mu, r.data.size());
    std::set<long> kept_idx(kept.original_index.begin(), kept.original_index.end());
    // Good terms: nonempty and every member satisfies the planted condition.
    long good = 0, lost = 0;
    for (long j = 0; j < inst.num_terms(); ++j) {
      const auto& m = inst.terms[j].members;
      if (m.empty()) continue;
      bool all_good = std::all_of(m.begin(), m.end(), [&](long i) {
        return dnf_satisfies(r.planted.dnf_star, &r.data.x(i, 0));
      });
      if (!all_good) continue;
      good += static_cast<long>(m.size());
      if (!kept_idx.count(j)) lost += static_cast<long>(m.size());
    }
    ASSERT_GT(good, 0);
    EXPECT_LE(lost, gamma * good) << "seed " << seed;
  }
}

TEST(DnfSatisfies, Basics) {
  std::vector<std::uint8_t> x{1, 0};
  EXPECT_FALSE(dnf_satisfies(Dnf{}, x));
  Dnf t{{{{0, false}, {1, true}}}};
  EXPECT_TRUE(dnf_satisfies(t, x));
  EXPECT_FALSE(dnf_satisfies(t, std::vector<std::uint8_t>{1, 1}));
}

TEST(DnfSatisfies, TruthTableOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Dnf dnf = random_dnf(4, 2, 1 + trial % 4, false, rng());
    for (int v = 0; v < 16; ++v) {
      std::vector<std::uint8_t> x(4);
      for (int a = 0; a < 4; ++a) x[a] = (v >> a) & 1;
      bool want = false;
      for (const auto& t : dnf.terms) {
        bool all = true;
        for (const auto& l : t) all = all && (x[l.attribute] == (l.negated ? 0 : 1));
        want = want || all;
      }
      EXPECT_EQ(dnf_satisfies(dnf, x), want);
    }
  }
}

TEST(CoveredRows, RejectsForeignAttributes) {
  Dataset d;
  d.x = BoolMatrix::Zero(3, 2);
  d.y = Matrix::Zero(3, 1);
  d.z = Vector::Zero(3);
  EXPECT_THROW(covered_rows(Dnf{{{{5, false}}}}, d), ValidationError);
}
