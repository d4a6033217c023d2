#pragma once

#include <vector>

#include "condreg/errors.h"
#include "condreg/loss.h"
#include "condreg/terms.h"

namespace condreg {

struct CoverInstance {
  std::vector<std::vector<long>> sets;  // sorted original row indices
  std::vector<double> costs;            // omega_j >= 0
  std::vector<Conjunction> labels;      // term each set came from
  double mu = 1.0;
  double gamma = 0.1;
  double t_est = 1.0;
};

// omega_j = |t_j| f_j(u) with the kappa term left out.
CoverInstance build_cover_instance(const DisjointInstance& instance,
                                   const std::vector<QuadLoss>& losses, const Vector& u,
                                   double mu, double gamma, double t_est);

struct CoverResult {
  std::vector<long> chosen;  // indices into instance.sets, in pick order
  long covered = 0;
  double cost = 0.0;
  Dnf dnf;
};

class PartialCoverError : public Error {
 public:
  PartialCoverError(const std::string& what, CoverResult partial, double coverage)
      : Error(what), partial_(std::move(partial)), coverage_(coverage) {}
  const CoverResult& partial() const { return partial_; }
  double coverage() const { return coverage_; }

 private:
  CoverResult partial_;
  double coverage_;
};

// Greedy ratio rule until (1 - 2 gamma/3) mu N rows are covered.
CoverResult greedy_partial_cover(const CoverInstance& instance, long N);

struct CandidateSolution {
  Vector u;
  Dnf dnf;
  double coverage = 0.0;
  long covered = 0;
  double cond_loss = 0.0;  // mean (z - <u,y>)^2 over covered rows
};

CandidateSolution evaluate_candidate(const Vector& u, const Dnf& dnf, const Dataset& data);

// Minimal cond_loss among coverage >= (1-gamma) mu; ties: higher coverage, lower index.
long select_final(const std::vector<CandidateSolution>& candidates, double mu, double gamma);

double harmonic(long n);

}  // namespace condreg
