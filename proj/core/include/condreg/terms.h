#pragma once

#include <cstddef>
#include <vector>

#include "condreg/dataset.h"

namespace condreg {

struct Literal {
  long attribute = 0;
  bool negated = false;

  bool holds(const std::uint8_t* row) const { return (row[attribute] != 0) != negated; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Conjunction = std::vector<Literal>;

struct Term {
  Conjunction literals;
  std::vector<long> members;  // sorted original row indices

  long weight() const { return static_cast<long>(members.size()); }
};

struct Dnf {
  std::vector<Conjunction> terms;
  friend bool operator==(const Dnf&, const Dnf&) = default;
};

// sum_{j=1..k} C(n,j) 2^j
long term_count(long n, long k);

// Conjunctions of 1..k literals over distinct attributes, ordered by
// (arity, attribute indices, negation bits). Members are left empty.
std::vector<Term> enumerate_terms(long n, long k);

bool satisfies(const Conjunction& term, const std::uint8_t* row);
bool dnf_satisfies(const Dnf& dnf, const std::uint8_t* row);
inline bool dnf_satisfies(const Dnf& dnf, const std::vector<std::uint8_t>& row) {
  return dnf_satisfies(dnf, row.data());
}
long max_attribute(const Dnf& dnf);

void assign_members(std::vector<Term>& terms, const Dataset& data);

// Sorted indices of rows satisfying the DNF.
std::vector<long> covered_rows(const Dnf& dnf, const Dataset& data);

struct TermData {
  Matrix y;
  Vector z;
};

// Each row copied once per term containing it; term j owns sub[j].
struct DisjointInstance {
  std::vector<Term> terms;
  std::vector<long> original_index;  // position in the enumeration before pruning
  std::vector<TermData> sub;
  // (term position, original row) for each duplicated point, grouped by term.
  std::vector<std::pair<long, long>> provenance;
  long num_points = 0;  // N of the raw dataset

  long num_terms() const { return static_cast<long>(terms.size()); }
  long n_prime() const { return static_cast<long>(provenance.size()); }
  std::vector<long> sizes() const;
};

DisjointInstance disjointify(const Dataset& data, const std::vector<Term>& terms);

// Drops terms with |t| < epsilon*mu*N. Throws EmptyModelError if none survive.
DisjointInstance prune_small(const DisjointInstance& instance, double epsilon, double mu, long N);

}  // namespace condreg
