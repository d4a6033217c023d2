#include "condreg/terms.h"

#include <algorithm>

#include "condreg/errors.h"

namespace condreg {

long term_count(long n, long k) {
  long total = 0;
  long binom = 1;  // C(n, j)
  for (long j = 1; j <= k; ++j) {
    binom = binom * (n - j + 1) / j;
    total += binom * (1L << j);
  }
  return total;
}

std::vector<Term> enumerate_terms(long n, long k) {
  if (n < 1) throw ParameterError("enumerate_terms: n must be >= 1");
  if (k < 1 || k > n) throw ParameterError("enumerate_terms: need 1 <= k <= n");
  std::vector<Term> out;
  out.reserve(term_count(n, k));
  for (long arity = 1; arity <= k; ++arity) {
    // Attribute subsets in lexicographic order.
    std::vector<long> attrs(arity);
    for (long j = 0; j < arity; ++j) attrs[j] = j;
    while (true) {
      for (long bits = 0; bits < (1L << arity); ++bits) {
        Term t;
        for (long j = 0; j < arity; ++j)
          t.literals.push_back({attrs[j], ((bits >> (arity - 1 - j)) & 1) != 0});
        out.push_back(std::move(t));
      }
      long j = arity - 1;
      while (j >= 0 && attrs[j] == n - arity + j) --j;
      if (j < 0) break;
      ++attrs[j];
      for (long q = j + 1; q < arity; ++q) attrs[q] = attrs[q - 1] + 1;
    }
  }
  return out;
}

bool satisfies(const Conjunction& term, const std::uint8_t* row) {
  for (const auto& lit : term)
    if (!lit.holds(row)) return false;
  return true;
}

bool dnf_satisfies(const Dnf& dnf, const std::uint8_t* row) {
  for (const auto& t : dnf.terms)
    if (satisfies(t, row)) return true;
  return false;
}

long max_attribute(const Dnf& dnf) {
  long m = -1;
  for (const auto& t : dnf.terms)
    for (const auto& l : t) m = std::max(m, l.attribute);
  return m;
}

void assign_members(std::vector<Term>& terms, const Dataset& data) {
  for (auto& t : terms) {
    for (const auto& l : t.literals)
      if (l.attribute < 0 || l.attribute >= data.n())
        throw ParameterError("term attribute out of range");
    t.members.clear();
    for (long i = 0; i < data.size(); ++i)
      if (satisfies(t.literals, data.x.row(i).data())) t.members.push_back(i);
  }
}

std::vector<long> covered_rows(const Dnf& dnf, const Dataset& data) {
  if (max_attribute(dnf) >= data.n())
    throw ValidationError("DNF refers to attribute " + std::to_string(max_attribute(dnf) + 1) +
                          " but the data has " + std::to_string(data.n()));
  std::vector<long> rows;
  for (long i = 0; i < data.size(); ++i)
    if (dnf_satisfies(dnf, data.x.row(i).data())) rows.push_back(i);
  return rows;
}

std::vector<long> DisjointInstance::sizes() const {
  std::vector<long> s;
  s.reserve(terms.size());
  for (const auto& t : terms) s.push_back(t.weight());
  return s;
}

DisjointInstance disjointify(const Dataset& data, const std::vector<Term>& terms) {
  DisjointInstance out;
  out.terms = terms;
  out.num_points = data.size();
  out.original_index.resize(terms.size());
  out.sub.resize(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    out.original_index[j] = static_cast<long>(j);
    const auto& m = terms[j].members;
    TermData& s = out.sub[j];
    s.y.resize(static_cast<long>(m.size()), data.d());
    s.z.resize(static_cast<long>(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r) {
      s.y.row(r) = data.y.row(m[r]);
      s.z(r) = data.z(m[r]);
      out.provenance.emplace_back(static_cast<long>(j), m[r]);
    }
  }
  return out;
}

DisjointInstance prune_small(const DisjointInstance& instance, double epsilon, double mu, long N) {
  if (epsilon < 0 || mu <= 0 || N < 0) throw ParameterError("prune_small: bad parameters");
  const double threshold = epsilon * mu * static_cast<double>(N);
  DisjointInstance out;
  out.num_points = instance.num_points;
  for (long j = 0; j < instance.num_terms(); ++j) {
    if (static_cast<double>(instance.terms[j].weight()) < threshold) continue;
    const long pos = out.num_terms();
    out.terms.push_back(instance.terms[j]);
    out.original_index.push_back(instance.original_index[j]);
    out.sub.push_back(instance.sub[j]);
    for (long i : instance.terms[j].members) out.provenance.emplace_back(pos, i);
  }
  if (out.terms.empty())
    throw EmptyModelError("every term has fewer than epsilon*mu*N = " + std::to_string(threshold) +
                          " points; lower epsilon or mu");
  return out;
}

}  // namespace condreg
