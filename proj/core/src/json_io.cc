#include "condreg/json_io.h"

#include <fstream>

namespace condreg {

using nlohmann::json;

json dnf_to_json(const Dnf& dnf) {
  json out = json::array();
  for (const auto& t : dnf.terms) {
    json term = json::array();
    for (const auto& l : t) term.push_back({{"attr", l.attribute}, {"neg", l.negated}});
    out.push_back(std::move(term));
  }
  return out;
}

Dnf dnf_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("DNF must be a JSON array of terms");
  Dnf dnf;
  for (const auto& term : j) {
    if (!term.is_array() || term.empty())
      throw ParseError("each DNF term must be a non-empty array of literals");
    Conjunction c;
    for (const auto& lit : term) {
      if (!lit.is_object() || !lit.contains("attr") || !lit.contains("neg"))
        throw ParseError("literal must look like {\"attr\": i, \"neg\": bool}");
      long a = lit.at("attr").get<long>();
      if (a < 0) throw ParseError("literal attribute must be >= 0");
      for (const auto& prev : c)
        if (prev.attribute == a) throw ParseError("attribute repeated within a term");
      c.push_back({a, lit.at("neg").get<bool>()});
    }
    dnf.terms.push_back(std::move(c));
  }
  return dnf;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw ParseError("expected a number array");
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = j[i].get<double>();
  return v;
}

json planted_to_json(const PlantedSpec& spec) {
  return {{"w_star", vector_to_json(spec.w_star)},
          {"dnf_star", dnf_to_json(spec.dnf_star)},
          {"mu", spec.mu},
          {"noise_sigma", spec.noise_sigma}};
}

PlantedSpec planted_from_json(const json& j) {
  PlantedSpec s;
  s.w_star = vector_from_json(j.at("w_star"));
  s.dnf_star = dnf_from_json(j.at("dnf_star"));
  s.mu = j.at("mu").get<double>();
  s.noise_sigma = j.at("noise_sigma").get<double>();
  return s;
}

json candidate_to_json(const CandidateSolution& c) {
  return {{"u", vector_to_json(c.u)},
          {"dnf", dnf_to_json(c.dnf)},
          {"coverage", c.coverage},
          {"covered", c.covered},
          {"cond_loss", c.cond_loss}};
}

CandidateSolution solution_from_json(const json& j) {
  const json* src = &j;
  if (j.contains("selected_solution")) {
    if (j.at("selected_solution").is_null())
      throw ParseError("report has no selected solution");
    src = &j.at("selected_solution");
  }
  if (!src->contains("u") || !src->contains("dnf"))
    throw ParseError("solution JSON needs \"u\" and \"dnf\"");
  CandidateSolution c;
  c.u = vector_from_json(src->at("u"));
  c.dnf = dnf_from_json(src->at("dnf"));
  if (src->contains("coverage")) c.coverage = src->at("coverage").get<double>();
  if (src->contains("covered")) c.covered = src->at("covered").get<long>();
  if (src->contains("cond_loss")) c.cond_loss = src->at("cond_loss").get<double>();
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path);
}

}  // namespace condreg
