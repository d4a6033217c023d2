#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "condreg/cover.h"
#include "condreg/synth.h"
#include "condreg/terms.h"

namespace condreg {

// [[{"attr": 0, "neg": false}, ...], ...]
nlohmann::json dnf_to_json(const Dnf& dnf);
Dnf dnf_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json planted_to_json(const PlantedSpec& spec);
PlantedSpec planted_from_json(const nlohmann::json& j);

nlohmann::json candidate_to_json(const CandidateSolution& c);
// Accepts either a bare {"u":..., "dnf":...} object or a fit report, in which
// case the selected candidate is used.
CandidateSolution solution_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace condreg
