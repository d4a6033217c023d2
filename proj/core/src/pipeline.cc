#include "condreg/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "condreg/json_io.h"
#include "condreg/parallel.h"

namespace condreg {

using nlohmann::json;

int RunConfig::effective_threads() const {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void RunConfig::validate() const {
  auto frac = [](double v) { return v > 0 && v <= 1; };
  if (k < 1) throw ParameterError("k must be >= 1");
  if (!frac(mu)) throw ParameterError("mu must lie in (0, 1]");
  if (!frac(gamma)) throw ParameterError("gamma must lie in (0, 1]");
  if (!frac(delta)) throw ParameterError("delta must lie in (0, 1]");
  if (epsilon && !(*epsilon >= 0 && *epsilon < 1)) throw ParameterError("epsilon must lie in [0, 1)");
  if (!(s0 > 0)) throw ParameterError("s0 must be > 0");
  if (!(t_est > 0)) throw ParameterError("t-est must be > 0");
  if (!(kappa >= 0)) throw ParameterError("kappa must be >= 0");
  if (!(r_init > 0) || !(r_final > 0)) throw ParameterError("radii must be > 0");
  if (!(r_final < r_init)) throw ParameterError("r-final must be smaller than r-init");
  if (!(tol > 0)) throw ParameterError("tol must be > 0");
  if (!(c_q > 0) || !(c_rho > 0)) throw ParameterError("cq and crho must be > 0");
  if (threads < 0) throw ParameterError("threads must be >= 0");
  if (!(effective_epsilon() < 1)) throw ParameterError("gamma / t-est must be < 1");
}

namespace {

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

DisjointInstance drop_empty(const DisjointInstance& in) {
  DisjointInstance out;
  out.num_points = in.num_points;
  for (long j = 0; j < in.num_terms(); ++j) {
    if (in.terms[j].members.empty()) continue;
    const long pos = out.num_terms();
    out.terms.push_back(in.terms[j]);
    out.original_index.push_back(in.original_index[j]);
    out.sub.push_back(in.sub[j]);
    for (long i : in.terms[j].members) out.provenance.emplace_back(pos, i);
  }
  if (out.terms.empty()) throw EmptyModelError("no term is satisfied by any row");
  return out;
}

json soft_run_json(const SoftRunInfo& info) {
  json its = json::array();
  for (const auto& it : info.state->history)
    its.push_back({{"iteration", it.iteration},
                   {"trace", it.trace},
                   {"nonzero", it.nonzero},
                   {"objective", it.objective},
                   {"kkt_residual", it.kkt_residual},
                   {"sdp_iterations", it.sdp_iterations}});
  return {{"event", "soft_regression"},
          {"outer_iteration", info.outer_iteration},
          {"decomposition", info.decomposition},
          {"first_term", info.terms.empty() ? -1 : info.terms.front()},
          {"num_terms", info.terms.size()},
          {"radius", info.radius},
          {"lambda", info.state->lambda},
          {"trace_bound", info.state->trace_bound},
          {"completed", info.completed},
          {"iterations", its}};
}

}  // namespace

Report run_fit(const Dataset& data, const RunConfig& config, const SoftRunObserver& observer) {
  config.validate();
  data.validate();
  const auto t_start = Clock::now();
  Report rep;
  rep.config = config;
  rep.N = data.size();
  rep.n = data.n();
  rep.d = data.d();
  const int threads = config.effective_threads();

  auto t0 = Clock::now();
  std::vector<Term> terms = enumerate_terms(data.n(), config.k);
  assign_members(terms, data);
  rep.num_terms = static_cast<long>(terms.size());
  DisjointInstance inst =
      drop_empty(prune_small(disjointify(data, terms), config.effective_epsilon(), config.mu, data.size()));
  rep.num_terms_kept = inst.num_terms();
  rep.n_prime = inst.n_prime();
  std::vector<QuadLoss> losses;
  for (const auto& s : inst.sub) losses.push_back(build_quad_loss(s.y, s.z, config.kappa));
  for (long j = 0; j < inst.num_terms(); ++j) {
    double cond = condition_number(losses[j]);
    if (!(cond < 1e10))
      rep.warnings.push_back("term " + std::to_string(inst.original_index[j]) +
                             " is ill-conditioned; kappa >= " +
                             std::to_string(recommend_kappa(losses[j], 1e8)) + " would fix it");
  }
  rep.timing_ms.emplace_back("preprocess", ms_since(t0));

  ListRegressionParams lp;
  lp.mu = config.mu;
  lp.num_points = data.size();
  lp.s0 = config.s0;
  lp.epsilon = config.effective_epsilon();
  lp.delta = config.delta;
  lp.r_init = config.r_init;
  lp.r_final = config.r_final;
  lp.gamma = config.gamma;
  lp.t_est = config.t_est;
  lp.c_q = config.c_q;
  lp.c_rho = config.c_rho;
  lp.sdp.tol = config.tol;
  lp.sdp.hypothesis_radius = config.r_init;
  lp.threads = threads;
  rep.lambda = soft_lambda(config.mu, data.size(), config.t_est, config.s0 * config.r_init,
                           config.r_init);

  std::vector<json> soft_traces;
  std::mutex trace_mu;
  SoftRunObserver obs = [&](const SoftRunInfo& info) {
    if (observer) observer(info);
    if (config.verbose) {
      std::lock_guard lock(trace_mu);
      soft_traces.push_back(soft_run_json(info));
    }
  };
  t0 = Clock::now();
  rep.list = run_list_regression(losses, inst.sizes(), lp, config.seed, obs);
  rep.timing_ms.emplace_back("list_regression", ms_since(t0));
  for (const auto& w : rep.list.warnings) rep.warnings.push_back(w);

  t0 = Clock::now();
  const auto& U = rep.list.candidates;
  rep.candidates.resize(U.size());
  parallel_for(U.size(), threads, [&](std::size_t c) {
    CandidateRecord& rec = rep.candidates[c];
    CoverInstance ci = build_cover_instance(inst, losses, U[c], config.mu, config.gamma, config.t_est);
    CoverResult cr;
    try {
      cr = greedy_partial_cover(ci, data.size());
      rec.status = "ok";
    } catch (const PartialCoverError& e) {
      cr = e.partial();
      rec.status = "partial_cover";
      rec.message = e.what();
    }
    for (long j : cr.chosen) rec.terms.push_back(inst.original_index[j]);
    if (cr.dnf.terms.empty()) {
      rec.status = "empty";
      rec.solution.u = U[c];
      return;
    }
    rec.solution = evaluate_candidate(U[c], cr.dnf, data);
  });
  rep.timing_ms.emplace_back("cover", ms_since(t0));

  std::vector<CandidateSolution> eligible;
  std::vector<long> map;
  for (long c = 0; c < static_cast<long>(rep.candidates.size()); ++c) {
    rep.best_coverage = std::max(rep.best_coverage, rep.candidates[c].solution.coverage);
    if (rep.candidates[c].status != "ok") continue;
    eligible.push_back(rep.candidates[c].solution);
    map.push_back(c);
  }
  try {
    rep.selected = map.at(select_final(eligible, config.mu, config.gamma));
  } catch (const SelectionError& e) {
    rep.selection_error = e.what();
  }

  if (config.verbose) {
    std::sort(soft_traces.begin(), soft_traces.end(), [](const json& a, const json& b) {
      auto key = [](const json& j) {
        return std::tuple(j["outer_iteration"].get<int>(), j["decomposition"].get<long>(),
                          j["first_term"].get<long>());
      };
      return key(a) < key(b);
    });
    std::size_t s = 0;
    for (const auto& it : rep.list.trace) {
      while (s < soft_traces.size() && soft_traces[s]["outer_iteration"].get<int>() <= it.iteration)
        rep.trace.push_back(soft_traces[s++]);
      rep.trace.push_back({{"event", "list_iteration"},
                           {"iteration", it.iteration},
                           {"radius", it.radius},
                           {"rho", it.rho},
                           {"decompositions", it.num_decompositions},
                           {"assigned_before", it.assigned_before},
                           {"assigned", it.assigned_after},
                           {"clusters_per_h", it.clusters_per_h},
                           {"incomplete_runs", it.incomplete_runs}});
    }
    while (s < soft_traces.size()) rep.trace.push_back(soft_traces[s++]);
  }
  rep.timing_ms.emplace_back("total", ms_since(t_start));
  return rep;
}

json to_json(const RunConfig& c) {
  json j = {{"k", c.k},         {"mu", c.mu},           {"gamma", c.gamma},
            {"delta", c.delta}, {"epsilon", c.effective_epsilon()},
            {"s0", c.s0},       {"t-est", c.t_est},     {"kappa", c.kappa},
            {"r-init", c.r_init}, {"r-final", c.r_final}, {"tol", c.tol},
            {"cq", c.c_q},      {"crho", c.c_rho},      {"seed", c.seed},
            {"verbose", c.verbose}};
  return j;
}

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  for (const auto& [raw_key, v] : j.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    try {
      if (key == "k") c.k = v.get<long>();
      else if (key == "mu") c.mu = v.get<double>();
      else if (key == "gamma") c.gamma = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "epsilon") c.epsilon = v.get<double>();
      else if (key == "s0") c.s0 = v.get<double>();
      else if (key == "t-est") c.t_est = v.get<double>();
      else if (key == "kappa") c.kappa = v.get<double>();
      else if (key == "r-init") c.r_init = v.get<double>();
      else if (key == "r-final") c.r_final = v.get<double>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "cq") c.c_q = v.get<double>();
      else if (key == "crho") c.c_rho = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "verbose") c.verbose = v.get<bool>();
      else throw ParameterError("unknown config key '" + raw_key + "'");
    } catch (const json::exception& e) {
      throw ParameterError("config key '" + raw_key + "': " + e.what());
    }
  }
}

json to_json(const Report& r) {
  json cands = json::array();
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& c = r.candidates[i];
    json e = candidate_to_json(c.solution);
    e["index"] = i;
    e["status"] = c.status;
    e["terms"] = c.terms;
    if (!c.message.empty()) e["message"] = c.message;
    cands.push_back(std::move(e));
  }
  json trace = json::array();
  for (const auto& it : r.list.trace)
    trace.push_back({{"iteration", it.iteration},
                     {"radius", it.radius},
                     {"rho", it.rho},
                     {"decompositions", it.num_decompositions},
                     {"assigned", it.assigned_after},
                     {"clusters_per_h", it.clusters_per_h},
                     {"incomplete_runs", it.incomplete_runs}});
  long assigned = 0;
  for (const auto& w : r.list.w_hat) assigned += w.has_value();
  json timing = json::object();
  for (const auto& [k, v] : r.timing_ms) timing[k] = v;
  json out = {
      {"schema_version", 1},
      {"config", to_json(r.config)},
      {"data",
       {{"N", r.N}, {"n", r.n}, {"d", r.d}, {"num_terms", r.num_terms},
        {"num_terms_kept", r.num_terms_kept}, {"n_prime", r.n_prime}}},
      {"lambda", r.lambda},
      {"candidates", cands},
      {"selected", r.selected ? json(*r.selected) : json(nullptr)},
      {"selected_solution",
       r.selected ? candidate_to_json(r.candidates[*r.selected].solution) : json(nullptr)},
      {"list_regression",
       {{"iterations", r.list.iterations},
        {"radius_schedule", r.list.radius_schedule},
        {"assigned_terms", assigned},
        {"trace", trace}}},
      {"warnings", r.warnings},
      {"timing_ms", timing}};
  if (!r.selected) {
    out["selection_error"] = r.selection_error;
    out["best_coverage"] = r.best_coverage;
  }
  return out;
}

}  // namespace condreg
