// condreg: fit / synth / eval front end.
//
// Exit codes: 0 success, 1 bad input or configuration (or a failed run),
// 2 no candidate met the coverage requirement (the report is still written).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "condreg/dataset.h"
#include "condreg/json_io.h"
#include "condreg/pipeline.h"
#include "condreg/synth.h"

namespace {

using condreg::RunConfig;
using nlohmann::json;

struct FitArgs {
  std::string data, out, config_path, trace_path;
  long n = -1, d = -1;
  RunConfig flags;
  std::string epsilon;
};

struct SynthArgs {
  std::string family, out, planted, config_path;
  long n = 6, k = 2, terms = 4, N = 1000, d = 10;
  double mu = 0.25, noise = -1.0;
  std::vector<double> w_star{-1.5};
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string data, solution;
};

// Values given on the command line win over the JSON config file.
RunConfig merge_config(const FitArgs& a, CLI::App& fit) {
  RunConfig cfg;
  if (!a.config_path.empty()) condreg::apply_json(cfg, condreg::read_json_file(a.config_path));
  auto given = [&](const char* name) { return fit.get_option(name)->count() > 0; };
  const RunConfig& f = a.flags;
  if (given("--k")) cfg.k = f.k;
  if (given("--mu")) cfg.mu = f.mu;
  if (given("--gamma")) cfg.gamma = f.gamma;
  if (given("--delta")) cfg.delta = f.delta;
  if (given("--epsilon")) cfg.epsilon = std::stod(a.epsilon);
  if (given("--s0")) cfg.s0 = f.s0;
  if (given("--t-est")) cfg.t_est = f.t_est;
  if (given("--kappa")) cfg.kappa = f.kappa;
  if (given("--r-init")) cfg.r_init = f.r_init;
  if (given("--r-final")) cfg.r_final = f.r_final;
  if (given("--tol")) cfg.tol = f.tol;
  if (given("--cq")) cfg.c_q = f.c_q;
  if (given("--crho")) cfg.c_rho = f.c_rho;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--verbose")) cfg.verbose = true;
  return cfg;
}

int run_fit(const FitArgs& a, CLI::App& fit) {
  RunConfig cfg = merge_config(a, fit);
  cfg.validate();
  condreg::Dataset data = a.n > 0 && a.d > 0 ? condreg::load_csv(a.data, a.n, a.d)
                                             : condreg::load_csv(a.data);
  condreg::Report rep = condreg::run_fit(data, cfg);
  condreg::write_json_file(a.out, condreg::to_json(rep));
  if (cfg.verbose) {
    std::string path = a.trace_path.empty() ? a.out + ".trace.jsonl" : a.trace_path;
    std::ofstream tr(path);
    for (const auto& line : rep.trace) tr << line.dump() << '\n';
  }
  if (!rep.selected) {
    std::cerr << "selection failed: " << rep.selection_error << "\n";
    return 2;
  }
  const auto& s = rep.candidates[*rep.selected].solution;
  std::cout << "candidates " << rep.candidates.size() << ", selected " << *rep.selected
            << ": coverage " << s.coverage << ", cond_loss " << s.cond_loss << "\n";
  return 0;
}

void apply_synth_json(SynthArgs& a, const json& j, CLI::App& app) {
  for (const auto& [raw, v] : j.items()) {
    std::string key = raw;
    std::replace(key.begin(), key.end(), '_', '-');
    static const std::set<std::string> known = {"n",  "k",     "terms",  "N",    "d",
                                                "mu", "noise", "w-star", "seed"};
    if (!known.count(key)) throw condreg::ParameterError("unknown synth config key '" + raw + "'");
    if (app.get_option("--" + key)->count() > 0) continue;
    if (key == "n") a.n = v.get<long>();
    else if (key == "k") a.k = v.get<long>();
    else if (key == "terms") a.terms = v.get<long>();
    else if (key == "N") a.N = v.get<long>();
    else if (key == "d") a.d = v.get<long>();
    else if (key == "mu") a.mu = v.get<double>();
    else if (key == "noise") a.noise = v.get<double>();
    else if (key == "w-star")
      a.w_star = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
    else a.seed = v.get<std::uint64_t>();
  }
}

int run_synth(SynthArgs a, CLI::App& app) {
  if (!a.config_path.empty()) apply_synth_json(a, condreg::read_json_file(a.config_path), app);
  std::optional<condreg::PlantedSpec> planted;
  condreg::Dataset data;
  if (a.family == "line_uniform") {
    condreg::LineUniformParams p;
    p.n = a.n;
    p.k = a.k;
    p.num_terms = a.terms;
    p.mu = a.mu;
    p.N = a.N;
    p.w_star = Eigen::Map<const condreg::Vector>(a.w_star.data(), static_cast<long>(a.w_star.size()));
    if (a.noise >= 0) p.noise_sigma = a.noise;
    p.seed = a.seed;
    auto r = condreg::synth_line_uniform(p);
    data = std::move(r.data);
    planted = r.planted;
  } else if (a.family == "sine") {
    data = condreg::synth_sine(a.N, a.noise >= 0 ? a.noise : 0.1, a.seed);
  } else {
    condreg::ScaleUpParams p;
    p.n = a.n;
    p.d = a.d;
    p.N = a.N;
    p.mu = a.mu;
    p.num_terms = a.terms;
    p.k = a.k;
    if (a.noise >= 0) p.noise_variance = a.noise * a.noise;
    p.seed = a.seed;
    auto r = condreg::synth_scale_up(p);
    data = std::move(r.data);
    planted = r.planted;
  }
  condreg::write_csv(a.out, data);
  if (planted) {
    std::string path = a.planted.empty() ? a.out + ".planted.json" : a.planted;
    condreg::write_json_file(path, condreg::planted_to_json(*planted));
  }
  std::cout << "wrote " << data.size() << " rows to " << a.out << "\n";
  return 0;
}

int run_eval(const EvalArgs& a) {
  condreg::CandidateSolution sol = condreg::solution_from_json(condreg::read_json_file(a.solution));
  condreg::Dataset data = condreg::load_csv(a.data);
  if (condreg::max_attribute(sol.dnf) >= data.n() || sol.u.size() != data.d())
    throw condreg::ValidationError("solution expects n > " +
                                   std::to_string(condreg::max_attribute(sol.dnf)) + ", d = " +
                                   std::to_string(sol.u.size()) + "; data has n = " +
                                   std::to_string(data.n()) + ", d = " + std::to_string(data.d()));
  condreg::CandidateSolution e = condreg::evaluate_candidate(sol.u, sol.dnf, data);
  json out = {{"coverage", e.coverage}, {"covered", e.covered}, {"cond_loss", e.cond_loss}};
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional linear regression: k-DNF condition + linear predictor"};
  app.require_subcommand(1);

  FitArgs fa;
  CLI::App* fit = app.add_subcommand("fit", "fit a condition and predictor to a CSV file");
  fit->add_option("--data", fa.data, "input CSV (x_1..x_n, y_1..y_d, z)")->required();
  fit->add_option("--out", fa.out, "report JSON path")->required();
  fit->add_option("--n", fa.n, "number of Boolean attributes (default: from header)");
  fit->add_option("--d", fa.d, "number of features (default: from header)");
  fit->add_option("--config", fa.config_path, "JSON config; flags override it");
  fit->add_option("--trace", fa.trace_path, "JSON-lines trace path (with --verbose)");
  RunConfig& f = fa.flags;
  fit->add_option("--k", f.k, "max literals per term");
  fit->add_option("--mu", f.mu, "fraction the condition must cover");
  fit->add_option("--gamma", f.gamma, "coverage slack");
  fit->add_option("--delta", f.delta, "failure probability");
  fit->add_option("--epsilon", fa.epsilon, "small-term pruning fraction (default gamma/t-est)");
  fit->add_option("--s0", f.s0, "spectral bound estimate S0");
  fit->add_option("--t-est", f.t_est, "expected number of terms in the condition");
  fit->add_option("--kappa", f.kappa, "ridge coefficient");
  fit->add_option("--r-init", f.r_init, "initial parameter radius");
  fit->add_option("--r-final", f.r_final, "final parameter radius");
  fit->add_option("--tol", f.tol, "SDP tolerance");
  fit->add_option("--cq", f.c_q, "decompositions per iteration multiplier");
  fit->add_option("--crho", f.c_rho, "padded decomposition radius multiplier");
  fit->add_option("--seed", f.seed, "random seed");
  fit->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  fit->add_flag("--verbose", f.verbose, "write a JSON-lines trace next to the report");

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "generate a benchmark dataset");
  synth->add_option("family", sa.family, "line_uniform | sine | scale_up")
      ->required()
      ->check(CLI::IsMember({"line_uniform", "sine", "scale_up"}));
  synth->add_option("--out", sa.out, "output CSV")->required();
  synth->add_option("--planted", sa.planted, "planted-spec JSON (default: <out>.planted.json)");
  synth->add_option("--config", sa.config_path, "JSON config; flags override it");
  synth->add_option("--n", sa.n, "Boolean attributes");
  synth->add_option("--k", sa.k, "literals per planted term");
  synth->add_option("--terms", sa.terms, "planted terms");
  synth->add_option("--N", sa.N, "rows");
  synth->add_option("--d", sa.d, "features (scale_up)");
  synth->add_option("--mu", sa.mu, "planted fraction");
  synth->add_option("--noise", sa.noise, "noise standard deviation");
  synth->add_option("--w-star", sa.w_star, "planted regression vector (line_uniform)");
  synth->add_option("--seed", sa.seed, "random seed");

  EvalArgs ea;
  CLI::App* ev = app.add_subcommand("eval", "score a fitted solution on a dataset");
  ev->add_option("--data", ea.data, "CSV to evaluate on")->required();
  ev->add_option("--solution", ea.solution, "fit report or solution JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return run_fit(fa, *fit);
    if (synth->parsed()) return run_synth(sa, *synth);
    if (ev->parsed()) return run_eval(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
