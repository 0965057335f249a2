// Command-line front end: instance generation, solving, MIP export, benchmarks
// and structure metrics.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dagopt/algorithms.hpp"
#include "dagopt/datagen.hpp"
#include "dagopt/harness.hpp"
#include "dagopt/mip.hpp"

namespace fs = std::filesystem;
using namespace dagopt;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
}

std::vector<std::string> default_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < m; ++j) names.push_back("f" + std::to_string(j + 1));
  return names;
}

int cmd_gen(const std::string& suite_name, const std::string& out, std::uint64_t seed) {
  const SuiteKind kind = parse_suite_kind(suite_name);
  fs::create_directories(out);
  const auto entries = suite(kind, seed);
  std::ofstream manifest(fs::path(out) / "manifest.csv");
  manifest << "id,m,n,density_kind,density,seed,lambdas\n";
  for (const auto& e : entries) {
    const Instance inst = make_instance(e.spec, e.id);
    const auto names = default_names(e.spec.m);
    write_csv(inst.data.values(), names, (fs::path(out) / (e.id + ".csv")).string());
    write_edges(edges_of(inst.truth.coefficients, names, 0.0), (fs::path(out) / (e.id + "_truth.csv")).string());

    nlohmann::ordered_json spec;
    spec["id"] = e.id;
    spec["suite"] = to_string(kind);
    spec["m"] = e.spec.m;
    spec["n"] = e.spec.n;
    spec["density_mode"] = e.spec.mode == DensityMode::kSparse ? "s" : "d";
    spec["density"] = e.spec.density;
    spec["arc_probability"] = e.spec.arc_probability();
    spec["seed"] = e.spec.seed;
    spec["lambdas"] = e.lambdas.values;
    spec["generating_order"] = std::vector<int>(inst.truth.generating_order.positions().begin(),
                                                inst.truth.generating_order.positions().end());
    write_text(fs::path(out) / (e.id + ".json"), spec.dump(2) + "\n");

    std::string lambdas;
    for (double l : e.lambdas.values) lambdas += (lambdas.empty() ? "" : " ") + format_double(l);
    manifest << e.id << ',' << e.spec.m << ',' << e.spec.n << ',' << spec["density_mode"].get<std::string>() << ','
             << format_double(e.spec.density) << ',' << e.spec.seed << ',' << lambdas << "\n";
  }
  std::cout << "wrote " << entries.size() << " instances to " << out << "\n";
  return 0;
}

int cmd_solve(const std::string& data, bool no_header, const std::string& method_name, double lambda,
              std::uint64_t seed, const std::string& out, const std::string& edges_out) {
  const Method method = parse_method(method_name);
  if (is_mip(method) || method == Method::kExact) {
    throw std::invalid_argument("solve supports gd, ir, gd10 and ir10");
  }
  const Dataset x = load_csv(data, !no_header);
  auto names = x.feature_names();
  if (names.empty()) names = default_names(x.m());
  const PenaltySpec pen(lambda);
  const LassoObjective f(x, pen);
  const Algorithm algo = method == Method::kGd || method == Method::kGd10 ? Algorithm::kGd : Algorithm::kIr;
  const Matrix merit = merit_scores(x);
  const auto seeds = method_seeds(method, seed);
  const MultiStartResult result = multi_start(algo, f, merit, seeds);
  const Solution& best = result.best;

  nlohmann::ordered_json j;
  j["data"] = fs::path(data).filename().string();
  j["method"] = to_string(method);
  j["lambda"] = lambda;
  j["seed"] = seed;
  j["n"] = x.n();
  j["m"] = x.m();
  j["objective"] = best.objective;
  j["arc_count"] = arc_count(best);
  j["positions"] = std::vector<int>(best.order.positions().begin(), best.order.positions().end());
  std::vector<std::string> sequence;
  for (int node : best.order.sequence()) sequence.push_back(names[node]);
  j["order"] = sequence;
  j["order_hash"] = best.order.hash();
  nlohmann::ordered_json edges = nlohmann::json::array();
  const auto edge_list = edges_of(best.y, names);
  for (const auto& e : edge_list) edges.push_back({{"from", e.from}, {"to", e.to}, {"coef", e.coef}});
  j["edges"] = edges;
  nlohmann::ordered_json runs = nlohmann::json::array();
  for (const auto& r : result.runs) {
    nlohmann::ordered_json run;
    run["seed"] = r.seed;
    if (r.solution) {
      run["objective"] = r.solution->objective;
    } else {
      run["error"] = r.error;
    }
    runs.push_back(run);
  }
  j["runs"] = runs;
  write_text(out, j.dump(2) + "\n");
  if (!edges_out.empty()) write_edges(edge_list, edges_out);
  std::cout << to_string(method) << " objective " << format_double(best.objective) << " arcs " << arc_count(best)
            << "\n";
  return 0;
}

int cmd_export(const std::string& data, bool no_header, const std::string& model_name, double lambda,
               double big_m, const std::string& out) {
  const ModelKind kind = parse_model_kind(model_name);
  const Dataset x = load_csv(data, !no_header);
  const PenaltySpec pen(lambda);
  const double m_value = big_m > 0.0 ? big_m : estimate_big_m(x, pen);
  const MipModel model = build_model(kind, x, pen, m_value);
  export_lp(model, out);
  fs::path sidecar(out);
  sidecar.replace_extension(".json");
  write_text(sidecar, sidecar_json(model));
  std::cout << "MIP" << to_string(kind) << ": " << model.binary_count() << " binaries, " << model.continuous_count()
            << " continuous, " << model.constraints().size() << " rows, big M " << format_double(m_value) << "\n";
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out, int jobs) {
  ExperimentConfig config = ExperimentConfig::load(config_path);
  if (jobs > 0) config.jobs = static_cast<unsigned>(jobs);
  const ExperimentResult result = run_experiment(config);
  write_reports(result, config, out);
  std::size_t failed = 0;
  for (const auto& r : result.runs) failed += r.ok ? 0 : 1;
  std::cout << "bench: " << result.runs.size() << " runs (" << failed << " failed) written to " << out << "\n";
  return failed ? 2 : 0;
}

int cmd_metrics(const std::string& pred, const std::string& truth) {
  const auto truth_edges = read_edges(truth);
  const auto pred_edges = read_edges(pred);
  std::vector<std::string> names;
  auto note = [&](const std::string& s) {
    if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
  };
  for (const auto& e : truth_edges) {
    note(e.from);
    note(e.to);
  }
  for (const auto& e : pred_edges) {
    note(e.from);
    note(e.to);
  }
  const BinaryAdjacency z_true = adjacency_from_edges(truth_edges, names);
  const BinaryAdjacency z_hat = adjacency_from_edges(pred_edges, names);
  const TruePositive tp = true_positive(z_hat, z_true);
  nlohmann::ordered_json j;
  j["true_arcs"] = z_true.count();
  j["predicted_arcs"] = z_hat.count();
  j["dTP"] = tp.dtp;
  j["uTP"] = tp.utp;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclicity-constrained regression: search, MIP export and benchmarks"};
  app.require_subcommand(1);

  std::string suite_name, out, data, method = "gd10", model = "to", config, pred, truth, edges_out;
  std::uint64_t seed = 0;
  double lambda = 0.1;
  double big_m = 0.0;
  int jobs = 0;
  bool no_header = false;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic suite");
  gen->add_option("--suite", suite_name, "sparse | dense | highdim")->required();
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--seed", seed, "Master seed");

  auto* solve = app.add_subcommand("solve", "Search for a DAG on a CSV dataset");
  solve->add_option("--data", data, "CSV file (header row expected)")->required()->check(CLI::ExistingFile);
  solve->add_option("--method", method, "gd | ir | gd10 | ir10");
  solve->add_option("--lambda", lambda, "L1 penalty")->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", seed, "Seed");
  solve->add_option("--out", out, "Result JSON")->required();
  solve->add_option("--edges", edges_out, "Also write the selected arcs as from,to,coef");
  solve->add_flag("--no-header", no_header, "CSV has no header row");

  auto* exp = app.add_subcommand("export-mip", "Write a MIP model in LP format plus a JSON sidecar");
  exp->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
  exp->add_option("--model", model, "to | in | cp");
  exp->add_option("--lambda", lambda, "L1 penalty")->check(CLI::NonNegativeNumber);
  exp->add_option("--big-m", big_m, "Override the estimated big M");
  exp->add_option("--out", out, "LP file")->required();
  exp->add_flag("--no-header", no_header, "CSV has no header row");

  auto* bench = app.add_subcommand("bench", "Run an experiment described by a JSON config");
  bench->add_option("--config", config, "Config JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out, "Output directory")->required();
  bench->add_option("--jobs", jobs, "Worker threads (overrides the config)");

  auto* metrics = app.add_subcommand("metrics", "Directed/undirected true-positive rates");
  metrics->add_option("--pred", pred, "Predicted edges CSV")->required()->check(CLI::ExistingFile);
  metrics->add_option("--truth", truth, "True edges CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(suite_name, out, seed);
    if (*solve) return cmd_solve(data, no_header, method, lambda, seed, out, edges_out);
    if (*exp) return cmd_export(data, no_header, model, lambda, big_m, out);
    if (*bench) return cmd_bench(config, out, jobs);
    if (*metrics) return cmd_metrics(pred, truth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
