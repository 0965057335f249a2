#pragma once

// Metrics, experiment orchestration and CSV reports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagopt/algorithms.hpp"
#include "dagopt/datagen.hpp"
#include "dagopt/graph.hpp"
#include "dagopt/mip.hpp"

namespace dagopt {

/// gap_i = 100 (F_i - F_min) / F_min, or 100 (F_i - F_min) when F_min = 0.
/// Non-finite entries are ignored when taking the minimum and map to NaN.
/// Throws std::invalid_argument when no entry is finite.
std::vector<double> delta_sol(std::span<const double> objectives);

struct TruePositive {
  double dtp = 0.0;
  double utp = 0.0;
};

/// Directed and undirected recall of the true arcs. Throws on an empty truth.
TruePositive true_positive(const BinaryAdjacency& z_hat, const BinaryAdjacency& z_true);

enum class Method { kGd, kIr, kGd10, kIr10, kExact, kMipTo, kMipIn, kMipCp };

std::string to_string(Method method);
/// Accepts names such as "GD10", "ir", "EXACT", "MIPto-export", "mipcp".
Method parse_method(const std::string& text);
bool is_mip(Method method);

/// Seeds used by a method for one run: one for GD/IR, ten for GD10/IR10.
std::vector<std::uint64_t> method_seeds(Method method, std::uint64_t seed);

struct RunRecord {
  std::string instance_id;
  std::string method;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string density_kind;  // "s", "d" or "" for CSV inputs
  double density = 0.0;
  double lambda = 0.0;
  double objective = 0.0;  // NaN for MIP export rows and failures
  std::size_t arc_count = 0;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t order_hash = 0;
  double delta_sol = 0.0;  // NaN where not applicable
  std::size_t mip_binaries = 0;
  std::size_t mip_constraints = 0;
  bool ok = true;
  std::string error;
};

struct AggregateRow {
  std::string key;    // n, m, s, d or lambda
  std::string group;  // value of the key
  std::string method;
  std::size_t runs = 0;
  double mean_time = 0.0;
  double mean_delta_sol = 0.0;  // NaN for MIP rows
  double mean_arc_count = 0.0;
};

struct ScatterRow {
  std::string group;  // n|m|s-or-d|lambda
  std::string method;
  double mean_delta_sol = 0.0;  // percent
  double avg_density = 0.0;     // percent of the m(m-1) off-diagonal entries, all methods pooled
  double ln1p_avg_density = 0.0;
  double ln1p_100_delta = 0.0;  // ln(1 + 100 * delta as a fraction)
};

struct BigMSample {
  std::string instance_id;
  std::size_t m = 0;
  double s = 0.0;
  double lambda = 0.0;
  double b_hat = 0.0;  // max |beta| of the fit restricted to the implanted DAG
  double big_m = 0.0;
};

struct BigMRow {
  std::string group;  // m|s|lambda
  std::size_t count = 0;
  double b_min = 0.0, b_avg = 0.0, b_max = 0.0;
  double m_min = 0.0, m_avg = 0.0, m_max = 0.0;
  std::size_t violations = 0;  // instances with b_hat >= M
};

BigMSample big_m_sample(const Instance& inst, double lambda);
/// Groups samples by (m, s, lambda) in first-appearance order.
std::vector<BigMRow> validate_big_m(std::span<const BigMSample> samples);

struct ExperimentConfig {
  std::optional<SuiteKind> suite;
  SuiteGrid grid;  // filled from the suite defaults, then overridden
  std::vector<std::string> data_paths;
  bool has_header = true;
  std::vector<double> data_lambdas;  // penalty grid for CSV inputs
  std::vector<Method> methods;
  std::uint64_t master_seed = 0;
  unsigned jobs = 1;
  bool big_m_report = false;
  /// EXACT is skipped above this size.
  std::size_t exact_max_m = 6;

  /// Keys: suite | data (list), has_header, methods, lambdas, n, m,
  /// density, replicates, master_seed, jobs, bigm, exact_max_m.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::vector<BigMSample> big_m;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate(std::span<const RunRecord> runs, const std::string& key);
std::vector<ScatterRow> scatter(std::span<const RunRecord> runs);

/// runs.csv, agg_<key>.csv, scatter.csv and (if requested) bigm.csv.
void write_reports(const ExperimentResult& result, const ExperimentConfig& config, const std::string& out_dir);

void write_runs_csv(std::span<const RunRecord> runs, const std::string& path);
std::vector<RunRecord> read_runs_csv(const std::string& path);

}  // namespace dagopt
