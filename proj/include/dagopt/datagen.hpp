#pragma once

// Synthetic linear-Gaussian DAG instances and CSV input/output.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dagopt/graph.hpp"
#include "dagopt/lasso.hpp"
#include "dagopt/matrix.hpp"

namespace dagopt {

enum class DensityMode { kSparse, kDense };

struct InstanceSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  DensityMode mode = DensityMode::kSparse;
  /// Expected arcs per node (sparse) or expected adjacency-matrix density (dense).
  double density = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless 0 < s <= m-1 (sparse) or 0 < d < 1 (dense).
  void validate() const;
  /// Inclusion probability of each order-compatible arc:
  /// s/(m-1) when sparse, min(1, 2dm/(m-1)) when dense.
  double arc_probability() const;
  /// Short stable label such as "sparse_m20_n100_s1_r3".
  std::string label(std::size_t replicate) const;
};

struct GroundTruth {
  CoefficientMatrix coefficients;
  BinaryAdjacency adjacency;
  TopologicalOrder generating_order;
};

/// Positive, strictly descending penalty values.
struct LambdaGrid {
  std::vector<double> values;
  void validate() const;
};

/// Random order, each compatible arc kept with arc_probability(), magnitudes
/// uniform on [0.1, 1] with a random sign.
GroundTruth random_dag(const InstanceSpec& spec);

/// Raw samples x_k = sum_j B_jk x_j + e_k with e ~ N(0, 1), sources first.
Matrix sample_raw(const GroundTruth& truth, std::size_t n, std::uint64_t seed);

/// sample_raw followed by standardize().
Dataset sample_data(const GroundTruth& truth, std::size_t n, std::uint64_t seed);

/// Centers every column and scales it to unit population standard deviation
/// (so x_j^T x_j = n). Throws std::invalid_argument naming a constant column.
Dataset standardize(const Matrix& raw, std::vector<std::string> names = {});

struct Instance {
  InstanceSpec spec;
  std::string id;
  GroundTruth truth;
  Dataset data;
};

/// Truth from spec.seed, data from a seed derived from it.
Instance make_instance(const InstanceSpec& spec, std::string id);

enum class SuiteKind { kSparse, kDense, kHighdim };
SuiteKind parse_suite_kind(const std::string& text);
std::string to_string(SuiteKind kind);

struct SuiteEntry {
  InstanceSpec spec;
  std::string id;
  LambdaGrid lambdas;
};

inline constexpr int kReplicatesPerCell = 10;

/// Cartesian grid of a suite. `lambdas` is used as-is for sparse/highdim
/// suites and as the lambda0 list for dense ones.
struct SuiteGrid {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> m_values;
  std::vector<double> densities;
  std::vector<double> lambdas;
  int replicates = kReplicatesPerCell;
};

SuiteGrid default_grid(SuiteKind kind);

/// The benchmark suites: sparse (360 specs), dense (360), highdim (90).
/// Instance seeds are derived from master_seed and the entry index.
std::vector<SuiteEntry> suite(SuiteKind kind, std::uint64_t master_seed);
std::vector<SuiteEntry> suite(SuiteKind kind, std::uint64_t master_seed, const SuiteGrid& grid);

/// lambda = lambda0 * 10^-(10d - 1)
double dense_lambda(double lambda0, double d);

// CSV

/// Numeric CSV; names come from the header or default to f1..fm. Errors name
/// the offending row and column.
Dataset load_csv(const std::string& path, bool has_header);
Dataset parse_csv(std::istream& in, bool has_header, const std::string& source = "<stream>");
/// Raw numeric matrix, no standardization.
Matrix parse_csv_matrix(std::istream& in, bool has_header, std::vector<std::string>* names,
                        const std::string& source = "<stream>");

void write_csv(const Matrix& values, const std::vector<std::string>& names, const std::string& path);

struct Edge {
  std::string from;
  std::string to;
  double coef = 0.0;
};

/// from,to,coef rows for every nonzero off-diagonal entry (column-major scan).
std::vector<Edge> edges_of(const CoefficientMatrix& y, const std::vector<std::string>& names,
                           double tol = kDefaultSupportTol);
void write_edges(const std::vector<Edge>& edges, const std::string& path);
std::vector<Edge> read_edges(const std::string& path);

/// Adjacency over `names` from an edge list; throws on unknown names.
BinaryAdjacency adjacency_from_edges(const std::vector<Edge>& edges, const std::vector<std::string>& names);

std::string format_double(double v);  // %.17g

}  // namespace dagopt
