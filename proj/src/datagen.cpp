#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dagopt/datagen.hpp"
#include "dagopt/random.hpp"

namespace dagopt {

void InstanceSpec::validate() const {
  if (m < 2) throw std::invalid_argument("InstanceSpec: m must be >= 2");
  if (n < 2) throw std::invalid_argument("InstanceSpec: n must be >= 2");
  if (mode == DensityMode::kSparse) {
    if (!(density > 0.0 && density <= static_cast<double>(m - 1))) {
      throw std::invalid_argument("InstanceSpec: sparse s must lie in (0, m-1]");
    }
  } else if (!(density > 0.0 && density < 1.0)) {
    throw std::invalid_argument("InstanceSpec: dense d must lie in (0, 1)");
  }
}

double InstanceSpec::arc_probability() const {
  const double md = static_cast<double>(m);
  if (mode == DensityMode::kSparse) return std::min(1.0, density / (md - 1.0));
  // d * m^2 expected ones spread over C(m,2) available arcs.
  return std::min(1.0, 2.0 * density * md / (md - 1.0));
}

std::string InstanceSpec::label(std::size_t replicate) const {
  std::ostringstream os;
  os << (mode == DensityMode::kSparse ? "sparse" : "dense") << "_m" << m << "_n" << n
     << (mode == DensityMode::kSparse ? "_s" : "_d") << density << "_r" << replicate;
  return os.str();
}

void LambdaGrid::validate() const {
  if (values.empty()) throw std::invalid_argument("LambdaGrid: empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw std::invalid_argument("LambdaGrid: values must be positive");
    if (i > 0 && !(values[i] < values[i - 1])) throw std::invalid_argument("LambdaGrid: values must descend");
  }
}

GroundTruth random_dag(const InstanceSpec& spec) {
  spec.validate();
  const std::size_t m = spec.m;
  Rng rng(spec.seed);
  GroundTruth truth{CoefficientMatrix(m, m), BinaryAdjacency(m),
                    TopologicalOrder::from_sequence(rng.permutation(m))};
  const double p = spec.arc_probability();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (truth.generating_order.position(j) <= truth.generating_order.position(k)) continue;
      if (rng.uniform01() >= p) continue;
      const double magnitude = rng.uniform(0.1, 1.0);
      truth.coefficients(j, k) = rng.uniform01() < 0.5 ? -magnitude : magnitude;
      truth.adjacency.set(j, k);
    }
  }
  return truth;
}

Matrix sample_raw(const GroundTruth& truth, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_raw: n must be >= 2");
  const std::size_t m = truth.coefficients.cols();
  Rng rng(seed);
  Matrix x(n, m);
  // Parents sit at higher positions, so walk positions downwards.
  for (int q = static_cast<int>(m); q >= 1; --q) {
    const std::size_t k = static_cast<std::size_t>(truth.generating_order.node_at(q));
    auto col = x.col(k);
    for (double& v : col) v = rng.normal();
    for (std::size_t j = 0; j < m; ++j) {
      const double b = truth.coefficients(j, k);
      if (b == 0.0) continue;
      const auto parent = x.col(j);
      for (std::size_t i = 0; i < n; ++i) col[i] += b * parent[i];
    }
  }
  return x;
}

Dataset sample_data(const GroundTruth& truth, std::size_t n, std::uint64_t seed) {
  return standardize(sample_raw(truth, n, seed));
}

Dataset standardize(const Matrix& raw, std::vector<std::string> names) {
  const std::size_t n = raw.rows();
  const std::size_t m = raw.cols();
  if (!names.empty() && names.size() != m) throw DimensionError("standardize: one name per column");
  Matrix out(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto in = raw.col(j);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : in) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    const double scale = std::max(1.0, std::fabs(mean));
    if (!(sd > 1e-12 * scale)) {
      const std::string label = names.empty() ? "f" + std::to_string(j + 1) : names[j];
      throw std::invalid_argument("standardize: column " + std::to_string(j + 1) + " (" + label + ") is constant");
    }
    auto col = out.col(j);
    for (std::size_t i = 0; i < n; ++i) col[i] = (in[i] - mean) / sd;
  }
  return Dataset(std::move(out), std::move(names), true);
}

Instance make_instance(const InstanceSpec& spec, std::string id) {
  GroundTruth truth = random_dag(spec);
  Dataset data = sample_data(truth, spec.n, mix_seed(spec.seed ^ 0x5eed5eed5eed5eedULL));
  return {spec, std::move(id), std::move(truth), std::move(data)};
}

SuiteKind parse_suite_kind(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "sparse") return SuiteKind::kSparse;
  if (t == "dense") return SuiteKind::kDense;
  if (t == "highdim") return SuiteKind::kHighdim;
  throw std::invalid_argument("unknown suite: " + text);
}

std::string to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::kSparse: return "sparse";
    case SuiteKind::kDense: return "dense";
    case SuiteKind::kHighdim: return "highdim";
  }
  return "?";
}

double dense_lambda(double lambda0, double d) {
  // Exponent rounded so that d = 0.3 gives exactly 10^-2.
  return lambda0 * std::pow(10.0, -static_cast<double>(std::lround(10.0 * d - 1.0)));
}

SuiteGrid default_grid(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::kSparse: return {{100, 200, 300}, {20, 30, 40, 50}, {1, 2, 3}, {1, 0.5, 0.1, 0.05}};
    case SuiteKind::kDense: return {{100, 200, 300}, {20, 30, 40, 50}, {0.1, 0.2, 0.3}, {1, 0.1, 0.01, 0.001}};
    case SuiteKind::kHighdim: return {{100}, {100, 150, 200}, {0.5, 1, 1.5}, {1, 0.8, 0.6, 0.4}};
  }
  throw std::invalid_argument("default_grid: bad kind");
}

std::vector<SuiteEntry> suite(SuiteKind kind, std::uint64_t master_seed) {
  return suite(kind, master_seed, default_grid(kind));
}

std::vector<SuiteEntry> suite(SuiteKind kind, std::uint64_t master_seed, const SuiteGrid& grid) {
  if (grid.replicates < 1) throw std::invalid_argument("suite: replicates must be >= 1");
  const DensityMode mode = kind == SuiteKind::kDense ? DensityMode::kDense : DensityMode::kSparse;
  std::vector<SuiteEntry> out;
  const std::uint64_t base = mix_seed(master_seed);
  for (std::size_t n : grid.n_values) {
    for (std::size_t m : grid.m_values) {
      for (double density : grid.densities) {
        LambdaGrid lambdas;
        for (double l : grid.lambdas) lambdas.values.push_back(mode == DensityMode::kDense ? dense_lambda(l, density) : l);
        lambdas.validate();
        for (int r = 0; r < grid.replicates; ++r) {
          InstanceSpec spec{m, n, mode, density, mix_seed(base + out.size())};
          spec.validate();
          out.push_back({spec, spec.label(static_cast<std::size_t>(r)), lambdas});
        }
      }
    }
  }
  return out;
}

}  // namespace dagopt
