#pragma once

// Mixed-integer models of the acyclicity-constrained regression problem.
//
// Three encodings of "the support is acyclic" are provided:
//   kTo  position variables o_k_q plus pairwise order binaries (O(m^2) rows)
//   kIn  pairwise order binaries with transitivity (triangle) rows (O(m^3) rows)
//   kCp  one binary per arc plus cycle-prevention cuts added on demand
//
// All three share the coefficient part: beta_jk = bp_j_k - bn_j_k with
// bp, bn >= 0, big-M coupling to the arc indicator, and the squared error
// expanded through the Gram matrix into a convex quadratic objective.
// Names use 1-based node and position ids. Solving is left to external tools;
// models are written in LP format together with a JSON sidecar.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dagopt/graph.hpp"
#include "dagopt/lasso.hpp"

namespace dagopt {

enum class ModelKind { kTo, kIn, kCp };

std::string to_string(ModelKind kind);
/// Accepts "to", "in", "cp" (case-insensitive); throws std::invalid_argument.
ModelKind parse_model_kind(const std::string& text);

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLe, kGe, kEq };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

/// coef * x_a * x_b with a <= b (a == b is a square term).
struct QuadTerm {
  std::size_t a = 0;
  std::size_t b = 0;
  double coef = 0.0;
};

struct Objective {
  double constant = 0.0;
  std::vector<LinearTerm> linear;
  std::vector<QuadTerm> quadratic;
};

struct ModelMetadata {
  ModelKind kind = ModelKind::kTo;
  std::size_t m = 0;
  std::size_t n = 0;
  double lambda = 0.0;
  double big_m = 0.0;
  /// Pair reduction: one binary per unordered node pair stands for both directions.
  bool reduced = true;
};

class MipModel {
 public:
  MipModel() = default;
  explicit MipModel(ModelMetadata meta) : meta_(meta) {}

  /// Throws std::invalid_argument on a duplicate name.
  std::size_t add_variable(Variable v);
  /// Throws std::invalid_argument on a duplicate name or an undeclared variable.
  void add_constraint(Constraint c);

  std::optional<std::size_t> find_variable(const std::string& name) const;
  std::size_t variable_index(const std::string& name) const;  // throws if absent

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  Objective& objective() { return objective_; }
  const Objective& objective() const { return objective_; }
  ModelMetadata& metadata() { return meta_; }
  const ModelMetadata& metadata() const { return meta_; }

  std::size_t binary_count() const;
  std::size_t continuous_count() const;
  /// Rows whose name starts with `prefix` followed by '_' (e.g. "ord").
  std::size_t row_count(const std::string& prefix) const;
  std::map<std::string, std::size_t> row_counts_by_prefix() const;

 private:
  ModelMetadata meta_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::unordered_map<std::string, std::size_t> row_index_;
  Objective objective_;
};

struct MipOptions {
  /// kTo only: false keeps both z_j_k and z_k_j plus excl_j_k rows.
  bool reduce_pairs = true;
};

/// Binaries and acyclicity rows only (no coefficient variables).
MipModel build_structure(ModelKind kind, std::size_t m, const MipOptions& options = {});

MipModel build_mipto(const Dataset& x, PenaltySpec pen, double big_m, const MipOptions& options = {});
MipModel build_mipin(const Dataset& x, PenaltySpec pen, double big_m);
MipModel build_mipcp_base(const Dataset& x, PenaltySpec pen, double big_m);
MipModel build_model(ModelKind kind, const Dataset& x, PenaltySpec pen, double big_m);

/// 2 * max |beta_jk| over the unconstrained column fits; 1.0 if all are zero.
double estimate_big_m(const Dataset& x, PenaltySpec pen);

/// Cycles already cut, one row per cycle.
class CutPool {
 public:
  /// False if the cycle is already present.
  bool add(const Cycle& c);
  bool contains(const Cycle& c) const;
  const std::vector<Cycle>& cycles() const { return cycles_; }
  std::size_t size() const { return cycles_.size(); }

 private:
  std::vector<Cycle> cycles_;
};

/// sum_{(j,k) in c} z_j_k <= |c| - 1 over the model's arc binaries (kCp models).
Constraint cycle_cut(const MipModel& model, const Cycle& c);

/// Adds a cyc_<i> row for every cycle not yet in the pool; returns how many were added.
std::size_t add_cycle_cuts(MipModel& model, CutPool& pool, std::span<const Cycle> cycles);

/// Every constraint holds at `values` (one entry per variable) within tol, and
/// binaries are 0/1.
bool is_feasible(const MipModel& model, std::span<const double> values, double tol = 1e-9);

inline constexpr std::size_t kMaxEncodingNodes = 8;

/// True iff the model's binaries can be completed so that every arc of z is
/// allowed and every acyclicity row holds. kCp is checked against the full
/// elementary-cycle closure of the complete digraph.
bool check_encoding(ModelKind kind, const BinaryAdjacency& z, const MipOptions& options = {});

/// Closed-form sizes for an m-node model (kCp without cuts).
struct ModelCounts {
  std::size_t binaries = 0;
  std::size_t continuous = 0;
  std::size_t acyclicity_rows = 0;
  std::size_t big_m_rows = 0;
  std::size_t constraints = 0;
};
ModelCounts expected_counts(ModelKind kind, std::size_t m, const MipOptions& options = {});

// LP files

void export_lp(const MipModel& model, std::ostream& out);
void export_lp(const MipModel& model, const std::string& path);
/// Parses the subset of LP syntax written by export_lp. Metadata is not part
/// of the file and is left default.
MipModel read_lp(std::istream& in);
MipModel read_lp_file(const std::string& path);

/// JSON text with model kind, m, n, lambda, big M and size counts.
std::string sidecar_json(const MipModel& model);

}  // namespace dagopt
