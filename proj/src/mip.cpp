#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "dagopt/mip.hpp"
#include "mip_internal.hpp"

namespace dagopt {

using mip_detail::Affine;
using mip_detail::RowBuilder;
using mip_detail::arc_indicator;
using mip_detail::var_name;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTo: return "to";
    case ModelKind::kIn: return "in";
    case ModelKind::kCp: return "cp";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "to" || t == "mipto") return ModelKind::kTo;
  if (t == "in" || t == "mipin") return ModelKind::kIn;
  if (t == "cp" || t == "mipcp") return ModelKind::kCp;
  throw std::invalid_argument("unknown model kind: " + text);
}

// ---------------------------------------------------------------------------
// MipModel

std::size_t MipModel::add_variable(Variable v) {
  if (var_index_.count(v.name)) throw std::invalid_argument("duplicate variable " + v.name);
  const std::size_t idx = variables_.size();
  var_index_.emplace(v.name, idx);
  variables_.push_back(std::move(v));
  return idx;
}

void MipModel::add_constraint(Constraint c) {
  if (row_index_.count(c.name)) throw std::invalid_argument("duplicate constraint " + c.name);
  for (const auto& t : c.terms) {
    if (t.var >= variables_.size()) throw std::invalid_argument("constraint " + c.name + " uses undeclared variable");
  }
  row_index_.emplace(c.name, constraints_.size());
  constraints_.push_back(std::move(c));
}

std::optional<std::size_t> MipModel::find_variable(const std::string& name) const {
  auto it = var_index_.find(name);
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MipModel::variable_index(const std::string& name) const {
  auto idx = find_variable(name);
  if (!idx) throw std::invalid_argument("unknown variable " + name);
  return *idx;
}

std::size_t MipModel::binary_count() const {
  return static_cast<std::size_t>(std::count_if(variables_.begin(), variables_.end(),
                                                [](const Variable& v) { return v.kind == VarKind::kBinary; }));
}

std::size_t MipModel::continuous_count() const { return variables_.size() - binary_count(); }

std::size_t MipModel::row_count(const std::string& prefix) const {
  const std::string p = prefix + "_";
  return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(),
                                                [&](const Constraint& c) { return c.name.rfind(p, 0) == 0; }));
}

std::map<std::string, std::size_t> MipModel::row_counts_by_prefix() const {
  std::map<std::string, std::size_t> out;
  for (const auto& c : constraints_) {
    auto pos = c.name.find('_');
    ++out[c.name.substr(0, pos)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace mip_detail {

std::string var_name(const char* prefix, std::size_t a, std::size_t b) {
  return std::string(prefix) + "_" + std::to_string(a + 1) + "_" + std::to_string(b + 1);
}

Affine arc_indicator(const MipModel& model, std::size_t j, std::size_t k) {
  const auto& meta = model.metadata();
  const bool paired = meta.kind == ModelKind::kIn || (meta.kind == ModelKind::kTo && meta.reduced);
  if (!paired || j < k) return {{{model.variable_index(var_name("z", j, k)), 1.0}}, 0.0};
  // Reverse direction of the pair binary z_k_j.
  return {{{model.variable_index(var_name("z", k, j)), -1.0}}, 1.0};
}

RowBuilder& RowBuilder::add(const Affine& a, double scale) {
  for (const auto& t : a.terms) add(t.var, scale * t.coef);
  constant_ += scale * a.constant;
  return *this;
}

RowBuilder& RowBuilder::add(std::size_t var, double coef) {
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const LinearTerm& t) { return t.var == var; });
  if (it != terms_.end()) {
    it->coef += coef;
  } else {
    terms_.push_back({var, coef});
  }
  return *this;
}

Constraint RowBuilder::finish(std::string name, Sense sense, double rhs) const {
  Constraint c{std::move(name), {}, sense, rhs - constant_};
  for (const auto& t : terms_) {
    if (t.coef != 0.0) c.terms.push_back(t);
  }
  return c;
}

}  // namespace mip_detail

namespace {

std::size_t binary(MipModel& model, std::string name) {
  return model.add_variable({std::move(name), VarKind::kBinary, 0.0, 1.0});
}

void add_order_structure(MipModel& model, std::size_t m, bool reduced) {
  const double md = static_cast<double>(m);
  // Declared node by node (positions of node a, then the pairs closing on a)
  // so that a search in declaration order can check rows early.
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t q = 0; q < m; ++q) binary(model, var_name("o", a, q));
    for (std::size_t b = 0; b < a; ++b) {
      binary(model, var_name("z", b, a));
      if (!reduced) binary(model, var_name("z", a, b));
    }
  }
  auto position_sum = [&](std::size_t node) {
    Affine a;
    for (std::size_t r = 0; r < m; ++r) {
      a.terms.push_back({model.variable_index(var_name("o", node, r)), static_cast<double>(r + 1)});
    }
    return a;
  };
  // Z_jk - m Z_kj <= pos(k) - pos(j): an allowed arc runs to a strictly later position.
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (j == k) continue;
      RowBuilder row;
      row.add(arc_indicator(model, j, k)).add(arc_indicator(model, k, j), -md);
      row.add(position_sum(k), -1.0).add(position_sum(j), 1.0);
      model.add_constraint(row.finish(var_name("ord", j, k), Sense::kLe, 0.0));
    }
  }
  if (!reduced) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        RowBuilder row;
        row.add(arc_indicator(model, j, k)).add(arc_indicator(model, k, j));
        model.add_constraint(row.finish(var_name("excl", j, k), Sense::kLe, 1.0));
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    RowBuilder row;
    for (std::size_t q = 0; q < m; ++q) row.add(model.variable_index(var_name("o", k, q)), 1.0);
    model.add_constraint(row.finish("asg_node_" + std::to_string(k + 1), Sense::kEq, 1.0));
  }
  for (std::size_t q = 0; q < m; ++q) {
    RowBuilder row;
    for (std::size_t k = 0; k < m; ++k) row.add(model.variable_index(var_name("o", k, q)), 1.0);
    model.add_constraint(row.finish("asg_pos_" + std::to_string(q + 1), Sense::kEq, 1.0));
  }
}

std::string triple_name(const char* prefix, std::size_t q, std::size_t j, std::size_t k) {
  return std::string(prefix) + "_" + std::to_string(q + 1) + "_" + std::to_string(j + 1) + "_" +
         std::to_string(k + 1);
}

void add_triangle_structure(MipModel& model, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) binary(model, var_name("z", j, k));
  }
  for (std::size_t q = 0; q < m; ++q) {
    for (std::size_t j = q + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        const std::size_t zqj = model.variable_index(var_name("z", q, j));
        const std::size_t zjk = model.variable_index(var_name("z", j, k));
        const std::size_t zqk = model.variable_index(var_name("z", q, k));
        model.add_constraint(
            RowBuilder().add(zqj, 1.0).add(zjk, 1.0).add(zqk, -1.0).finish(triple_name("tri_a", q, j, k), Sense::kLe, 1.0));
        model.add_constraint(
            RowBuilder().add(zqj, -1.0).add(zjk, -1.0).add(zqk, 1.0).finish(triple_name("tri_b", q, j, k), Sense::kLe, 0.0));
      }
    }
  }
}

void add_arc_binaries(MipModel& model, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (j != k) binary(model, var_name("z", j, k));
    }
  }
}

void add_regression_part(MipModel& model, const Dataset& x, PenaltySpec pen, double big_m) {
  if (!(big_m > 0.0)) throw std::invalid_argument("big M must be positive");
  const std::size_t m = x.m();
  if (model.metadata().m != m) throw DimensionError("model size does not match dataset");
  const Matrix& c = x.gram();
  auto& meta = model.metadata();
  meta.n = x.n();
  meta.lambda = pen.lambda;
  meta.big_m = big_m;

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      model.add_variable({var_name("bp", j, k), VarKind::kContinuous, 0.0, std::numeric_limits<double>::infinity()});
      model.add_variable({var_name("bn", j, k), VarKind::kContinuous, 0.0, std::numeric_limits<double>::infinity()});
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      const Affine z = arc_indicator(model, j, k);
      model.add_constraint(RowBuilder()
                               .add(model.variable_index(var_name("bp", j, k)), 1.0)
                               .add(z, -big_m)
                               .finish(var_name("bigm_pos", j, k), Sense::kLe, 0.0));
      model.add_constraint(RowBuilder()
                               .add(model.variable_index(var_name("bn", j, k)), 1.0)
                               .add(z, -big_m)
                               .finish(var_name("bigm_neg", j, k), Sense::kLe, 0.0));
    }
  }

  // (1/n)||x_k - X b_k||^2 = C_kk - 2 sum_j C_jk b_jk + sum_{j,l} C_jl b_jk b_lk
  Objective& obj = model.objective();
  for (std::size_t k = 0; k < m; ++k) obj.constant += c(k, k);
  for (std::size_t k = 0; k < m; ++k) {
    struct Part {
      std::size_t var;
      std::size_t feature;
      double sign;
    };
    std::vector<Part> parts;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == k) continue;
      const std::size_t bp = model.variable_index(var_name("bp", j, k));
      const std::size_t bn = model.variable_index(var_name("bn", j, k));
      obj.linear.push_back({bp, -2.0 * c(j, k) + pen.lambda});
      obj.linear.push_back({bn, 2.0 * c(j, k) + pen.lambda});
      parts.push_back({bp, j, 1.0});
      parts.push_back({bn, j, -1.0});
    }
    for (std::size_t a = 0; a < parts.size(); ++a) {
      obj.quadratic.push_back({parts[a].var, parts[a].var, c(parts[a].feature, parts[a].feature)});
      for (std::size_t b = a + 1; b < parts.size(); ++b) {
        const double coef = 2.0 * c(parts[a].feature, parts[b].feature) * parts[a].sign * parts[b].sign;
        obj.quadratic.push_back({std::min(parts[a].var, parts[b].var), std::max(parts[a].var, parts[b].var), coef});
      }
    }
  }
}

}  // namespace

MipModel build_structure(ModelKind kind, std::size_t m, const MipOptions& options) {
  if (m < 2) throw DimensionError("models need at least 2 nodes");
  ModelMetadata meta;
  meta.kind = kind;
  meta.m = m;
  meta.reduced = kind == ModelKind::kIn || (kind == ModelKind::kTo && options.reduce_pairs);
  MipModel model(meta);
  switch (kind) {
    case ModelKind::kTo: add_order_structure(model, m, meta.reduced); break;
    case ModelKind::kIn: add_triangle_structure(model, m); break;
    case ModelKind::kCp: add_arc_binaries(model, m); break;
  }
  return model;
}

MipModel build_mipto(const Dataset& x, PenaltySpec pen, double big_m, const MipOptions& options) {
  MipModel model = build_structure(ModelKind::kTo, x.m(), options);
  add_regression_part(model, x, pen, big_m);
  return model;
}

MipModel build_mipin(const Dataset& x, PenaltySpec pen, double big_m) {
  MipModel model = build_structure(ModelKind::kIn, x.m());
  add_regression_part(model, x, pen, big_m);
  return model;
}

MipModel build_mipcp_base(const Dataset& x, PenaltySpec pen, double big_m) {
  MipModel model = build_structure(ModelKind::kCp, x.m());
  add_regression_part(model, x, pen, big_m);
  return model;
}

MipModel build_model(ModelKind kind, const Dataset& x, PenaltySpec pen, double big_m) {
  switch (kind) {
    case ModelKind::kTo: return build_mipto(x, pen, big_m);
    case ModelKind::kIn: return build_mipin(x, pen, big_m);
    case ModelKind::kCp: return build_mipcp_base(x, pen, big_m);
  }
  throw std::invalid_argument("build_model: bad kind");
}

double estimate_big_m(const Dataset& x, PenaltySpec pen) {
  const std::size_t m = x.m();
  double largest = 0.0;
  std::vector<int> candidates;
  for (std::size_t k = 0; k < m; ++k) {
    candidates.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) candidates.push_back(static_cast<int>(j));
    }
    for (double b : solve_column(x, k, candidates, pen).beta) largest = std::max(largest, std::fabs(b));
  }
  return largest > 0.0 ? 2.0 * largest : 1.0;
}

ModelCounts expected_counts(ModelKind kind, std::size_t m, const MipOptions& options) {
  const std::size_t pairs = m * (m - 1) / 2;
  const std::size_t triples = m < 3 ? 0 : m * (m - 1) * (m - 2) / 6;
  ModelCounts out;
  out.continuous = 2 * m * (m - 1);
  out.big_m_rows = 2 * m * (m - 1);
  switch (kind) {
    case ModelKind::kTo:
      out.binaries = m * m + (options.reduce_pairs ? pairs : 2 * pairs);
      out.acyclicity_rows = m * (m - 1) + 2 * m + (options.reduce_pairs ? 0 : pairs);
      break;
    case ModelKind::kIn:
      out.binaries = pairs;
      out.acyclicity_rows = 2 * triples;
      break;
    case ModelKind::kCp:
      out.binaries = 2 * pairs;
      out.acyclicity_rows = 0;
      break;
  }
  out.constraints = out.acyclicity_rows + out.big_m_rows;
  return out;
}

// ---------------------------------------------------------------------------
// Cycle cuts

namespace {

Cycle canonical(const Cycle& c) {
  std::vector<int> nodes(c.nodes().begin(), c.nodes().end());
  std::rotate(nodes.begin(), std::min_element(nodes.begin(), nodes.end()), nodes.end());
  return Cycle(std::move(nodes));
}

}  // namespace

bool CutPool::contains(const Cycle& c) const {
  return std::find(cycles_.begin(), cycles_.end(), canonical(c)) != cycles_.end();
}

bool CutPool::add(const Cycle& c) {
  if (contains(c)) return false;
  cycles_.push_back(canonical(c));
  return true;
}

Constraint cycle_cut(const MipModel& model, const Cycle& c) {
  RowBuilder row;
  for (const auto& [j, k] : c.arcs()) {
    row.add(arc_indicator(model, static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
  }
  return row.finish("cyc", Sense::kLe, static_cast<double>(c.size()) - 1.0);
}

std::size_t add_cycle_cuts(MipModel& model, CutPool& pool, std::span<const Cycle> cycles) {
  std::size_t added = 0;
  for (const auto& c : cycles) {
    if (!pool.add(c)) continue;
    Constraint row = cycle_cut(model, c);
    row.name = "cyc_" + std::to_string(pool.size());
    model.add_constraint(std::move(row));
    ++added;
  }
  return added;
}

bool is_feasible(const MipModel& model, std::span<const double> values, double tol) {
  const auto& vars = model.variables();
  if (values.size() != vars.size()) throw DimensionError("is_feasible: one value per variable");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double v = values[i];
    if (v < vars[i].lower - tol || v > vars[i].upper + tol) return false;
    if (vars[i].kind == VarKind::kBinary && std::fabs(v - std::round(v)) > tol) return false;
  }
  for (const auto& c : model.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    if (c.sense != Sense::kGe && lhs > c.rhs + tol) return false;
    if (c.sense != Sense::kLe && lhs < c.rhs - tol) return false;
  }
  return true;
}

}  // namespace dagopt
