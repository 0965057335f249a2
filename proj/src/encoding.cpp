#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "dagopt/mip.hpp"
#include "mip_internal.hpp"

namespace dagopt {

namespace {

constexpr double kEps = 1e-9;

/// Structural model plus a variable -> rows index, built once per (kind, m, reduction).
struct Encoding {
  MipModel model;
  std::vector<std::vector<std::size_t>> rows_of;
};

std::shared_ptr<const Encoding> encoding_for(ModelKind kind, std::size_t m, const MipOptions& options) {
  static std::mutex mu;
  static std::map<std::tuple<ModelKind, std::size_t, bool>, std::shared_ptr<const Encoding>> cache;
  const auto key = std::make_tuple(kind, m, options.reduce_pairs);
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto enc = std::make_shared<Encoding>();
  enc->model = build_structure(kind, m, options);
  if (kind == ModelKind::kCp) {
    BinaryAdjacency complete(m);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        if (j != k) complete.set(j, k);
      }
    }
    // The complete digraph on 8 nodes has 16064 elementary cycles.
    const CycleEnumeration closure = find_cycles(complete, 1'000'000);
    CutPool pool;
    add_cycle_cuts(enc->model, pool, closure.cycles);
  }
  enc->rows_of.resize(enc->model.variables().size());
  const auto& rows = enc->model.constraints();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& t : rows[r].terms) enc->rows_of[t.var].push_back(r);
  }
  cache.emplace(key, enc);
  return enc;
}

/// Depth-first completion of partially fixed binaries. A row is rejected as
/// soon as its activity interval over the unassigned variables excludes the rhs.
class CompletionSearch {
 public:
  explicit CompletionSearch(const Encoding& enc) : enc_(enc), value_(enc.model.variables().size(), -1) {}

  bool fix(std::size_t var, int v) {
    if (value_[var] >= 0) return value_[var] == v;
    value_[var] = v;
    return true;
  }

  bool run() {
    for (std::size_t r = 0; r < enc_.model.constraints().size(); ++r) {
      if (!row_possible(r)) return false;
    }
    return descend(0);
  }

 private:
  bool row_possible(std::size_t r) const {
    const Constraint& c = enc_.model.constraints()[r];
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& t : c.terms) {
      const int v = value_[t.var];
      if (v >= 0) {
        lo += t.coef * v;
        hi += t.coef * v;
      } else if (t.coef > 0) {
        hi += t.coef;
      } else {
        lo += t.coef;
      }
    }
    if (c.sense != Sense::kGe && lo > c.rhs + kEps) return false;
    if (c.sense != Sense::kLe && hi < c.rhs - kEps) return false;
    return true;
  }

  bool descend(std::size_t var) {
    if (var == value_.size()) return true;
    if (value_[var] >= 0) return descend(var + 1);
    for (int v : {0, 1}) {
      value_[var] = v;
      bool ok = true;
      for (std::size_t r : enc_.rows_of[var]) {
        if (!row_possible(r)) {
          ok = false;
          break;
        }
      }
      if (ok && descend(var + 1)) return true;
    }
    value_[var] = -1;
    return false;
  }

  const Encoding& enc_;
  std::vector<int> value_;
};

}  // namespace

bool check_encoding(ModelKind kind, const BinaryAdjacency& z, const MipOptions& options) {
  const std::size_t m = z.size();
  if (m < 2 || m > kMaxEncodingNodes) throw std::invalid_argument("check_encoding: need 2 <= m <= 8");

  const auto enc = encoding_for(kind, m, options);
  const MipModel& model = enc->model;
  CompletionSearch search(*enc);

  // Each arc of z forces its indicator to 1: either z_j_k = 1 or, for the
  // reverse side of a pair binary, z_k_j = 0.
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (!z(j, k)) continue;
      const mip_detail::Affine a = mip_detail::arc_indicator(model, j, k);
      const LinearTerm& t = a.terms.front();
      const int v = t.coef > 0 ? 1 : 0;
      if (!search.fix(t.var, v)) return false;
    }
  }
  return search.run();
}

}  // namespace dagopt
