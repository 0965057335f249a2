#include "dagopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace dagopt {

TopologicalOrder::TopologicalOrder(std::vector<int> positions) : positions_(std::move(positions)) {
  const int m = static_cast<int>(positions_.size());
  nodes_.assign(positions_.size(), -1);
  for (int k = 0; k < m; ++k) {
    const int q = positions_[k];
    if (q < 1 || q > m || nodes_[q - 1] != -1) {
      throw std::invalid_argument("TopologicalOrder: positions are not a permutation of 1..m");
    }
    nodes_[q - 1] = k;
  }
}

TopologicalOrder TopologicalOrder::identity(std::size_t m) {
  std::vector<int> pos(m);
  std::iota(pos.begin(), pos.end(), 1);
  return TopologicalOrder(std::move(pos));
}

TopologicalOrder TopologicalOrder::from_sequence(std::span<const int> nodes) {
  std::vector<int> pos(nodes.size(), 0);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    if (nodes[q] < 0 || static_cast<std::size_t>(nodes[q]) >= nodes.size()) {
      throw std::invalid_argument("TopologicalOrder::from_sequence: node out of range");
    }
    pos[nodes[q]] = static_cast<int>(q) + 1;
  }
  return TopologicalOrder(std::move(pos));
}

void TopologicalOrder::swap_nodes(int a, int b) {
  std::swap(positions_[a], positions_[b]);
  nodes_[positions_[a] - 1] = a;
  nodes_[positions_[b] - 1] = b;
}

std::uint64_t TopologicalOrder::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (int p : positions_) {
    auto v = static_cast<std::uint32_t>(p);
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

BinaryAdjacency BinaryAdjacency::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  BinaryAdjacency z(rows.size());
  std::size_t j = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw std::invalid_argument("BinaryAdjacency: not square");
    std::size_t k = 0;
    for (int v : row) {
      if (v != 0 && v != 1) throw std::invalid_argument("BinaryAdjacency: entries must be 0/1");
      if (v == 1) z.set(j, k);
      ++k;
    }
    ++j;
  }
  return z;
}

void BinaryAdjacency::set(std::size_t j, std::size_t k, bool value) {
  if (j == k && value) throw std::invalid_argument("BinaryAdjacency: diagonal must stay zero");
  bits_[j * m_ + k] = value ? 1 : 0;
}

std::size_t BinaryAdjacency::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryAdjacency::is_subset_of(const BinaryAdjacency& other) const {
  if (other.m_ != m_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > other.bits_[i]) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> BinaryAdjacency::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t k = 0; k < m_; ++k) {
      if ((*this)(j, k)) out.emplace_back(static_cast<int>(j), static_cast<int>(k));
    }
  }
  return out;
}

Cycle::Cycle(std::vector<int> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("Cycle: needs at least two arcs");
  std::set<int> seen(nodes_.begin(), nodes_.end());
  if (seen.size() != nodes_.size()) throw std::invalid_argument("Cycle: repeated node");
}

std::vector<std::pair<int, int>> Cycle::arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out.emplace_back(nodes_[i], nodes_[(i + 1) % nodes_.size()]);
  }
  return out;
}

std::string Cycle::to_string() const {
  std::string s;
  for (int v : nodes_) s += std::to_string(v + 1) + "->";
  return s + std::to_string(nodes_.front() + 1);
}

CycleError::CycleError(Cycle witness)
    : std::runtime_error("graph contains a directed cycle: " + witness.to_string()),
      witness_(std::move(witness)) {}

BinaryAdjacency adj(const TopologicalOrder& order) {
  const std::size_t m = order.size();
  BinaryAdjacency r(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (order.position(j) > order.position(k)) r.set(j, k);
    }
  }
  return r;
}

namespace {

// Walks incoming arcs among unplaced nodes until a node repeats, which closes a cycle.
Cycle extract_cycle(const BinaryAdjacency& z, const std::vector<bool>& placed) {
  const int m = static_cast<int>(z.size());
  int start = 0;
  while (placed[start]) ++start;
  std::vector<int> visit_index(m, -1);
  std::vector<int> walk;
  int v = start;
  while (visit_index[v] == -1) {
    visit_index[v] = static_cast<int>(walk.size());
    walk.push_back(v);
    int pred = -1;
    for (int j = 0; j < m; ++j) {
      if (!placed[j] && z(j, v)) {
        pred = j;
        break;
      }
    }
    v = pred;
  }
  // walk[i+1] -> walk[i]; reverse the loop part to get forward arcs.
  std::vector<int> loop(walk.begin() + visit_index[v], walk.end());
  std::reverse(loop.begin(), loop.end());
  std::rotate(loop.begin(), std::min_element(loop.begin(), loop.end()), loop.end());
  return Cycle(std::move(loop));
}

}  // namespace

TopologicalOrder topological_order_of(const BinaryAdjacency& z) {
  const int m = static_cast<int>(z.size());
  std::vector<int> indegree(m, 0);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) indegree[k] += z(j, k) ? 1 : 0;
  }
  std::vector<bool> placed(m, false);
  std::vector<int> positions(m, 0);
  for (int q = m; q >= 1; --q) {
    int pick = -1;
    for (int k = 0; k < m; ++k) {
      if (!placed[k] && indegree[k] == 0) {
        pick = k;
        break;
      }
    }
    if (pick < 0) throw CycleError(extract_cycle(z, placed));
    placed[pick] = true;
    positions[pick] = q;
    for (int k = 0; k < m; ++k) {
      if (z(pick, k)) --indegree[k];
    }
  }
  return TopologicalOrder(std::move(positions));
}

bool is_acyclic(const BinaryAdjacency& z) {
  try {
    (void)topological_order_of(z);
    return true;
  } catch (const CycleError&) {
    return false;
  }
}

namespace {

// Johnson-style circuit search restricted to nodes >= start. Blocking only
// prunes branches that cannot return to start, so cycles come out in the same
// lexicographic order as a plain depth-first search.
class CircuitSearch {
 public:
  CircuitSearch(const BinaryAdjacency& z, std::size_t max_cycles)
      : z_(z), m_(static_cast<int>(z.size())), max_(max_cycles) {}

  CycleEnumeration run() {
    for (start_ = 0; start_ < m_ && !out_.truncated; ++start_) {
      blocked_.assign(m_, false);
      blockers_.assign(m_, {});
      circuit(start_);
    }
    return std::move(out_);
  }

 private:
  bool circuit(int v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = true;
    for (int w = start_; w < m_ && !out_.truncated; ++w) {
      if (!z_(v, w)) continue;
      if (w == start_) {
        if (out_.cycles.size() >= max_) {
          out_.truncated = true;
          break;
        }
        out_.cycles.emplace_back(stack_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (int w = start_; w < m_; ++w) {
        if (z_(v, w)) blockers_[w].insert(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  void unblock(int v) {
    blocked_[v] = false;
    auto waiting = std::move(blockers_[v]);
    blockers_[v].clear();
    for (int u : waiting) {
      if (blocked_[u]) unblock(u);
    }
  }

  const BinaryAdjacency& z_;
  int m_;
  std::size_t max_;
  int start_ = 0;
  std::vector<int> stack_;
  std::vector<bool> blocked_;
  std::vector<std::set<int>> blockers_;
  CycleEnumeration out_;
};

}  // namespace

CycleEnumeration find_cycles(const BinaryAdjacency& z, std::size_t max_cycles) {
  return CircuitSearch(z, max_cycles).run();
}

BinaryAdjacency support(const Matrix& y, double tol) {
  if (tol < 0.0) throw std::invalid_argument("support: tol must be nonnegative");
  if (y.rows() != y.cols()) throw std::invalid_argument("support: matrix must be square");
  BinaryAdjacency z(y.rows());
  for (std::size_t k = 0; k < y.cols(); ++k) {
    for (std::size_t j = 0; j < y.rows(); ++j) {
      if (j != k && std::fabs(y(j, k)) > tol) z.set(j, k);
    }
  }
  return z;
}

}  // namespace dagopt
