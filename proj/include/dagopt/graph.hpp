#pragma once

// Topological orders, 0/1 adjacency matrices and cycle utilities.
//
// Node indices are 0-based throughout the C++ API. Order positions are
// 1-based: positions[k] = q means node k sits at position q, and an arc j->k
// is compatible with the order exactly when position(j) > position(k).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dagopt/matrix.hpp"

namespace dagopt {

class TopologicalOrder {
 public:
  TopologicalOrder() = default;
  /// Takes 1-based positions; throws std::invalid_argument unless they form a
  /// permutation of {1..m}.
  explicit TopologicalOrder(std::vector<int> positions);

  static TopologicalOrder identity(std::size_t m);
  /// Builds the order in which nodes[0] gets position 1, nodes[1] position 2, ...
  static TopologicalOrder from_sequence(std::span<const int> nodes);

  std::size_t size() const { return positions_.size(); }
  int position(std::size_t node) const { return positions_[node]; }
  std::span<const int> positions() const { return positions_; }
  /// Node holding the 1-based position q.
  int node_at(int q) const { return nodes_[q - 1]; }
  /// Nodes listed by increasing position.
  std::span<const int> sequence() const { return nodes_; }

  void swap_nodes(int a, int b);

  /// FNV-1a over the positions; stable across platforms.
  std::uint64_t hash() const;

  friend bool operator==(const TopologicalOrder& a, const TopologicalOrder& b) {
    return a.positions_ == b.positions_;
  }

 private:
  std::vector<int> positions_;
  std::vector<int> nodes_;
};

/// Square 0/1 matrix with zero diagonal; entry (j,k) = 1 is the arc j->k.
class BinaryAdjacency {
 public:
  BinaryAdjacency() = default;
  explicit BinaryAdjacency(std::size_t m) : m_(m), bits_(m * m, 0) {}
  /// Row-major literal; throws if ragged, non-square, non-binary or if the
  /// diagonal is set.
  static BinaryAdjacency from_rows(std::initializer_list<std::initializer_list<int>> rows);

  std::size_t size() const { return m_; }
  bool operator()(std::size_t j, std::size_t k) const { return bits_[j * m_ + k] != 0; }
  void set(std::size_t j, std::size_t k, bool value = true);

  std::size_t count() const;
  /// Elementwise this <= other.
  bool is_subset_of(const BinaryAdjacency& other) const;
  std::vector<std::pair<int, int>> arcs() const;

  friend bool operator==(const BinaryAdjacency&, const BinaryAdjacency&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Closed directed walk with distinct nodes, stored as its node sequence; the
/// arcs are nodes[i] -> nodes[i+1] and nodes.back() -> nodes.front().
class Cycle {
 public:
  explicit Cycle(std::vector<int> nodes);

  std::span<const int> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::vector<std::pair<int, int>> arcs() const;
  std::string to_string() const;  // "1->2->1" with 1-based ids

  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;

 private:
  std::vector<int> nodes_;
};

class CycleError : public std::runtime_error {
 public:
  explicit CycleError(Cycle witness);
  const Cycle& witness() const { return witness_; }

 private:
  Cycle witness_;
};

struct CycleEnumeration {
  std::vector<Cycle> cycles;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultMaxCycles = 10000;
inline constexpr double kDefaultSupportTol = 1e-8;

/// Adjacency candidate matrix of an order: R_jk = 1 iff position(j) > position(k).
BinaryAdjacency adj(const TopologicalOrder& order);

/// An order consistent with z (z_jk = 1 implies position(j) > position(k)).
/// Positions are handed out from m downwards; among nodes without remaining
/// incoming arcs the smallest index is placed first. Throws CycleError.
TopologicalOrder topological_order_of(const BinaryAdjacency& z);

bool is_acyclic(const BinaryAdjacency& z);

/// Elementary cycles, each rotated to start at its smallest node, in
/// lexicographic order of that rotation. Stops after max_cycles.
CycleEnumeration find_cycles(const BinaryAdjacency& z, std::size_t max_cycles = kDefaultMaxCycles);

/// Z_jk = 1 iff |Y_jk| > tol, diagonal forced to zero.
BinaryAdjacency support(const Matrix& y, double tol = kDefaultSupportTol);

}  // namespace dagopt
