#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "epicenter/graph.hpp"

namespace epicenter {

/// Random tree realized on demand, emulating an infinite tree with finite
/// memory. Frontier nodes exist but have no children yet; expanding one draws
/// its total degree uniformly from [degree_low, degree_high] and appends the
/// missing children, which join the frontier.
///
/// Degree draws are keyed on (seed, node id), so the same seed yields the
/// same tree regardless of expansion order.
class LazyTree {
 public:
  LazyTree(int degree_low, int degree_high, std::uint64_t seed);

  const Graph& graph() const { return g_; }
  std::size_t node_count() const { return g_.node_count(); }
  std::span<const NodeId> neighbors(NodeId u) const { return g_.neighbors(u); }
  int degree_low() const { return lo_; }
  int degree_high() const { return hi_; }

  bool in_frontier(NodeId u) const;
  std::vector<NodeId> frontier() const;

  /// Realizes the children of a frontier node. Returns the new node ids.
  std::vector<NodeId> expand(NodeId u);

  /// Breadth-first pre-realization until at least `target` nodes exist.
  void expand_to_size(std::size_t target);

 private:
  int target_degree(NodeId u) const;

  Graph g_;
  std::vector<char> frontier_;
  int lo_;
  int hi_;
  std::uint64_t seed_;
};

}  // namespace epicenter
