#include "epicenter/lazy_tree.hpp"

#include <stdexcept>

#include "epicenter/rng.hpp"

namespace epicenter {

LazyTree::LazyTree(int degree_low, int degree_high, std::uint64_t seed)
    : lo_(degree_low), hi_(degree_high), seed_(seed) {
  if (degree_low < 2 || degree_high < degree_low) {
    throw std::invalid_argument("LazyTree: need 2 <= degree_low <= degree_high");
  }
  g_.add_node();
  frontier_.push_back(1);
}

bool LazyTree::in_frontier(NodeId u) const {
  g_.check_node(u);
  return frontier_[u] != 0;
}

std::vector<NodeId> LazyTree::frontier() const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < frontier_.size(); ++u) {
    if (frontier_[u]) out.push_back(u);
  }
  return out;
}

int LazyTree::target_degree(NodeId u) const {
  const std::uint64_t h = splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (u + 1)));
  return lo_ + static_cast<int>(h % static_cast<std::uint64_t>(hi_ - lo_ + 1));
}

std::vector<NodeId> LazyTree::expand(NodeId u) {
  g_.check_node(u);
  if (!frontier_[u]) {
    throw std::invalid_argument("LazyTree::expand: node " + std::to_string(u) +
                                " is not in the frontier");
  }
  const int missing = target_degree(u) - static_cast<int>(g_.degree(u));
  std::vector<NodeId> children;
  children.reserve(static_cast<std::size_t>(missing > 0 ? missing : 0));
  for (int i = 0; i < missing; ++i) {
    const NodeId child = g_.add_node();
    frontier_.push_back(1);
    g_.add_edge_unchecked(u, child);
    children.push_back(child);
  }
  frontier_[u] = 0;
  return children;
}

void LazyTree::expand_to_size(std::size_t target) {
  NodeId cursor = 0;
  while (g_.node_count() < target && cursor < g_.node_count()) {
    if (frontier_[cursor]) expand(cursor);
    ++cursor;
  }
}

}  // namespace epicenter
