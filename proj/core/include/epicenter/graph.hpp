#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace epicenter {

using NodeId = std::uint32_t;

// Distance marker for nodes a BFS never reached.
constexpr int kUnreachable = -1;

/// Immutable undirected graph with dense node ids.
///
/// Adjacency lists are kept sorted, symmetric, and free of self-loops and
/// duplicates. Optional string labels survive dataset ingestion so results
/// can be reported in the input's vocabulary.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adj_(node_count) {}

  static Graph from_edges(std::size_t node_count,
                          std::span<const std::pair<NodeId, NodeId>> edges,
                          std::vector<std::string> labels = {});

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    check_node(u);
    return adj_[u];
  }
  std::size_t degree(NodeId u) const {
    check_node(u);
    return adj_[u].size();
  }
  bool has_edge(NodeId u, NodeId v) const;

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(NodeId u) const;
  std::optional<NodeId> find_label(const std::string& label) const;

  bool is_connected() const;
  bool is_tree() const;

  void check_node(NodeId u) const;

 private:
  friend class LazyTree;

  NodeId add_node();
  void add_edge_unchecked(NodeId u, NodeId v);

  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::size_t edge_count_ = 0;
};

struct EdgeListResult {
  Graph graph;
  std::size_t duplicate_edges_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

/// Parses a SNAP-style edge list: one edge per line, two whitespace-separated
/// labels, '#' comment lines ignored. Labels are remapped to dense ids in
/// first-appearance order.
EdgeListResult load_edge_list(std::istream& in);
EdgeListResult load_edge_list_file(const std::string& path);

/// Unweighted single-source shortest-path hop counts; kUnreachable where the
/// BFS never arrived.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// Multi-source variant: distance to the nearest of `sources`.
std::vector<int> bfs_distances(const Graph& g, std::span<const NodeId> sources);

/// Infection range d̄(S, V_i): the farthest observed infected node from its
/// nearest source. Throws if any infected node is unreachable from all of S.
int infection_range(const Graph& g, std::span<const NodeId> sources,
                    std::span<const NodeId> infected);

/// A connected subgraph re-indexed to dense local ids, with the mapping back
/// to the parent graph.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> to_parent;  // local id -> parent id

  std::optional<NodeId> local_id(NodeId parent) const {
    auto it = parent_to_local_.find(parent);
    if (it == parent_to_local_.end()) return std::nullopt;
    return it->second;
  }
  void build_index();

 private:
  std::unordered_map<NodeId, NodeId> parent_to_local_;
};

/// Minimum connected subgraph containing `nodes`. Exact on trees (union of
/// pairwise paths); on general graphs a shortest-path attachment heuristic:
/// grow from the lowest-id node, repeatedly connecting the nearest uncovered
/// target, ties broken toward lower ids.
Subgraph minimal_connected_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Node set of the component containing u once the first edge of the u->v
/// path is removed. Requires a tree.
std::vector<NodeId> subtree_away_from(const Graph& g, NodeId u, NodeId v);

/// Sorts and deduplicates a node-set argument so set semantics do not depend
/// on caller ordering.
std::vector<NodeId> canonical_node_set(std::span<const NodeId> nodes);

}  // namespace epicenter
