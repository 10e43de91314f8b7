#include "epicenter/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epicenter {

void Graph::check_node(NodeId u) const {
  if (u >= adj_.size()) {
    throw std::out_of_range("node id " + std::to_string(u) + " out of range (node count " +
                            std::to_string(adj_.size()) + ")");
  }
}

Graph Graph::from_edges(std::size_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<std::string> labels) {
  Graph g(node_count);
  if (!labels.empty() && labels.size() != node_count) {
    throw std::invalid_argument("label count does not match node count");
  }
  for (auto [u, v] : edges) {
    g.check_node(u);
    g.check_node(v);
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  std::size_t edge_count = 0;
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    edge_count += nbrs.size();
  }
  g.edge_count_ = edge_count / 2;
  g.labels_ = std::move(labels);
  for (NodeId u = 0; u < g.labels_.size(); ++u) g.label_index_.emplace(g.labels_[u], u);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::string Graph::label(NodeId u) const {
  check_node(u);
  if (u < labels_.size()) return labels_[u];
  return std::to_string(u);
}

std::optional<NodeId> Graph::find_label(const std::string& label) const {
  auto it = label_index_.find(label);
  if (it != label_index_.end()) return it->second;
  // Unlabeled graphs answer by decimal id.
  if (labels_.empty()) {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(label, &pos);
      if (pos == label.size() && v < adj_.size()) return static_cast<NodeId>(v);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

bool Graph::is_connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(adj_.size(), 0);
  std::deque<NodeId> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adj_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == adj_.size();
}

bool Graph::is_tree() const {
  return node_count() > 0 && edge_count_ == node_count() - 1 && is_connected();
}

NodeId Graph::add_node() {
  adj_.emplace_back();
  return static_cast<NodeId>(adj_.size() - 1);
}

void Graph::add_edge_unchecked(NodeId u, NodeId v) {
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ++edge_count_;
}

EdgeListResult load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.emplace(token, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<NodeId, NodeId>> seen;  // sorted pairs for dedup after read
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b)) {
      throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) +
                               ": expected two node labels");
    }
    if (fields >> extra) {
      throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) +
                               ": trailing token '" + extra + "'");
    }
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    if (u == v) {
      ++self_loops;
      continue;
    }
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (labels.empty()) throw std::runtime_error("edge list is empty");

  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<NodeId, NodeId>> unique_edges;
  unique_edges.reserve(edges.size());
  for (const auto& e : edges) {
    if (!unique_edges.empty() && unique_edges.back() == e) {
      ++duplicates;
    } else {
      unique_edges.push_back(e);
    }
  }

  EdgeListResult result;
  const std::size_t node_count = labels.size();
  result.graph = Graph::from_edges(node_count, unique_edges, std::move(labels));
  result.duplicate_edges_dropped = duplicates;
  result.self_loops_dropped = self_loops;
  return result;
}

EdgeListResult load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list file: " + path);
  return load_edge_list(in);
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  const NodeId sources[1] = {source};
  return bfs_distances(g, std::span<const NodeId>(sources));
}

std::vector<int> bfs_distances(const Graph& g, std::span<const NodeId> sources) {
  if (sources.empty()) throw std::invalid_argument("bfs_distances: no sources");
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    g.check_node(s);
    if (dist[s] == kUnreachable) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

int infection_range(const Graph& g, std::span<const NodeId> sources,
                    std::span<const NodeId> infected) {
  if (sources.empty()) throw std::invalid_argument("infection_range: empty source set");
  if (infected.empty()) throw std::invalid_argument("infection_range: empty infected set");
  const std::vector<int> dist = bfs_distances(g, sources);
  int range = 0;
  for (NodeId u : infected) {
    g.check_node(u);
    if (dist[u] == kUnreachable) {
      throw std::runtime_error("infection_range: node " + g.label(u) +
                               " unreachable from every source");
    }
    range = std::max(range, dist[u]);
  }
  return range;
}

void Subgraph::build_index() {
  parent_to_local_.clear();
  for (NodeId local = 0; local < to_parent.size(); ++local) {
    parent_to_local_.emplace(to_parent[local], local);
  }
}

namespace {

// BFS parent array with deterministic tie-breaking: among equal-distance
// predecessors the lowest id wins because neighbors are scanned in sorted
// order from a sorted frontier.
std::vector<NodeId> bfs_parents(const Graph& g, std::span<const NodeId> sources,
                                std::vector<int>& dist) {
  dist.assign(g.node_count(), kUnreachable);
  std::vector<NodeId> parent(g.node_count(), std::numeric_limits<NodeId>::max());
  std::deque<NodeId> queue;
  std::vector<NodeId> sorted(sources.begin(), sources.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId s : sorted) {
    if (dist[s] == kUnreachable) {
      dist[s] = 0;
      parent[s] = s;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  return parent;
}

}  // namespace

Subgraph minimal_connected_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  const std::vector<NodeId> targets = canonical_node_set(nodes);
  if (targets.empty()) throw std::invalid_argument("minimal_connected_subgraph: empty node set");
  for (NodeId u : targets) g.check_node(u);

  std::vector<char> covered(g.node_count(), 0);
  std::vector<NodeId> covered_list;
  auto cover = [&](NodeId u) {
    if (!covered[u]) {
      covered[u] = 1;
      covered_list.push_back(u);
    }
  };
  cover(targets.front());

  std::vector<std::pair<NodeId, NodeId>> used_edges;
  std::vector<char> pending(g.node_count(), 0);
  for (NodeId u : targets) pending[u] = 1;
  pending[targets.front()] = 0;
  std::size_t remaining = targets.size() - 1;

  std::vector<int> dist;
  while (remaining > 0) {
    const std::vector<NodeId> parent = bfs_parents(g, covered_list, dist);
    // Nearest uncovered target; lowest id on distance ties.
    NodeId best = std::numeric_limits<NodeId>::max();
    int best_dist = std::numeric_limits<int>::max();
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (!pending[u]) continue;
      if (dist[u] == kUnreachable) {
        throw std::runtime_error("minimal_connected_subgraph: nodes span multiple components");
      }
      if (dist[u] < best_dist) {
        best_dist = dist[u];
        best = u;
      }
    }
    NodeId walk = best;
    while (dist[walk] != 0) {
      const NodeId p = parent[walk];
      used_edges.emplace_back(std::min(p, walk), std::max(p, walk));
      cover(walk);
      walk = p;
    }
    pending[best] = 0;
    --remaining;
  }

  Subgraph out;
  std::vector<NodeId> members = covered_list;
  std::sort(members.begin(), members.end());
  out.to_parent = members;
  out.build_index();

  std::sort(used_edges.begin(), used_edges.end());
  used_edges.erase(std::unique(used_edges.begin(), used_edges.end()), used_edges.end());
  std::vector<std::pair<NodeId, NodeId>> local_edges;
  local_edges.reserve(used_edges.size());
  for (auto [u, v] : used_edges) {
    local_edges.emplace_back(*out.local_id(u), *out.local_id(v));
  }
  std::vector<std::string> labels;
  if (g.has_labels()) {
    labels.reserve(members.size());
    for (NodeId m : members) labels.push_back(g.label(m));
  }
  out.graph = Graph::from_edges(members.size(), local_edges, std::move(labels));
  return out;
}

std::vector<NodeId> subtree_away_from(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  if (u == v) throw std::invalid_argument("subtree_away_from: u and v must differ");
  if (!g.is_tree()) throw std::invalid_argument("subtree_away_from requires a tree");

  const std::vector<int> dist_v = bfs_distances(g, v);
  if (dist_v[u] == kUnreachable) {
    throw std::runtime_error("subtree_away_from: u and v are disconnected");
  }
  // First hop of the u -> v path: the unique neighbor one step closer to v.
  NodeId gate = u;
  for (NodeId w : g.neighbors(u)) {
    if (dist_v[w] == dist_v[u] - 1) {
      gate = w;
      break;
    }
  }

  std::vector<char> seen(g.node_count(), 0);
  seen[u] = 1;
  std::deque<NodeId> queue{u};
  std::vector<NodeId> component{u};
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : g.neighbors(x)) {
      if (x == u && y == gate) continue;  // removed edge
      if (!seen[y]) {
        seen[y] = 1;
        component.push_back(y);
        queue.push_back(y);
      }
    }
  }
  std::sort(component.begin(), component.end());
  return component;
}

std::vector<NodeId> canonical_node_set(std::span<const NodeId> nodes) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace epicenter
