#pragma once

// Test-only oracles: independent brute-force routes for the properties the
// library computes cleverly. Nothing here calls back into the code paths
// under test.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "epicenter/graph.hpp"
#include "epicenter/rng.hpp"
#include "epicenter/spreading.hpp"

namespace testsupport {

using epicenter::Graph;
using epicenter::NodeId;

inline Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph::from_edges(n, edges);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 1; u <= leaves; ++u) edges.emplace_back(0, u);
  return Graph::from_edges(leaves + 1, edges);
}

inline Graph grid_graph(std::size_t w, std::size_t h) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto id = [&](std::size_t x, std::size_t y) { return static_cast<NodeId>(y * w + x); };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x + 1 < w) edges.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < h) edges.emplace_back(id(x, y), id(x, y + 1));
    }
  }
  return Graph::from_edges(w * h, edges);
}

// Random tree by uniform attachment.
inline Graph random_tree(std::size_t n, std::uint64_t seed) {
  epicenter::Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 1; u < n; ++u) {
    edges.emplace_back(u, static_cast<NodeId>(epicenter::uniform_below(rng, u)));
  }
  return Graph::from_edges(n, edges);
}

// Random connected graph: spanning tree plus extra edges.
inline Graph random_connected_graph(std::size_t n, std::size_t extra_edges,
                                    std::uint64_t seed) {
  epicenter::Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 1; u < n; ++u) {
    edges.emplace_back(u, static_cast<NodeId>(epicenter::uniform_below(rng, u)));
  }
  for (std::size_t i = 0; i < extra_edges; ++i) {
    const NodeId a = static_cast<NodeId>(epicenter::uniform_below(rng, n));
    const NodeId b = static_cast<NodeId>(epicenter::uniform_below(rng, n));
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_edges(n, edges);
}

// Floyd–Warshall all-pairs hop counts; -1 where unreachable.
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (NodeId u = 0; u < n; ++u) {
    d[u][u] = 0;
    for (NodeId v : g.neighbors(u)) d[u][v] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  for (auto& row : d) {
    for (int& x : row) {
      if (x >= inf) x = -1;
    }
  }
  return d;
}

// Brute-force infection range straight from the distance matrix.
inline int brute_infection_range(const std::vector<std::vector<int>>& dist,
                                 const std::vector<NodeId>& sources,
                                 const std::vector<NodeId>& infected) {
  int range = 0;
  for (NodeId u : infected) {
    int best = -1;
    for (NodeId s : sources) {
      if (dist[s][u] >= 0 && (best < 0 || dist[s][u] < best)) best = dist[s][u];
    }
    if (best < 0) return -1;
    range = std::max(range, best);
  }
  return range;
}

// Exhaustive Steiner: minimum edge count of a connected vertex-induced
// spanning structure containing all terminals. Enumerates vertex subsets and
// counts spanning-tree edges (|S| - 1) of connected subsets.
inline int exhaustive_steiner_edges(const Graph& g, const std::vector<NodeId>& terminals) {
  const std::size_t n = g.node_count();
  int best = 1 << 20;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool has_all = true;
    for (NodeId t : terminals) {
      if (!(mask & (1u << t))) {
        has_all = false;
        break;
      }
    }
    if (!has_all) continue;
    // connectivity of the induced subgraph
    std::uint32_t seen = 0;
    std::vector<NodeId> stack;
    for (NodeId u = 0; u < n; ++u) {
      if (mask & (1u << u)) {
        stack.push_back(u);
        seen |= 1u << u;
        break;
      }
    }
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if ((mask & (1u << v)) && !(seen & (1u << v))) {
          seen |= 1u << v;
          stack.push_back(v);
        }
      }
    }
    if (seen != mask) continue;
    const int nodes = __builtin_popcount(mask);
    best = std::min(best, nodes - 1);
  }
  return best;
}

// Independent consistent-path counter: memoized recursion over full state
// vectors with hand-coded transition rules (no pruning beyond legality).
class PathCountOracle {
 public:
  PathCountOracle(const Graph& g, const epicenter::SpreadParams& params,
                  std::vector<NodeId> sources, std::vector<NodeId> infected, int elapsed)
      : g_(g), params_(params), infected_(std::move(infected)), elapsed_(elapsed) {
    start_.assign(g.node_count(), 'u');
    for (NodeId s : sources) start_[s] = 'i';
  }

  std::uint64_t count() { return rec(start_, 0); }

 private:
  // Core statuses: 'u' uninfected, 'i' infected, 'r' recovered.
  std::uint64_t rec(const std::string& state, int tau) {
    if (tau == elapsed_) return matches(state) ? 1 : 0;
    const auto key = std::make_pair(state, tau);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<std::string> options(g_.node_count());
    for (NodeId u = 0; u < g_.node_count(); ++u) {
      options[u] = legal_next(state, u);
      if (options[u].empty()) {
        memo_[key] = 0;
        return 0;
      }
    }
    std::uint64_t total = 0;
    std::string next(g_.node_count(), 'u');
    std::function<void(NodeId)> walk = [&](NodeId u) {
      if (u == g_.node_count()) {
        total += rec(next, tau + 1);
        return;
      }
      for (char c : options[u]) {
        next[u] = c;
        walk(u + 1);
      }
    };
    walk(0);
    memo_[key] = total;
    return total;
  }

  bool matches(const std::string& state) const {
    std::vector<NodeId> now;
    for (NodeId u = 0; u < state.size(); ++u) {
      if (state[u] == 'i') now.push_back(u);
    }
    return now == infected_;
  }

  bool hot(const std::string& state, NodeId u) const {
    for (NodeId v : g_.neighbors(u)) {
      if (state[v] == 'i') return true;
    }
    return false;
  }

  std::string legal_next(const std::string& state, NodeId u) const {
    using epicenter::ModelKind;
    const double ps = params_.p_s.at(u);
    const double pi = params_.p_i.at(u);
    const double pr = params_.p_r.at(u);
    std::string out;
    switch (state[u]) {
      case 'u':
        if (hot(state, u)) {
          if (ps > 0.0) out += 'i';
          if (ps < 1.0) out += 'u';
        } else {
          out += 'u';
        }
        break;
      case 'i':
        switch (params_.model) {
          case ModelKind::SI:
            out += 'i';
            break;
          case ModelKind::SIR:
          case ModelKind::SIRI:
            if (pi > 0.0) out += 'i';
            if (pi < 1.0) out += 'r';
            break;
          case ModelKind::SIS:
            if (pi > 0.0) out += 'i';
            if (pi < 1.0) out += 'u';
            break;
        }
        break;
      case 'r':
        if (params_.model == ModelKind::SIRI) {
          if (pr > 0.0) out += 'i';
          if (pr < 1.0) out += 'r';
        } else {
          out += 'r';
        }
        break;
    }
    return out;
  }

  const Graph& g_;
  const epicenter::SpreadParams& params_;
  std::vector<NodeId> infected_;
  int elapsed_;
  std::string start_;
  std::map<std::pair<std::string, int>, std::uint64_t> memo_;
};

// Min-cost perfect assignment by bitmask DP; the independent route for the
// permutation-based matcher.
inline double assignment_min_cost(const std::vector<std::vector<double>>& cost) {
  const std::size_t k = cost.size();
  const std::size_t full = (1u << k);
  const double inf = 1e18;
  std::vector<double> dp(full, inf);
  dp[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (dp[mask] >= inf) continue;
    const std::size_t i = static_cast<std::size_t>(__builtin_popcount(mask));
    if (i == k) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1u << j)) continue;
      dp[mask | (1u << j)] = std::min(dp[mask | (1u << j)], dp[mask] + cost[i][j]);
    }
  }
  return dp[full - 1];
}

// Minimal XML well-formedness scan: tag balance, quoted attributes.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool seen_root = false;
  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 5, "<?xml") == 0) {
      const std::size_t end = text.find("?>", i);
      if (end == std::string::npos) return false;
      i = end + 2;
      continue;
    }
    std::size_t end = i + 1;
    int quotes = 0;
    while (end < n && (text[end] != '>' || quotes % 2 == 1)) {
      if (text[end] == '"') ++quotes;
      ++end;
    }
    if (end >= n) return false;
    std::string tag = text.substr(i + 1, end - i - 1);
    if (quotes % 2 != 0) return false;
    if (!tag.empty() && tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      const bool self_closing = !tag.empty() && tag.back() == '/';
      if (self_closing) tag.pop_back();
      std::string name;
      for (char c : tag) {
        if (c == ' ' || c == '\t' || c == '\n') break;
        name += c;
      }
      if (name.empty()) return false;
      if (stack.empty() && seen_root && !self_closing) return false;
      if (!self_closing) {
        stack.push_back(name);
        seen_root = true;
      }
    }
    i = end + 1;
  }
  return stack.empty();
}

}  // namespace testsupport

namespace testsupport {

// Reconstructed necessity example: a 7-node chain a-c-b-d-e-f-g where the
// Jordan center d of V_i = {c,b,d,e,f} loses to its neighbor e exactly when
// beta > alpha/(1-alpha)^2. Node positions: a=0,c=1,b=2,d=3,e=4,f=5,g=6;
// p_s is beta everywhere except alpha at e and g.
struct NecessityInstance {
  Graph graph;
  epicenter::SpreadParams params;
  std::vector<NodeId> infected;
  NodeId jordan = 3;  // d
  NodeId rival = 4;   // e
  epicenter::InfectionPath path_x2;  // source d, t = 2, probability beta^3 * alpha
  epicenter::InfectionPath path_y3;  // source e, t = 3, probability beta^4 * (1-alpha)^2
};

inline NecessityInstance make_necessity_instance(double alpha, double beta) {
  using epicenter::InfectionPath;
  using epicenter::NodeState;
  using epicenter::ProbField;
  using epicenter::SpreadParams;

  NecessityInstance inst;
  inst.graph = path_graph(7);
  std::vector<double> ps(7, beta);
  ps[4] = alpha;
  ps[6] = alpha;
  inst.params = SpreadParams::si(ProbField(std::move(ps)));
  inst.infected = {1, 2, 3, 4, 5};

  const NodeState S = NodeState::Susceptible;
  const NodeState I = NodeState::Infected;
  const NodeState N = NodeState::NonSusceptible;

  inst.path_x2.sources = {3};
  inst.path_x2.slots = {
      {N, N, S, I, S, N, N},
      {N, S, I, I, I, S, N},
      {S, I, I, I, I, I, S},
  };

  inst.path_y3.sources = {4};
  inst.path_y3.slots = {
      {N, N, N, S, I, S, N},
      {N, N, S, I, I, I, S},
      {N, S, I, I, I, I, S},
      {S, I, I, I, I, I, S},
  };
  return inst;
}

}  // namespace testsupport
