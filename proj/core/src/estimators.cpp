#include "epicenter/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace epicenter {

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::JC: return "JC";
    case EstimatorKind::MJC: return "MJC";
    case EstimatorKind::BC: return "BC";
    case EstimatorKind::CC: return "CC";
    case EstimatorKind::DisC: return "DisC";
    case EstimatorKind::DegC: return "DegC";
    case EstimatorKind::EC: return "EC";
    case EstimatorKind::PC: return "PC";
    case EstimatorKind::Random: return "Random";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& s) {
  if (s == "JC") return EstimatorKind::JC;
  if (s == "MJC") return EstimatorKind::MJC;
  if (s == "BC") return EstimatorKind::BC;
  if (s == "CC") return EstimatorKind::CC;
  if (s == "DisC") return EstimatorKind::DisC;
  if (s == "DegC") return EstimatorKind::DegC;
  if (s == "EC") return EstimatorKind::EC;
  if (s == "PC") return EstimatorKind::PC;
  if (s == "Random") return EstimatorKind::Random;
  throw std::invalid_argument("unknown estimator: " + s);
}

std::string estimate_csv_header() { return "estimator,k,sources,infection_range,iterations"; }

std::string estimate_csv_row(const Estimate& e, const Graph& g) {
  std::ostringstream out;
  out << to_string(e.kind) << ',' << e.k << ',';
  for (std::size_t i = 0; i < e.sources.size(); ++i) {
    if (i) out << ';';
    out << g.label(e.sources[i]);
  }
  out << ',' << e.infection_range << ',' << e.iterations;
  return out.str();
}

namespace {

// Infection range of every node w.r.t. V_i: one BFS per infected node,
// keeping the running maximum. O(|V_i| * |E|).
std::vector<int> range_per_node(const Graph& g, const std::vector<NodeId>& infected) {
  std::vector<int> range(g.node_count(), 0);
  std::vector<char> dead(g.node_count(), 0);  // unreachable from some infected node
  for (NodeId u : infected) {
    const std::vector<int> dist = bfs_distances(g, u);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (dist[v] == kUnreachable) {
        dead[v] = 1;
      } else {
        range[v] = std::max(range[v], dist[v]);
      }
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dead[v]) range[v] = kUnreachable;
  }
  return range;
}

Estimate finish_single(EstimatorKind kind, const Graph& g, const std::vector<NodeId>& infected,
                       NodeId chosen, std::map<NodeId, double> scores) {
  Estimate e;
  e.kind = kind;
  e.k = 1;
  e.sources = {chosen};
  e.infection_range = infection_range(g, e.sources, infected);
  e.scores = std::move(scores);
  e.range_trace = {e.infection_range};
  return e;
}

}  // namespace

Estimate jordan_center(const Graph& g, std::span<const NodeId> infected_in) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (infected.empty()) throw std::invalid_argument("jordan_center: empty infected set");
  for (NodeId u : infected) g.check_node(u);

  const std::vector<int> range = range_per_node(g, infected);
  NodeId best = std::numeric_limits<NodeId>::max();
  int best_range = std::numeric_limits<int>::max();
  std::map<NodeId, double> scores;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (range[v] == kUnreachable) continue;
    scores.emplace(v, static_cast<double>(range[v]));
    if (range[v] < best_range) {
      best_range = range[v];
      best = v;
    }
  }
  if (best == std::numeric_limits<NodeId>::max()) {
    throw std::runtime_error("jordan_center: infected set spans multiple components");
  }
  Estimate e = finish_single(EstimatorKind::JC, g, infected, best, std::move(scores));
  e.iterations = 0;
  return e;
}

std::vector<std::vector<NodeId>> voronoi_partition(const Graph& g,
                                                   std::span<const NodeId> infected_in,
                                                   std::span<const NodeId> centers_in,
                                                   Rng& rng) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  const std::vector<NodeId> centers(centers_in.begin(), centers_in.end());
  if (centers.empty()) throw std::invalid_argument("voronoi_partition: no centers");
  {
    std::vector<NodeId> dedup = canonical_node_set(centers_in);
    if (dedup.size() != centers.size()) {
      throw std::invalid_argument("voronoi_partition: centers must be distinct");
    }
  }

  std::vector<std::vector<int>> dist;
  dist.reserve(centers.size());
  for (NodeId c : centers) dist.push_back(bfs_distances(g, c));

  std::vector<std::vector<NodeId>> cells(centers.size());
  std::vector<std::size_t> nearest;
  for (NodeId v : infected) {
    nearest.clear();
    int best = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const int d = dist[i][v];
      if (d == kUnreachable) continue;
      if (d < best) {
        best = d;
        nearest.assign(1, i);
      } else if (d == best) {
        nearest.push_back(i);
      }
    }
    if (nearest.empty()) {
      throw std::runtime_error("voronoi_partition: node " + g.label(v) +
                               " unreachable from every center");
    }
    const std::size_t pick =
        nearest.size() == 1 ? nearest.front()
                            : nearest[static_cast<std::size_t>(uniform_below(rng, nearest.size()))];
    cells[pick].push_back(v);
  }
  return cells;
}

namespace {

// Per-cell re-optimization step; returns the cell's new center.
using CellCenter = std::function<NodeId(const Graph&, const std::vector<NodeId>&)>;

Estimate mjc_loop(EstimatorKind kind, const Graph& g, const std::vector<NodeId>& infected, int k,
                  const MjcOptions& options, Rng& rng, const CellCenter& cell_center) {
  if (k < 1) throw std::invalid_argument("mjc: k must be >= 1");
  if (static_cast<std::size_t>(k) > infected.size()) {
    throw std::invalid_argument("mjc: k exceeds the number of infected nodes");
  }

  std::vector<NodeId> pool;
  if (options.init_over_all_nodes) {
    pool.resize(g.node_count());
    std::iota(pool.begin(), pool.end(), 0);
  } else {
    pool = minimal_connected_subgraph(g, infected).to_parent;
  }
  if (pool.size() < static_cast<std::size_t>(k)) pool = infected;

  std::vector<NodeId> centers =
      sample_without_replacement<NodeId>(rng, pool, static_cast<std::size_t>(k));
  std::sort(centers.begin(), centers.end());

  Estimate e;
  e.kind = kind;
  e.k = k;
  e.range_trace.push_back(infection_range(g, centers, infected));

  int iter = 0;
  while (iter < options.max_iter) {
    ++iter;
    const auto cells = voronoi_partition(g, infected, centers, rng);
    std::vector<NodeId> desired(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
      // A center that won no infected nodes keeps its position.
      desired[i] = cells[i].empty() ? centers[i] : cell_center(g, cells[i]);
    }
    // Re-optimized centers may coincide; the set must stay at k distinct
    // nodes. A first occurrence keeps its cell's optimum, later duplicates
    // fall back to their previous spot and then to the lowest free id.
    // Extending a source set never increases the infection range, so the
    // range trace stays non-increasing.
    std::vector<char> used(g.node_count(), 0);
    std::vector<NodeId> updated(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
      NodeId pick = desired[i];
      if (used[pick]) pick = centers[i];
      if (used[pick]) {
        NodeId v = 0;
        while (used[v]) ++v;
        pick = v;
      }
      used[pick] = 1;
      updated[i] = pick;
    }
    int moved = 0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const std::vector<int> d = bfs_distances(g, centers[i]);
      moved = std::max(moved, d[updated[i]]);
    }
    centers = updated;
    e.range_trace.push_back(infection_range(g, centers, infected));
    if (moved <= options.eta) break;
  }

  std::sort(centers.begin(), centers.end());
  e.sources = centers;
  e.iterations = iter;
  e.infection_range = e.range_trace.back();
  return e;
}

NodeId jordan_cell_center(const Graph& g, const std::vector<NodeId>& cell) {
  return jordan_center(g, cell).sources.front();
}

}  // namespace

Estimate mjc(const Graph& g, std::span<const NodeId> infected_in, int k,
             const MjcOptions& options, Rng& rng) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (infected.empty()) throw std::invalid_argument("mjc: empty infected set");
  if (k == 1) {
    Estimate e = jordan_center(g, infected);
    e.kind = EstimatorKind::MJC;
    e.iterations = 1;
    return e;
  }
  return mjc_loop(EstimatorKind::MJC, g, infected, k, options, rng, jordan_cell_center);
}

namespace {

std::map<NodeId, double> betweenness_scores(const Graph& g, const std::vector<NodeId>& infected) {
  // sigma_i[v]: shortest-path counts from each infected node; a pair (i, j)
  // contributes sigma_i[v] * sigma_j[v] / sigma_i[j] to every v strictly
  // inside one of their shortest paths.
  std::vector<std::vector<int>> dist;
  std::vector<std::vector<double>> sigma;
  dist.reserve(infected.size());
  sigma.reserve(infected.size());
  for (NodeId s : infected) {
    std::vector<int> d(g.node_count(), kUnreachable);
    std::vector<double> cnt(g.node_count(), 0.0);
    std::vector<NodeId> order;
    d[s] = 0;
    cnt[s] = 1.0;
    std::vector<NodeId> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (NodeId v : g.neighbors(u)) {
        if (d[v] == kUnreachable) {
          d[v] = d[u] + 1;
          queue.push_back(v);
        }
        if (d[v] == d[u] + 1) cnt[v] += cnt[u];
      }
    }
    dist.push_back(std::move(d));
    sigma.push_back(std::move(cnt));
  }

  std::map<NodeId, double> scores;
  std::vector<double> acc(g.node_count(), 0.0);
  for (std::size_t a = 0; a < infected.size(); ++a) {
    for (std::size_t b = a + 1; b < infected.size(); ++b) {
      const NodeId j = infected[b];
      if (dist[a][j] == kUnreachable) continue;
      const double total = sigma[a][j];
      if (total == 0.0) continue;
      const int dij = dist[a][j];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == infected[a] || v == j) continue;
        if (dist[a][v] != kUnreachable && dist[b][v] != kUnreachable &&
            dist[a][v] + dist[b][v] == dij) {
          acc[v] += sigma[a][v] * sigma[b][v] / total;
        }
      }
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v) scores.emplace(v, acc[v]);
  return scores;
}

std::map<NodeId, double> closeness_scores(const Graph& g, const std::vector<NodeId>& infected) {
  std::vector<double> acc(g.node_count(), 0.0);
  for (NodeId u : infected) {
    const std::vector<int> dist = bfs_distances(g, u);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v != u && dist[v] != kUnreachable) acc[v] += 1.0 / dist[v];
    }
  }
  std::map<NodeId, double> scores;
  for (NodeId v = 0; v < g.node_count(); ++v) scores.emplace(v, acc[v]);
  return scores;
}

std::map<NodeId, double> distance_scores(const Graph& g, const std::vector<NodeId>& infected) {
  std::vector<double> acc(g.node_count(), 0.0);
  std::vector<char> dead(g.node_count(), 0);
  for (NodeId u : infected) {
    const std::vector<int> dist = bfs_distances(g, u);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (dist[v] == kUnreachable) {
        dead[v] = 1;
      } else {
        acc[v] += dist[v];
      }
    }
  }
  std::map<NodeId, double> scores;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!dead[v]) scores.emplace(v, acc[v]);
  }
  return scores;
}

// Principal eigenvector of H's adjacency by power iteration. The iteration
// runs on A + I, which has the same eigenvectors but stays convergent on
// bipartite subgraphs (trees in particular); lambda is reported for A itself.
std::map<NodeId, double> eigenvector_scores(const Graph& h, double tol, int max_iter) {
  const std::size_t n = h.node_count();
  std::map<NodeId, double> scores;
  if (n == 1) {
    scores.emplace(0, 1.0);
    return scores;
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n, 0.0);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (NodeId u = 0; u < n; ++u) {
      double sum = x[u];  // the +I term
      for (NodeId v : h.neighbors(u)) sum += x[v];
      y[u] = sum;
    }
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw ConvergenceError("eigenvector centrality: zero iterate", iter);
    double delta = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      y[u] /= norm;
      delta = std::max(delta, std::fabs(y[u] - x[u]));
    }
    x.swap(y);
    if (delta <= tol) break;
  }
  if (iter >= max_iter) {
    throw ConvergenceError("eigenvector centrality failed to converge after " +
                               std::to_string(max_iter) + " iterations",
                           max_iter);
  }
  for (NodeId u = 0; u < n; ++u) scores.emplace(u, x[u]);
  return scores;
}

std::map<NodeId, double> pagerank_scores(const Graph& h, double damping, double tol,
                                         int max_iter) {
  const std::size_t n = h.node_count();
  std::map<NodeId, double> scores;
  if (n == 1) {
    scores.emplace(0, 1.0);
    return scores;
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n, 0.0);
  const double base = (1.0 - damping) / static_cast<double>(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (NodeId u = 0; u < n; ++u) {
      double sum = 0.0;
      for (NodeId v : h.neighbors(u)) sum += x[v] / static_cast<double>(h.degree(v));
      y[u] = base + damping * sum;
    }
    double delta = 0.0;
    for (NodeId u = 0; u < n; ++u) delta = std::max(delta, std::fabs(y[u] - x[u]));
    x.swap(y);
    if (delta <= tol) break;
  }
  for (NodeId u = 0; u < n; ++u) scores.emplace(u, x[u]);
  return scores;
}

NodeId argbest(const std::map<NodeId, double>& scores, bool maximize) {
  NodeId best = scores.begin()->first;
  double best_score = scores.begin()->second;
  for (const auto& [v, s] : scores) {
    if (maximize ? s > best_score : s < best_score) {
      best = v;
      best_score = s;
    }
  }
  return best;
}

std::vector<NodeId> top_k(const std::map<NodeId, double>& scores, int k, bool maximize) {
  std::vector<std::pair<NodeId, double>> items(scores.begin(), scores.end());
  std::stable_sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return maximize ? a.second > b.second : a.second < b.second;
    return a.first < b.first;
  });
  if (items.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("top_k: fewer scored nodes than k");
  }
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(items[static_cast<std::size_t>(i)].first);
  std::sort(out.begin(), out.end());
  return out;
}

constexpr double kPagerankDamping = 0.85;
constexpr double kIterTol = 1e-10;
constexpr int kIterMax = 1000;

}  // namespace

Estimate centrality_estimate(const Graph& g, std::span<const NodeId> infected_in,
                             EstimatorKind kind, int k, Rng& rng, const MjcOptions& options) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (infected.empty()) throw std::invalid_argument("centrality_estimate: empty infected set");
  if (k < 1) throw std::invalid_argument("centrality_estimate: k must be >= 1");
  for (NodeId u : infected) g.check_node(u);

  switch (kind) {
    case EstimatorKind::JC:
      if (k != 1) throw std::invalid_argument("JC is single-source; use MJC for k > 1");
      return jordan_center(g, infected);
    case EstimatorKind::MJC:
      return mjc(g, infected, k, options, rng);
    case EstimatorKind::BC:
    case EstimatorKind::CC:
    case EstimatorKind::DisC: {
      const bool maximize = kind != EstimatorKind::DisC;
      auto scorer = [kind](const Graph& gg, const std::vector<NodeId>& vi) {
        switch (kind) {
          case EstimatorKind::BC: return betweenness_scores(gg, vi);
          case EstimatorKind::CC: return closeness_scores(gg, vi);
          default: return distance_scores(gg, vi);
        }
      };
      if (k == 1) {
        auto scores = scorer(g, infected);
        if (scores.empty()) {
          throw std::runtime_error("centrality_estimate: no reachable candidates");
        }
        const NodeId best = argbest(scores, maximize);
        Estimate e = finish_single(kind, g, infected, best, std::move(scores));
        return e;
      }
      // Multi-source extension: the MJC loop with the per-cell center swapped.
      auto cell_center = [&](const Graph& gg, const std::vector<NodeId>& cell) {
        auto scores = scorer(gg, cell);
        return argbest(scores, maximize);
      };
      return mjc_loop(kind, g, infected, k, options, rng, cell_center);
    }
    case EstimatorKind::DegC:
    case EstimatorKind::EC:
    case EstimatorKind::PC:
    case EstimatorKind::Random: {
      const Subgraph h = minimal_connected_subgraph(g, infected);
      std::map<NodeId, double> local_scores;
      std::vector<NodeId> chosen_local;
      if (kind == EstimatorKind::Random) {
        std::vector<NodeId> pool(h.graph.node_count());
        std::iota(pool.begin(), pool.end(), 0);
        chosen_local = sample_without_replacement<NodeId>(rng, pool, static_cast<std::size_t>(k));
      } else {
        if (kind == EstimatorKind::DegC) {
          for (NodeId u = 0; u < h.graph.node_count(); ++u) {
            local_scores.emplace(u, static_cast<double>(h.graph.degree(u)));
          }
        } else if (kind == EstimatorKind::EC) {
          local_scores = eigenvector_scores(h.graph, kIterTol, kIterMax);
        } else {
          local_scores = pagerank_scores(h.graph, kPagerankDamping, kIterTol, kIterMax);
        }
        chosen_local = top_k(local_scores, k, /*maximize=*/true);
      }
      Estimate e;
      e.kind = kind;
      e.k = k;
      for (NodeId local : chosen_local) e.sources.push_back(h.to_parent[local]);
      std::sort(e.sources.begin(), e.sources.end());
      e.infection_range = infection_range(g, e.sources, infected);
      e.range_trace = {e.infection_range};
      if (!local_scores.empty()) {
        std::map<NodeId, double> parent_scores;
        for (const auto& [local, s] : local_scores) parent_scores.emplace(h.to_parent[local], s);
        e.scores = std::move(parent_scores);
      }
      return e;
    }
  }
  throw std::invalid_argument("centrality_estimate: unhandled estimator");
}

double error_distance(const Graph& g, std::span<const NodeId> s_true_in,
                      std::span<const NodeId> s_est_in) {
  const std::vector<NodeId> s_true = canonical_node_set(s_true_in);
  const std::vector<NodeId> s_est = canonical_node_set(s_est_in);
  if (s_true.size() != s_est.size()) {
    throw std::invalid_argument("error_distance: source sets differ in size");
  }
  if (s_true.empty()) throw std::invalid_argument("error_distance: empty source sets");
  const std::size_t k = s_true.size();
  if (k > 8) throw std::invalid_argument("error_distance: k > 8 not supported");

  std::vector<std::vector<int>> dist(k);
  for (std::size_t i = 0; i < k; ++i) dist[i] = bfs_distances(g, s_est[i]);

  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long best = std::numeric_limits<long>::max();
  do {
    long total = 0;
    bool feasible = true;
    for (std::size_t i = 0; i < k; ++i) {
      const int d = dist[i][s_true[perm[i]]];
      if (d == kUnreachable) {
        feasible = false;
        break;
      }
      total += d;
    }
    if (feasible) best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (best == std::numeric_limits<long>::max()) {
    throw std::runtime_error("error_distance: no feasible matching (disconnected sets)");
  }
  return static_cast<double>(best) / static_cast<double>(k);
}

}  // namespace epicenter
