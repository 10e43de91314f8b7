#include "epicenter/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "epicenter/estimators.hpp"

namespace epicenter {

namespace {

std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<int>> dist;
  dist.reserve(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) dist.push_back(bfs_distances(g, u));
  return dist;
}

void relabel_uninfected_states(const Graph& g, std::vector<NodeState>& states) {
  for (NodeId u = 0; u < states.size(); ++u) {
    if (states[u] == NodeState::Infected || states[u] == NodeState::Recovered) continue;
    bool hot = false;
    for (NodeId v : g.neighbors(u)) {
      if (states[v] == NodeState::Infected) {
        hot = true;
        break;
      }
    }
    states[u] = hot ? NodeState::Susceptible : NodeState::NonSusceptible;
  }
}

// Search over per-slot state vectors. Each node picks its next core status in
// id order; once a slot is fully assigned the derived labels are recomputed
// and the look-ahead prunes fire.
//
// Without a visitor the recursion memoizes on (slot, state): the dynamics are
// Markov, so identical states at the same slot share their completion counts
// and maxima. With a visitor every path is walked explicitly.
class PathEnumerator {
 public:
  PathEnumerator(const Graph& g, std::vector<NodeId> sources, std::vector<NodeId> infected,
                 int elapsed, const SpreadParams& params, const PathVisitor& visit)
      : g_(g),
        params_(params),
        sources_(std::move(sources)),
        infected_(std::move(infected)),
        elapsed_(elapsed),
        visit_(visit),
        dist_(all_pairs_distances(g)) {
    in_vi_.assign(g_.node_count(), 0);
    for (NodeId u : infected_) in_vi_[u] = 1;
  }

  PathTableCell run() {
    if (params_.model == ModelKind::SI) {
      // SI sources stay infected forever, so they must be observed.
      for (NodeId s : sources_) {
        if (!in_vi_[s]) return cell_;
      }
    }
    std::vector<NodeState> init(g_.node_count(), NodeState::NonSusceptible);
    for (NodeId s : sources_) init[s] = NodeState::Infected;
    relabel_uninfected_states(g_, init);
    slots_.clear();
    slots_.push_back(std::move(init));
    if (!feasible(slots_.front(), elapsed_)) return cell_;
    if (visit_) {
      extend(0, 0.0);
    } else {
      cell_ = solve(0, slots_.front());
    }
    return cell_;
  }

 private:
  bool final_matches(const std::vector<NodeState>& states) const {
    std::vector<NodeId> infected_now;
    for (NodeId u = 0; u < states.size(); ++u) {
      if (states[u] == NodeState::Infected) infected_now.push_back(u);
    }
    return infected_now == infected_;
  }

  // Necessary conditions for the remaining `remaining` slots to reach a
  // consistent final state.
  bool feasible(const std::vector<NodeState>& states, int remaining) const {
    std::vector<NodeId> spreaders;
    for (NodeId u = 0; u < states.size(); ++u) {
      if (states[u] == NodeState::Infected) {
        spreaders.push_back(u);
      } else if (states[u] == NodeState::Recovered && params_.model == ModelKind::SIRI &&
                 params_.p_r.at(u) > 0.0) {
        spreaders.push_back(u);  // can relapse and spread again
      }
    }
    for (NodeId u : infected_) {
      if (states[u] == NodeState::Infected) continue;
      if (states[u] == NodeState::Recovered) {
        // Only a SIRI relapse can bring a recovered observed node back, and
        // it takes at least one slot.
        if (params_.model != ModelKind::SIRI || params_.p_r.at(u) <= 0.0 || remaining < 1) {
          return false;
        }
        continue;
      }
      int best = std::numeric_limits<int>::max();
      for (NodeId s : spreaders) {
        if (dist_[s][u] != kUnreachable) best = std::min(best, dist_[s][u]);
      }
      if (best > remaining) return false;
    }
    return true;
  }

  // Memoized route: completion count and best completion log-probability
  // from a given slot state onward.
  PathTableCell solve(int tau, const std::vector<NodeState>& state) {
    if (tau == elapsed_) {
      PathTableCell leaf;
      if (final_matches(state)) {
        leaf.n_paths = 1;
        leaf.max_log_prob = 0.0;
      }
      return leaf;
    }
    std::string key(state.size() + 1, '\0');
    key[0] = static_cast<char>(tau);
    for (std::size_t i = 0; i < state.size(); ++i) {
      key[i + 1] = static_cast<char>(state[i]);
    }
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    PathTableCell total;
    std::vector<NodeState> next(g_.node_count(), NodeState::NonSusceptible);
    expand_slot(tau, state, 0, next, 0.0, [&](const std::vector<NodeState>& chosen,
                                              double slot_factor) {
      const PathTableCell sub = solve(tau + 1, chosen);
      if (sub.n_paths == 0) return;
      total.n_paths += sub.n_paths;
      total.max_log_prob = std::max(total.max_log_prob, slot_factor + sub.max_log_prob);
    });
    memo_.emplace(std::move(key), total);
    return total;
  }

  void extend(int tau, double log_prob) {
    if (tau == elapsed_) {
      if (final_matches(slots_.back())) {
        ++cell_.n_paths;
        cell_.max_log_prob = std::max(cell_.max_log_prob, log_prob);
        if (visit_) {
          InfectionPath path;
          path.sources = sources_;
          path.slots = slots_;
          visit_(path, log_prob);
        }
      }
      return;
    }
    // push_back below may reallocate slots_, so the previous slot is copied.
    const std::vector<NodeState> prev_state = slots_.back();
    std::vector<NodeState> next(g_.node_count(), NodeState::NonSusceptible);
    expand_slot(tau, prev_state, 0, next, 0.0,
                [&](const std::vector<NodeState>& chosen, double slot_factor) {
                  slots_.push_back(chosen);
                  extend(tau + 1, log_prob + slot_factor);
                  slots_.pop_back();
                });
  }

  // Enumerates every legal assignment of the next slot given `prev_state`,
  // handing each completed state (labels re-derived, prunes applied) to the
  // sink together with the slot's transition factor.
  template <typename Sink>
  void expand_slot(int tau, const std::vector<NodeState>& prev_state, NodeId u,
                   std::vector<NodeState>& next, double factor, const Sink& sink) {
    if (u == g_.node_count()) {
      relabel_uninfected_states(g_, next);
      if (!feasible(next, elapsed_ - (tau + 1))) return;
      sink(next, factor);
      return;
    }

    const NodeState prev = prev_state[u];
    const double ps = params_.p_s.at(u);
    const double pi = params_.p_i.at(u);
    const double pr = params_.p_r.at(u);
    const ModelKind model = params_.model;
    const bool observed = in_vi_[u] != 0;
    const bool slots_left = tau + 1 < elapsed_;
    // An unobserved node may only hold the infection while it can still exit
    // before the final slot.
    const bool unobserved_can_hold = slots_left && pi < 1.0;

    auto take = [&](NodeState state, double f) {
      if (f == kLogZero) return;
      next[u] = state;
      expand_slot(tau, prev_state, u + 1, next, factor + f, sink);
    };
    auto log_p = [](double p) { return p > 0.0 ? std::log(p) : kLogZero; };
    auto log_1mp = [](double p) { return p < 1.0 ? std::log1p(-p) : kLogZero; };

    switch (prev) {
      case NodeState::NonSusceptible:
        take(NodeState::NonSusceptible, 0.0);
        break;
      case NodeState::Susceptible: {
        const bool allow_infect =
            observed || (model != ModelKind::SI && unobserved_can_hold);
        if (allow_infect) take(NodeState::Infected, log_p(ps));
        take(NodeState::NonSusceptible, log_1mp(ps));
        break;
      }
      case NodeState::Infected:
        switch (model) {
          case ModelKind::SI:
            take(NodeState::Infected, 0.0);
            break;
          case ModelKind::SIR:
            if (observed || unobserved_can_hold) take(NodeState::Infected, log_p(pi));
            // An observed node that recovers under SIR can never be infected
            // again; that branch is dead.
            if (!observed) take(NodeState::Recovered, log_1mp(pi));
            break;
          case ModelKind::SIRI:
            if (observed || unobserved_can_hold) take(NodeState::Infected, log_p(pi));
            // An observed node may pass through recovery only if a relapse
            // can still bring it back in time.
            if (!observed || (pr > 0.0 && slots_left)) {
              take(NodeState::Recovered, log_1mp(pi));
            }
            break;
          case ModelKind::SIS:
            if (observed || unobserved_can_hold) take(NodeState::Infected, log_p(pi));
            if (!observed || slots_left) take(NodeState::NonSusceptible, log_1mp(pi));
            break;
        }
        break;
      case NodeState::Recovered:
        if (model == ModelKind::SIR) {
          take(NodeState::Recovered, 0.0);
        } else if (model == ModelKind::SIRI) {
          if (observed || unobserved_can_hold) take(NodeState::Infected, log_p(pr));
          if (!observed || slots_left) take(NodeState::Recovered, log_1mp(pr));
        }
        break;
    }
  }

  const Graph& g_;
  const SpreadParams& params_;
  std::vector<NodeId> sources_;
  std::vector<NodeId> infected_;
  int elapsed_;
  const PathVisitor& visit_;
  std::vector<std::vector<int>> dist_;
  std::vector<char> in_vi_;
  std::vector<std::vector<NodeState>> slots_;
  std::unordered_map<std::string, PathTableCell> memo_;
  PathTableCell cell_;
};

}  // namespace

PathTableCell enumerate_consistent_paths(const Graph& g, std::span<const NodeId> sources_in,
                                         std::span<const NodeId> infected_in, int elapsed,
                                         const SpreadParams& params, const PathVisitor& visit) {
  if (g.node_count() > kMaxOracleNodes) {
    throw std::invalid_argument("enumerate_consistent_paths: instance has " +
                                std::to_string(g.node_count()) + " nodes; the guard is " +
                                std::to_string(kMaxOracleNodes) +
                                " — shrink the instance");
  }
  if (elapsed > kMaxOracleElapsed || elapsed < 0) {
    throw std::invalid_argument("enumerate_consistent_paths: elapsed time " +
                                std::to_string(elapsed) + " exceeds the guard of " +
                                std::to_string(kMaxOracleElapsed) +
                                " slots — shrink the instance");
  }
  params.validate(g.node_count());
  const std::vector<NodeId> sources = canonical_node_set(sources_in);
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (sources.empty()) throw std::invalid_argument("enumerate_consistent_paths: no sources");
  if (infected.empty()) {
    throw std::invalid_argument("enumerate_consistent_paths: empty observed set");
  }
  for (NodeId u : sources) g.check_node(u);
  for (NodeId u : infected) g.check_node(u);
  if (elapsed < infection_range(g, sources, infected)) {
    throw std::invalid_argument(
        "enumerate_consistent_paths: elapsed time below the infection range");
  }

  PathEnumerator enumerator(g, sources, infected, elapsed, params, visit);
  return enumerator.run();
}

std::vector<InfectionPath> collect_max_paths(const Graph& g, std::span<const NodeId> sources,
                                             std::span<const NodeId> infected, int elapsed,
                                             const SpreadParams& params, double tol) {
  const PathTableCell cell = enumerate_consistent_paths(g, sources, infected, elapsed, params);
  std::vector<InfectionPath> out;
  if (cell.n_paths == 0) return out;
  enumerate_consistent_paths(g, sources, infected, elapsed, params,
                             [&](const InfectionPath& path, double lp) {
                               if (lp >= cell.max_log_prob - tol) out.push_back(path);
                             });
  return out;
}

namespace {

void k_subsets(std::size_t n, int k, const std::function<void(const std::vector<NodeId>&)>& fn) {
  std::vector<NodeId> pick(static_cast<std::size_t>(k));
  std::function<void(NodeId, int)> rec = [&](NodeId start, int depth) {
    if (depth == k) {
      fn(pick);
      return;
    }
    for (NodeId v = start; v < n; ++v) {
      pick[static_cast<std::size_t>(depth)] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

MlipResult mlip_estimate(const Graph& g, std::span<const NodeId> infected_in,
                         const SpreadParams& params, const MlipOptions& options) {
  if (options.k < 1) throw std::invalid_argument("mlip_estimate: k must be >= 1");
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  MlipResult result;
  result.jordan_range = jordan_center(g, infected).infection_range;

  const int bound = result.jordan_range + options.t_extra;
  std::vector<std::pair<std::vector<NodeId>, int>> candidates;  // (set, range)
  k_subsets(g.node_count(), options.k, [&](const std::vector<NodeId>& set) {
    int range;
    try {
      range = infection_range(g, set, infected);
    } catch (const std::runtime_error&) {
      return;  // observed nodes unreachable from this set
    }
    if (options.prune_candidates && range > bound) return;
    candidates.emplace_back(set, range);
  });

  for (const auto& [set, range] : candidates) {
    if (range > kMaxOracleElapsed) {
      throw std::invalid_argument("mlip_estimate: candidate range " + std::to_string(range) +
                                  " exceeds the elapsed-time guard — shrink the instance");
    }
    const int t_hi = std::min(range + options.t_extra, kMaxOracleElapsed);
    for (int t = range; t <= t_hi; ++t) {
      const PathTableCell cell = enumerate_consistent_paths(g, set, infected, t, params);
      result.table.emplace(std::make_pair(set, t), cell);
      result.paths_enumerated += cell.n_paths;
    }
  }

  double best = kLogZero;
  for (const auto& [key, cell] : result.table) {
    if (cell.n_paths > 0) best = std::max(best, cell.max_log_prob);
  }
  if (best == kLogZero) {
    throw std::runtime_error("mlip_estimate: no consistent path for any candidate source set");
  }
  result.best_log_prob = best;

  // Every set tied at the maximum; the reported winner is the one with the
  // smallest infection range (then lexicographic), which is what the
  // optimality theorems speak about.
  std::vector<NodeId> winner;
  int winner_range = std::numeric_limits<int>::max();
  int winner_elapsed = 0;
  for (const auto& [set, range] : candidates) {
    double set_best = kLogZero;
    int set_elapsed = 0;
    const int t_hi = std::min(range + options.t_extra, kMaxOracleElapsed);
    for (int t = range; t <= t_hi; ++t) {
      const auto& cell = result.table.at(std::make_pair(set, t));
      if (cell.n_paths > 0 && cell.max_log_prob > set_best) {
        set_best = cell.max_log_prob;
        set_elapsed = t;
      }
    }
    if (set_best >= best - options.tie_tol && set_best != kLogZero) {
      result.co_optimal.push_back(set);
      if (range < winner_range || (range == winner_range && set < winner)) {
        winner = set;
        winner_range = range;
        winner_elapsed = set_elapsed;
      }
    }
  }
  result.best_sources = winner;
  result.best_elapsed = winner_elapsed;
  return result;
}

std::string mlip_table_csv(const MlipResult& result, const Graph& g) {
  std::ostringstream out;
  out.precision(17);
  out << "source_set,t,max_log_prob,n_paths\n";
  for (const auto& [key, cell] : result.table) {
    const auto& [set, t] = key;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) out << ';';
      out << g.label(set[i]);
    }
    out << ',' << t << ',';
    if (cell.n_paths == 0) {
      out << "nan";
    } else {
      out << cell.max_log_prob;
    }
    out << ',' << cell.n_paths << "\n";
  }
  return out.str();
}

ElapsedTimeCheck verify_optimal_elapsed_time(const Graph& g, NodeId source,
                                             std::span<const NodeId> infected,
                                             const SpreadParams& params, int t_extra,
                                             double log_tol) {
  ElapsedTimeCheck check;
  const std::vector<NodeId> sources{source};
  check.range = infection_range(g, sources, infected);
  if (check.range + t_extra > kMaxOracleElapsed) {
    throw std::invalid_argument("verify_optimal_elapsed_time: range + t_extra exceeds the "
                                "elapsed-time guard — shrink the instance");
  }

  const double alpha = params.alpha();
  const double beta = params.beta();
  switch (params.model) {
    case ModelKind::SI: check.delta = (1.0 - alpha) * (1.0 - alpha); break;
    case ModelKind::SIR:
    case ModelKind::SIRI: check.delta = alpha == beta ? 1.0 : std::sqrt(alpha / beta); break;
    case ModelKind::SIS: check.delta = 1.0; break;
  }

  for (int t = check.range; t <= check.range + t_extra; ++t) {
    check.by_elapsed.emplace_back(t, enumerate_consistent_paths(g, sources, infected, t, params));
  }

  const auto& head = check.by_elapsed.front().second;
  check.maximizer_at_range = head.n_paths > 0;
  for (const auto& [t, cell] : check.by_elapsed) {
    if (cell.n_paths > 0 && cell.max_log_prob > head.max_log_prob + log_tol) {
      check.maximizer_at_range = false;
    }
  }

  check.decay_bounded = true;
  const double log_delta = check.delta > 0.0 ? std::log(check.delta) : kLogZero;
  for (std::size_t i = 0; i + 1 < check.by_elapsed.size(); ++i) {
    const auto& lo = check.by_elapsed[i].second;
    const auto& hi = check.by_elapsed[i + 1].second;
    if (hi.n_paths == 0) continue;  // nothing to bound
    if (lo.n_paths == 0 || hi.max_log_prob > lo.max_log_prob + log_delta + log_tol) {
      check.decay_bounded = false;
    }
  }
  return check;
}

SuperNodeGraph super_node_graph(const Graph& tree, std::span<const NodeId> sources_in,
                                const InfectionPath& path, Rng& rng) {
  if (!tree.is_tree()) throw std::invalid_argument("super_node_graph requires a tree");
  const std::vector<NodeId> sources = canonical_node_set(sources_in);
  if (sources.size() < 2) throw std::invalid_argument("super_node_graph: need k >= 2 sources");
  if (path.sources != sources) {
    throw std::invalid_argument("super_node_graph: path sources differ from the given set");
  }

  SuperNodeGraph sng;
  sng.component.assign(tree.node_count(), -1);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    sng.component[sources[i]] = static_cast<int>(i);
  }

  std::vector<std::pair<NodeId, NodeId>> tree_edges;  // (parent, child) in original ids
  for (int tau = 0; tau <= path.elapsed(); ++tau) {
    for (NodeId v = 0; v < tree.node_count(); ++v) {
      if (sng.component[v] != -1) continue;
      if (path.state(v, tau) != NodeState::Susceptible) continue;
      // First slot v is susceptible: attach it to one of the neighbors that
      // makes it susceptible, chosen uniformly.
      std::vector<NodeId> hot;
      for (NodeId u : tree.neighbors(v)) {
        if (path.state(u, tau) == NodeState::Infected) hot.push_back(u);
      }
      if (hot.empty()) {
        throw std::invalid_argument("super_node_graph: path labels a node susceptible without "
                                    "an infected neighbor");
      }
      const NodeId parent =
          hot.size() == 1 ? hot.front()
                          : hot[static_cast<std::size_t>(uniform_below(rng, hot.size()))];
      if (sng.component[parent] < 0) {
        throw std::invalid_argument("super_node_graph: infected neighbor was never assigned");
      }
      sng.component[v] = sng.component[parent];
      tree_edges.emplace_back(parent, v);
    }
  }

  std::vector<char> is_source(tree.node_count(), 0);
  for (NodeId s : sources) is_source[s] = 1;

  sng.merged_to_orig.push_back(sources.front());  // super node stands for the whole set
  sng.orig_to_merged.assign(tree.node_count(), std::nullopt);
  for (NodeId s : sources) sng.orig_to_merged[s] = 0;
  for (NodeId v = 0; v < tree.node_count(); ++v) {
    if (sng.component[v] >= 0 && !is_source[v]) {
      sng.orig_to_merged[v] = static_cast<NodeId>(sng.merged_to_orig.size());
      sng.merged_to_orig.push_back(v);
    }
  }
  sng.super_node = 0;

  std::vector<std::pair<NodeId, NodeId>> merged_edges;
  merged_edges.reserve(tree_edges.size());
  for (auto [p, c] : tree_edges) {
    merged_edges.emplace_back(*sng.orig_to_merged[p], *sng.orig_to_merged[c]);
  }
  sng.merged = Graph::from_edges(sng.merged_to_orig.size(), merged_edges);
  return sng;
}

InfectionPath translate_path(const SuperNodeGraph& sng, const InfectionPath& path) {
  InfectionPath out;
  out.sources = {sng.super_node};
  for (int tau = 0; tau <= path.elapsed(); ++tau) {
    std::vector<NodeState> row(sng.merged.node_count(), NodeState::NonSusceptible);
    for (NodeId m = 0; m < sng.merged.node_count(); ++m) {
      const NodeState s = path.state(sng.merged_to_orig[m], tau);
      if (s == NodeState::Infected || s == NodeState::Recovered) row[m] = s;
    }
    relabel_uninfected_states(sng.merged, row);
    out.slots.push_back(std::move(row));
  }
  return out;
}

SpreadParams translate_params(const SuperNodeGraph& sng, const SpreadParams& params,
                              std::size_t orig_node_count) {
  params.validate(orig_node_count);
  if (params.p_s.is_scalar() && params.p_i.is_scalar() && params.p_r.is_scalar()) return params;
  auto remap = [&](const ProbField& f) {
    std::vector<double> values(sng.merged.node_count());
    for (NodeId m = 0; m < sng.merged.node_count(); ++m) values[m] = f.at(sng.merged_to_orig[m]);
    return ProbField(std::move(values));
  };
  SpreadParams out;
  out.model = params.model;
  out.p_s = remap(params.p_s);
  out.p_i = remap(params.p_i);
  out.p_r = remap(params.p_r);
  return out;
}

std::vector<NodeId> k_jordan_set_bruteforce(const Graph& g, std::span<const NodeId> infected_in,
                                            int k) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (infected.empty()) throw std::invalid_argument("k_jordan_set_bruteforce: empty V_i");
  if (k < 1 || static_cast<std::size_t>(k) > g.node_count()) {
    throw std::invalid_argument("k_jordan_set_bruteforce: bad k");
  }

  // Distances from each observed node; enough to score any candidate set.
  std::vector<std::vector<int>> dist;
  dist.reserve(infected.size());
  for (NodeId u : infected) dist.push_back(bfs_distances(g, u));

  std::vector<NodeId> best;
  int best_range = std::numeric_limits<int>::max();
  k_subsets(g.node_count(), k, [&](const std::vector<NodeId>& set) {
    int range = 0;
    for (std::size_t i = 0; i < infected.size(); ++i) {
      int nearest = std::numeric_limits<int>::max();
      for (NodeId s : set) {
        if (dist[i][s] != kUnreachable) nearest = std::min(nearest, dist[i][s]);
      }
      if (nearest == std::numeric_limits<int>::max()) {
        range = std::numeric_limits<int>::max();
        break;
      }
      range = std::max(range, nearest);
    }
    if (range < best_range || (range == best_range && set < best)) {
      best_range = range;
      best = set;
    }
  });
  if (best.empty()) throw std::runtime_error("k_jordan_set_bruteforce: V_i unreachable");
  return best;
}

bool verify_k_jordan_supernode(const Graph& tree, std::span<const NodeId> infected_in, int k,
                               const InfectionPath& path, Rng& rng) {
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  if (k == 1) {
    // No merge to perform; this is plain Jordan-center minimality.
    const std::vector<NodeId> jordan_set = k_jordan_set_bruteforce(tree, infected, 1);
    return infection_range(tree, jordan_set, infected) ==
           jordan_center(tree, infected).infection_range;
  }
  const std::vector<NodeId> jordan_set = k_jordan_set_bruteforce(tree, infected, k);
  // Any source set attaining the brute-force minimum range qualifies as a
  // k-Jordan center set.
  if (infection_range(tree, path.sources, infected) !=
      infection_range(tree, jordan_set, infected)) {
    throw std::invalid_argument(
        "verify_k_jordan_supernode: path sources are not a k-Jordan center set");
  }
  const SuperNodeGraph sng = super_node_graph(tree, path.sources, path, rng);

  std::vector<NodeId> merged_infected;
  for (NodeId u : infected) {
    if (!sng.orig_to_merged[u]) {
      throw std::runtime_error("verify_k_jordan_supernode: observed node missing from the "
                               "merged graph");
    }
    merged_infected.push_back(*sng.orig_to_merged[u]);
  }
  merged_infected = canonical_node_set(merged_infected);

  const Estimate jc = jordan_center(sng.merged, merged_infected);
  const NodeId super[1] = {sng.super_node};
  const int super_range = infection_range(sng.merged, super, merged_infected);
  return super_range == jc.infection_range;
}

std::map<NodeId, int> sis_first_infection_times(const Graph& tree, NodeId source, int elapsed,
                                                std::span<const NodeId> infected_in) {
  if (!tree.is_tree()) throw std::invalid_argument("sis_first_infection_times requires a tree");
  const std::vector<NodeId> infected = canonical_node_set(infected_in);
  const NodeId sources[1] = {source};
  const int range = infection_range(tree, sources, infected);
  if (elapsed < range) {
    throw std::invalid_argument("sis_first_infection_times: elapsed time " +
                                std::to_string(elapsed) + " is below the infection range " +
                                std::to_string(range));
  }

  // H_v: minimal subtree spanning V_i and the source.
  std::vector<NodeId> terminals = infected;
  terminals.push_back(source);
  const Subgraph h = minimal_connected_subgraph(tree, canonical_node_set(terminals));
  const NodeId source_local = *h.local_id(source);

  std::map<NodeId, int> times;
  for (NodeId local = 0; local < h.graph.node_count(); ++local) {
    if (local == source_local) continue;
    const std::vector<NodeId> side = subtree_away_from(h.graph, local, source_local);
    const std::vector<int> dist = bfs_distances(h.graph, local);
    int reach = 0;
    for (NodeId x : side) reach = std::max(reach, dist[x]);
    const int t_int = elapsed - reach;
    times.emplace(h.to_parent[local], t_int);
  }
  return times;
}

std::map<NodeId, int> first_infection_times(const InfectionPath& path) {
  std::map<NodeId, int> times;
  for (int tau = 0; tau <= path.elapsed(); ++tau) {
    for (NodeId u : path.infected_at(tau)) {
      times.emplace(u, tau);  // emplace keeps the earliest slot
    }
  }
  return times;
}

}  // namespace epicenter
