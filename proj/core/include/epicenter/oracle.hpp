#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "epicenter/graph.hpp"
#include "epicenter/spreading.hpp"

namespace epicenter {

// Enumeration guards: beyond this the consistent-path space blows up.
constexpr std::size_t kMaxOracleNodes = 12;
constexpr int kMaxOracleElapsed = 6;

struct PathTableCell {
  double max_log_prob = kLogZero;
  std::uint64_t n_paths = 0;
};

using PathVisitor = std::function<void(const InfectionPath&, double log_prob)>;

/// Depth-first enumeration of every positive-probability infection path that
/// starts with exactly `sources` infected and ends with the infected set
/// equal to `infected` after `elapsed` slots. Infeasible branches are pruned:
/// an uninfected observed node farther from every potential spreader than the
/// remaining slots can never close the gap, and a transiently infected
/// unobserved node must still be able to exit by the final slot.
///
/// The visitor (optional) sees each consistent path with its log probability;
/// the returned cell carries the maximum and the exact path count.
PathTableCell enumerate_consistent_paths(const Graph& g, std::span<const NodeId> sources,
                                         std::span<const NodeId> infected, int elapsed,
                                         const SpreadParams& params,
                                         const PathVisitor& visit = nullptr);

/// All paths attaining the cell maximum within `tol` (two enumeration passes).
std::vector<InfectionPath> collect_max_paths(const Graph& g, std::span<const NodeId> sources,
                                             std::span<const NodeId> infected, int elapsed,
                                             const SpreadParams& params, double tol = 1e-12);

struct MlipOptions {
  int k = 1;
  int t_extra = 3;                // slack above each candidate's infection range
  bool prune_candidates = true;   // restrict to range <= jordan range + t_extra
  double tie_tol = 1e-12;         // log-space tie tolerance
};

struct MlipResult {
  std::vector<NodeId> best_sources;  // co-optimal set with the smallest range
  int best_elapsed = 0;
  double best_log_prob = kLogZero;
  std::vector<std::vector<NodeId>> co_optimal;  // every set tied at the maximum
  std::map<std::pair<std::vector<NodeId>, int>, PathTableCell> table;  // (set, t) -> cell
  std::uint64_t paths_enumerated = 0;
  int jordan_range = 0;
};

/// Exhaustive most-likely-infection-path source estimation: for each
/// candidate source set and each elapsed time in [d̄(S,V_i), d̄(S,V_i)+t_extra]
/// (clamped to the enumeration guard), the maximum consistent-path
/// probability; the winner is the global argmax. Candidate sets are k-subsets
/// of the node set, optionally pruned by infection range.
MlipResult mlip_estimate(const Graph& g, std::span<const NodeId> infected,
                         const SpreadParams& params, const MlipOptions& options = {});

/// Audit export: one "source_set,t,max_log_prob,n_paths" row per table cell.
std::string mlip_table_csv(const MlipResult& result, const Graph& g);

struct ElapsedTimeCheck {
  bool maximizer_at_range = false;  // argmax over t sits at t = d̄(v, V_i)
  bool decay_bounded = false;       // max-prob(t+1) <= delta * max-prob(t)
  int range = 0;
  double delta = 1.0;
  std::vector<std::pair<int, PathTableCell>> by_elapsed;
  bool pass() const { return maximizer_at_range && decay_bounded; }
};

/// Per-source check of the most-likely-elapsed-time law: the maximizer over
/// t in [d̄, d̄+t_extra] sits at t = d̄(v,V_i), and consecutive maxima decay by
/// at least delta = (1-alpha)^2 (SI), sqrt(alpha/beta) (SIR, SIRI), 1 (SIS).
ElapsedTimeCheck verify_optimal_elapsed_time(const Graph& g, NodeId source,
                                             std::span<const NodeId> infected,
                                             const SpreadParams& params, int t_extra,
                                             double log_tol = 1e-9);

/// Multi-source infection replayed into per-source trees: every node is
/// attached, at its first susceptible slot, to a uniformly chosen neighbor
/// infected in that slot; the sources then collapse into one super node.
struct SuperNodeGraph {
  std::vector<int> component;           // original node -> source index, -1 if never touched
  Graph merged;                         // union of the trees with sources merged
  std::vector<NodeId> merged_to_orig;   // merged id -> original id (super node -> sources[0])
  std::vector<std::optional<NodeId>> orig_to_merged;
  NodeId super_node = 0;
};

SuperNodeGraph super_node_graph(const Graph& tree, std::span<const NodeId> sources,
                                const InfectionPath& path, Rng& rng);

/// The path re-indexed onto the merged graph, with susceptible labels
/// re-derived from the merged adjacency.
InfectionPath translate_path(const SuperNodeGraph& sng, const InfectionPath& path);

/// Per-node parameters re-indexed onto the merged graph.
SpreadParams translate_params(const SuperNodeGraph& sng, const SpreadParams& params,
                              std::size_t orig_node_count);

/// Exhaustive k-Jordan center set: the k-subset minimizing the infection
/// range, lexicographically smallest on ties.
std::vector<NodeId> k_jordan_set_bruteforce(const Graph& g, std::span<const NodeId> infected,
                                            int k);

/// True iff the super node of the merged graph built from `path` attains the
/// minimum infection range there. Requires path.sources to be the exhaustive
/// k-Jordan center set of `infected`.
bool verify_k_jordan_supernode(const Graph& tree, std::span<const NodeId> infected, int k,
                               const InfectionPath& path, Rng& rng);

/// Closed-form first infection times of a most likely SIS path:
/// t_int(u) = t - d̄(u, T_u(v; H_v)) for every u in H_v except the source.
std::map<NodeId, int> sis_first_infection_times(const Graph& tree, NodeId source, int elapsed,
                                                std::span<const NodeId> infected);

/// First slot each node is infected in `path`; nodes never infected are absent.
std::map<NodeId, int> first_infection_times(const InfectionPath& path);

}  // namespace epicenter
