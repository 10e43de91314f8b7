#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "epicenter/graph.hpp"
#include "epicenter/oracle.hpp"
#include "epicenter/spreading.hpp"

namespace epicenter {

/// A small, self-contained oracle scenario: graph, parameters, observation,
/// and the knobs the named checks need.
struct OracleInstance {
  Graph graph;
  SpreadParams params;
  std::vector<NodeId> infected;
  std::optional<NodeId> source;
  int k = 1;
  int t_extra = 3;
  std::uint64_t seed = 1;
};

/// Instance files use the key=value format with [graph], [params],
/// [observation] and [oracle] sections; per-node probabilities are written as
/// 'p_s.<label> = <value>' overrides of the scalar default.
OracleInstance load_instance(std::istream& in);
OracleInstance load_instance_file(const std::string& path);

/// Built-in instances backing `oracle --check <name>` when no file is given.
OracleInstance builtin_instance(const std::string& check);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::vector<std::string> details;
};

/// theorem1: the exhaustive MLIP winner's infection range equals the Jordan
/// center's.
CheckResult check_theorem1(const OracleInstance& inst);

/// theorem2: with k sources, the MLIP winner's range equals the brute-force
/// k-Jordan center set's.
CheckResult check_theorem2(const OracleInstance& inst);

/// prop1: per-source maximizer over t sits at t = d̄, with the per-model decay
/// factor bounding consecutive maxima.
CheckResult check_prop1(const OracleInstance& inst);

/// prop2: for neighboring u, v with t_v < t_u the best path for v is at least
/// as likely as the best path for u.
CheckResult check_prop2(const OracleInstance& inst);

/// lemma1: an SI path has the same probability on the tree and on its super
/// node graph.
CheckResult check_lemma1(const OracleInstance& inst);

/// lemma2: the super node of the merged graph built from a consistent path of
/// the k-Jordan center set is a Jordan center there.
CheckResult check_lemma2(const OracleInstance& inst);

/// sisfit: the best SIS path realizes the closed-form first infection times.
CheckResult check_sis_fit(const OracleInstance& inst);

/// Dispatch by name: theorem1|theorem2|prop1|prop2|lemma1|lemma2|sisfit.
CheckResult run_check(const std::string& name, const OracleInstance& inst);

/// True when no maximum-probability path infects a truncated node (realized
/// degree < 2) before the final slot, i.e. the finite instance behaves like
/// its infinite-tree extension for every path that decides the argmax.
bool max_paths_avoid_boundary(const Graph& g, std::span<const NodeId> sources,
                              std::span<const NodeId> infected, int elapsed,
                              const SpreadParams& params);

}  // namespace epicenter
