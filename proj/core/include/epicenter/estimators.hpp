#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "epicenter/graph.hpp"
#include "epicenter/rng.hpp"

namespace epicenter {

enum class EstimatorKind { JC, MJC, BC, CC, DisC, DegC, EC, PC, Random };

std::string to_string(EstimatorKind k);
EstimatorKind parse_estimator(const std::string& s);

struct Estimate {
  EstimatorKind kind = EstimatorKind::JC;
  int k = 1;
  std::vector<NodeId> sources;  // sorted, |sources| == k
  int infection_range = 0;
  std::optional<std::map<NodeId, double>> scores;
  int iterations = 0;
  std::vector<int> range_trace;  // initial range, then one entry per iteration
};

std::string estimate_csv_header();
std::string estimate_csv_row(const Estimate& e, const Graph& g);

/// Thrown when an iterative score (eigenvector centrality) fails to settle.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations(iterations) {}
  int iterations;
};

/// Jordan center: the node minimizing the infection range d̄(v, V_i),
/// computed by one BFS per observed infected node. Ties go to the lowest id;
/// every node's range is available in `scores`.
Estimate jordan_center(const Graph& g, std::span<const NodeId> infected);

/// Assigns each infected node to its nearest center; equidistant ties are
/// broken uniformly at random. Returns one (possibly empty) set per center.
std::vector<std::vector<NodeId>> voronoi_partition(const Graph& g,
                                                   std::span<const NodeId> infected,
                                                   std::span<const NodeId> centers, Rng& rng);

struct MjcOptions {
  int eta = 0;         // stop once no center moves farther than this
  int max_iter = 30;
  bool init_over_all_nodes = false;  // default: init inside the minimal subgraph of V_i
};

/// Multiple-Jordan-center heuristic: random initial k-set, then alternate
/// Voronoi partitioning with per-cell Jordan centers until centers stop
/// moving. k = 1 short-circuits to jordan_center.
Estimate mjc(const Graph& g, std::span<const NodeId> infected, int k, const MjcOptions& options,
             Rng& rng);

/// Centrality benchmarks. BC/CC/DisC score every node of g with sums over
/// V_i; DegC/EC/PC score the minimal connected subgraph H of V_i; Random
/// draws from H. For k > 1, BC/CC/DisC reuse the MJC loop with the per-cell
/// center swapped, the others take the top k scores.
Estimate centrality_estimate(const Graph& g, std::span<const NodeId> infected,
                             EstimatorKind kind, int k, Rng& rng,
                             const MjcOptions& options = {});

/// Mean hop error under the best bijection between the two equal-size sets;
/// exhaustive over the k! matchings.
double error_distance(const Graph& g, std::span<const NodeId> s_true,
                      std::span<const NodeId> s_est);

}  // namespace epicenter
