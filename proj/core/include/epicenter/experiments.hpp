#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "epicenter/estimators.hpp"
#include "epicenter/graph.hpp"
#include "epicenter/spreading.hpp"

namespace epicenter {

struct NetworkSpec {
  enum class Kind { RandomTree, EdgeList };
  Kind kind = Kind::RandomTree;
  int degree_low = 3;
  int degree_high = 5;
  std::size_t prerealize = 300;  // nodes realized before sources are drawn
  std::string path;              // edge-list file for Kind::EdgeList
};

struct ScenarioConfig {
  std::string id;
  NetworkSpec network;
  ModelKind model = ModelKind::SI;
  int scheme = 4;        // parameter sampling scheme, 1..4
  double x_value = 0.0;  // grid value for schemes 1..3
  int k = 1;
  int runs = 500;
  std::size_t stop_threshold = 101;
  std::vector<EstimatorKind> estimators;
  std::uint64_t master_seed = 1;
  MjcOptions mjc;
  int max_retries = 1000;
};

/// Parameter sampling per the four experiment schemes:
///  1: p_s ~ U[0,1], p_i = x from {0.1..1}, p_r ~ U[0, min{1, p_i/(1-p_i)}]  (SIRI)
///  2: p_s ~ U[0,1], p_i ~ U[0.5,1], p_r = x from {0, 0.1..1}               (SIRI)
///  3: p_i = x from {0.5..1}, p_s ~ U[0, p_i]                               (SIS)
///  4: every probability per node ~ U[0,1] for the given model (heterogeneous)
SpreadParams sample_params(int scheme, ModelKind model, double x_value,
                           std::size_t node_count, Rng& rng);

struct EstimatorOutcome {
  Estimate estimate;
  double error = 0.0;
  std::string failure;  // non-empty when the estimator threw
  bool failed() const { return !failure.empty(); }
};

struct RunRecord {
  int run_index = 0;
  std::vector<NodeId> true_sources;
  std::size_t infected_count = 0;
  int retries = 0;
  std::vector<std::pair<EstimatorKind, EstimatorOutcome>> outcomes;
};

/// Runs the full protocol: per run derive seeds from (master_seed, run,
/// attempt), realize the network, draw k distinct sources and the parameters,
/// simulate until the stop threshold (retrying extinct runs with fresh
/// seeds), then apply every configured estimator. Output is a pure function
/// of the config.
std::vector<RunRecord> run_scenario(const ScenarioConfig& cfg);

struct EstimatorSummary {
  EstimatorKind kind = EstimatorKind::JC;
  int n = 0;  // runs where the estimator succeeded
  double mean_error = 0.0;
  double stderr_error = 0.0;
  double ci95 = 0.0;
  int failures = 0;
};

struct Summary {
  int runs = 0;
  double mean_retries = 0.0;
  std::vector<EstimatorSummary> per_estimator;
};

Summary aggregate(const std::vector<RunRecord>& records);

void emit_records_csv(const std::vector<RunRecord>& records, const Graph* g, std::ostream& out);

struct SummaryCsvRow {
  std::string scenario_id;
  std::string estimator;
  int k = 1;
  std::string model;
  int scheme = 4;
  double x_value = 0.0;
  int runs = 0;
  double mean_error = 0.0;
  double stderr_error = 0.0;
  double ci95 = 0.0;
  double mean_retries = 0.0;
};

std::vector<SummaryCsvRow> summary_rows(const ScenarioConfig& cfg, const Summary& summary);
void emit_summary_csv(const std::vector<SummaryCsvRow>& rows, std::ostream& out);
std::vector<SummaryCsvRow> parse_summary_csv(std::istream& in);

/// Self-contained SVG: one series per estimator over the x-axis values, CI95
/// error bars. Every x value must carry the same estimator set.
void emit_plot(const std::vector<std::pair<double, Summary>>& by_x, std::ostream& out);

std::vector<ScenarioConfig> parse_scenarios(std::istream& in);
std::vector<ScenarioConfig> parse_scenarios_file(const std::string& path);

}  // namespace epicenter
