#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epicenter/estimators.hpp"
#include "epicenter/experiments.hpp"
#include "epicenter/graph.hpp"
#include "epicenter/kvconfig.hpp"
#include "epicenter/lazy_tree.hpp"
#include "epicenter/oracle.hpp"
#include "epicenter/spreading.hpp"
#include "epicenter/verification.hpp"

namespace {

using namespace epicenter;

std::vector<NodeId> parse_node_list(const Graph& g, const std::string& csv) {
  std::vector<NodeId> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const std::size_t a = token.find_first_not_of(" \t");
    const std::size_t b = token.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    const std::string label = token.substr(a, b - a + 1);
    auto id = g.find_label(label);
    if (!id) throw std::runtime_error("unknown node label: '" + label + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw std::runtime_error("empty node list");
  return out;
}

std::string join_labels(const Graph& g, const std::vector<NodeId>& nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ';';
    s += g.label(nodes[i]);
  }
  return s;
}

struct SimulateArgs {
  std::string graph_file;
  bool random_tree = false;
  int degree_low = 3;
  int degree_high = 5;
  std::string model = "SI";
  std::string params_file;
  double p_s = -1.0, p_i = -1.0, p_r = 0.0;
  std::string sources = "0";
  std::size_t stop_n = 0;
  int stop_t = -1;
  std::uint64_t seed = 1;
};

SpreadParams params_from_args(const SimulateArgs& args) {
  if (!args.params_file.empty()) return parse_params_file(args.params_file);
  const ModelKind model = parse_model(args.model);
  if (args.p_s < 0.0) throw std::runtime_error("either --params or --p-s is required");
  switch (model) {
    case ModelKind::SI: return SpreadParams::si(args.p_s);
    case ModelKind::SIR: return SpreadParams::sir(args.p_s, args.p_i < 0 ? 0.5 : args.p_i);
    case ModelKind::SIRI:
      return SpreadParams::siri(args.p_s, args.p_i < 0 ? 0.5 : args.p_i, args.p_r);
    case ModelKind::SIS: return SpreadParams::sis(args.p_s, args.p_i < 0 ? 0.5 : args.p_i);
  }
  throw std::runtime_error("unreachable");
}

int cmd_simulate(const SimulateArgs& args) {
  StopRule stop;
  if (args.stop_n > 0) {
    stop = StopRule::infected_at_least(args.stop_n);
  } else if (args.stop_t >= 0) {
    stop = StopRule::after(args.stop_t);
  } else {
    throw std::runtime_error("one of --stop-n or --stop-t is required");
  }
  const SpreadParams params = params_from_args(args);
  Rng rng(args.seed);

  InfectionOutcome outcome;
  Graph graph;
  if (args.random_tree) {
    LazyTree tree(args.degree_low, args.degree_high, derive_seed(args.seed, 0x7ee1));
    tree.expand_to_size(1);
    std::vector<NodeId> sources;
    {
      std::stringstream ss(args.sources);
      std::string token;
      while (std::getline(ss, token, ',')) sources.push_back(std::stoul(token));
    }
    for (NodeId s : sources) tree.expand_to_size(s + 1);
    outcome = simulate(tree, sources, params, stop, rng);
    graph = tree.graph();
  } else {
    if (args.graph_file.empty()) {
      throw std::runtime_error("one of --graph or --random-tree is required");
    }
    graph = load_edge_list_file(args.graph_file).graph;
    const std::vector<NodeId> sources = parse_node_list(graph, args.sources);
    outcome = simulate(graph, sources, params, stop, rng);
  }

  std::cout << "elapsed,slots,stop_reason,infected_count,infected\n";
  std::cout << outcome.path.elapsed() << ',' << outcome.path.slots.size() << ','
            << to_string(outcome.stop_reason) << ',' << outcome.observed_infected.size() << ','
            << join_labels(graph, outcome.observed_infected) << "\n";
  return 0;
}

int cmd_estimate(const std::string& graph_file, const std::string& infected_csv,
                 const std::string& estimator, int k, std::uint64_t seed) {
  const Graph graph = load_edge_list_file(graph_file).graph;
  const std::vector<NodeId> infected = parse_node_list(graph, infected_csv);
  const EstimatorKind kind = parse_estimator(estimator);
  Rng rng(seed);
  const Estimate estimate = centrality_estimate(graph, infected, kind, k, rng);
  std::cout << estimate_csv_header() << "\n" << estimate_csv_row(estimate, graph) << "\n";
  return 0;
}

int cmd_validate(const std::string& params_file, const std::string& model_override,
                 std::size_t node_count) {
  SpreadParams params = parse_params_file(params_file);
  if (!model_override.empty()) params.model = parse_model(model_override);
  const std::size_t n = node_count > 0 ? node_count
                        : params.p_s.size() > 0 ? params.p_s.size()
                                                : 1;
  const AssumptionReport report = validate_assumptions(params, n);
  std::cout << "model=" << to_string(params.model) << " alpha=" << report.alpha
            << " beta=" << report.beta << "\n";
  if (report.pass) {
    std::cout << "PASS: all assumption clauses hold\n";
    return 0;
  }
  for (const auto& v : report.violations) {
    std::cout << "FAIL: " << v.clause;
    if (v.node) std::cout << " at node " << *v.node;
    std::cout << " (value " << v.value << ", bounds [" << v.bound_lo << ", " << v.bound_hi
              << "])\n";
  }
  return 1;
}

int cmd_oracle(const std::string& check, const std::string& instance_file) {
  const OracleInstance inst =
      instance_file.empty() ? builtin_instance(check) : load_instance_file(instance_file);
  const CheckResult result = run_check(check, inst);
  for (const auto& line : result.details) std::cout << "  " << line << "\n";
  std::cout << (result.pass ? "PASS" : "FAIL") << ": " << result.name << "\n";
  return result.pass ? 0 : 1;
}

int cmd_experiment(const std::string& config_file, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const std::vector<ScenarioConfig> scenarios = parse_scenarios_file(config_file);
  fs::create_directories(out_dir);

  std::vector<SummaryCsvRow> all_rows;
  // Scenarios sharing (scheme, model, k) form one plot keyed by x_value.
  std::map<std::string, std::vector<std::pair<double, Summary>>> plots;

  for (const auto& cfg : scenarios) {
    const std::vector<RunRecord> records = run_scenario(cfg);
    const Summary summary = aggregate(records);
    for (const auto& row : summary_rows(cfg, summary)) all_rows.push_back(row);

    std::ofstream records_out(fs::path(out_dir) / ("records_" + cfg.id + ".csv"));
    emit_records_csv(records, nullptr, records_out);

    std::ostringstream key;
    key << "scheme" << cfg.scheme << "_" << to_string(cfg.model) << "_k" << cfg.k;
    plots[key.str()].emplace_back(cfg.x_value, summary);
    std::cout << "scenario " << cfg.id << ": " << records.size() << " runs done\n";
  }

  std::ofstream summary_out(fs::path(out_dir) / "summary.csv");
  emit_summary_csv(all_rows, summary_out);

  for (const auto& [key, by_x] : plots) {
    std::ofstream svg(fs::path(out_dir) / ("plot_" + key + ".svg"));
    emit_plot(by_x, svg);
  }
  std::cout << "wrote " << out_dir << "/summary.csv and " << plots.size() << " plot(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infection-source estimation toolkit: spreading simulation, Jordan-center "
               "estimators, exhaustive small-instance oracle, experiment harness"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one spreading simulation");
  simulate_cmd->add_option("--graph", sim.graph_file, "Edge-list file");
  simulate_cmd->add_flag("--random-tree", sim.random_tree, "Random tree network");
  simulate_cmd->add_option("--degree-low", sim.degree_low, "Random-tree degree lower bound");
  simulate_cmd->add_option("--degree-high", sim.degree_high, "Random-tree degree upper bound");
  simulate_cmd->add_option("--model", sim.model, "SI|SIR|SIRI|SIS");
  simulate_cmd->add_option("--params", sim.params_file, "Parameter file");
  simulate_cmd->add_option("--p-s", sim.p_s, "Scalar infection probability");
  simulate_cmd->add_option("--p-i", sim.p_i, "Scalar stay-infected probability");
  simulate_cmd->add_option("--p-r", sim.p_r, "Scalar relapse probability (SIRI)");
  simulate_cmd->add_option("--sources", sim.sources, "Comma-separated source labels");
  simulate_cmd->add_option("--stop-n", sim.stop_n, "Stop once this many nodes are infected");
  simulate_cmd->add_option("--stop-t", sim.stop_t, "Stop after this many slots");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");

  std::string est_graph, est_infected, est_kind = "JC";
  int est_k = 1;
  std::uint64_t est_seed = 1;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate sources from a snapshot");
  estimate_cmd->add_option("--graph", est_graph, "Edge-list file")->required();
  estimate_cmd->add_option("--infected", est_infected, "Comma-separated infected labels")
      ->required();
  estimate_cmd->add_option("--estimator", est_kind, "JC|MJC|BC|CC|DisC|DegC|EC|PC|Random");
  estimate_cmd->add_option("--k", est_k, "Number of sources to estimate");
  estimate_cmd->add_option("--seed", est_seed, "RNG seed");

  std::string val_params, val_model;
  std::size_t val_nodes = 0;
  auto* validate_cmd = app.add_subcommand("validate", "Check the assumption clauses");
  validate_cmd->add_option("--params", val_params, "Parameter file")->required();
  validate_cmd->add_option("--model", val_model, "Override the model");
  validate_cmd->add_option("--nodes", val_nodes, "Node count for scalar parameters");

  std::string oracle_check, oracle_instance;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run a named verification");
  oracle_cmd
      ->add_option("--check", oracle_check, "theorem1|theorem2|prop1|prop2|lemma1|lemma2|sisfit")
      ->required();
  oracle_cmd->add_option("--instance", oracle_instance, "Instance file (default: built-in)");

  std::string exp_config, exp_out = "out";
  auto* experiment_cmd = app.add_subcommand("experiment", "Run scenario configs");
  experiment_cmd->add_option("--config", exp_config, "Scenario config file")->required();
  experiment_cmd->add_option("--out", exp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage hint
    return 2;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim);
    if (*estimate_cmd) return cmd_estimate(est_graph, est_infected, est_kind, est_k, est_seed);
    if (*validate_cmd) return cmd_validate(val_params, val_model, val_nodes);
    if (*oracle_cmd) return cmd_oracle(oracle_check, oracle_instance);
    if (*experiment_cmd) return cmd_experiment(exp_config, exp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
