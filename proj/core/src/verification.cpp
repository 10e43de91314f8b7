#include "epicenter/verification.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "epicenter/estimators.hpp"
#include "epicenter/kvconfig.hpp"

namespace epicenter {

namespace {

std::string join_labels(const Graph& g, const std::vector<NodeId>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ';';
    out += g.label(nodes[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

NodeId resolve_label(const Graph& g, const std::string& label) {
  auto id = g.find_label(trim(label));
  if (!id) throw std::runtime_error("unknown node label: '" + trim(label) + "'");
  return *id;
}

ProbField field_with_overrides(const Graph& g, double scalar,
                               const std::vector<std::pair<std::string, double>>& overrides) {
  if (overrides.empty()) return ProbField(scalar);
  std::vector<double> values(g.node_count(), scalar);
  for (const auto& [label, value] : overrides) {
    values[resolve_label(g, label)] = value;
  }
  return ProbField(std::move(values));
}

}  // namespace

OracleInstance load_instance(std::istream& in) {
  const std::vector<KvSection> sections = parse_kv_sections(in);

  OracleInstance inst;
  std::string edge_text;
  double ps = 0.0, pi = 0.0, pr = 0.0;
  std::vector<std::pair<std::string, double>> ps_over, pi_over, pr_over;
  std::optional<ModelKind> model;
  std::string infected_text, source_text;

  for (const auto& sec : sections) {
    if (sec.name == "graph") {
      for (const auto& e : sec.get_all("edge")) edge_text += e + "\n";
    } else if (sec.name == "params") {
      for (const auto& [key, value] : sec.entries) {
        if (key == "model") {
          model = parse_model(value);
        } else if (key == "p_s") {
          ps = std::stod(value);
        } else if (key == "p_i") {
          pi = std::stod(value);
        } else if (key == "p_r") {
          pr = std::stod(value);
        } else if (key.rfind("p_s.", 0) == 0) {
          ps_over.emplace_back(key.substr(4), std::stod(value));
        } else if (key.rfind("p_i.", 0) == 0) {
          pi_over.emplace_back(key.substr(4), std::stod(value));
        } else if (key.rfind("p_r.", 0) == 0) {
          pr_over.emplace_back(key.substr(4), std::stod(value));
        } else {
          throw std::runtime_error("instance [params]: unknown key '" + key + "'");
        }
      }
    } else if (sec.name == "observation") {
      infected_text = sec.require("infected");
    } else if (sec.name == "oracle") {
      if (auto v = sec.get("source")) source_text = *v;
      if (auto v = sec.get("k")) inst.k = std::stoi(*v);
      if (auto v = sec.get("t_extra")) inst.t_extra = std::stoi(*v);
      if (auto v = sec.get("seed")) inst.seed = std::stoull(*v);
    } else {
      throw std::runtime_error("instance file: unknown section [" + sec.name + "]");
    }
  }
  if (edge_text.empty()) throw std::runtime_error("instance file: no [graph] edges");
  if (!model) throw std::runtime_error("instance file: no model in [params]");
  if (infected_text.empty()) throw std::runtime_error("instance file: no observed infected set");

  std::istringstream edges(edge_text);
  inst.graph = load_edge_list(edges).graph;

  inst.params.model = *model;
  if (*model == ModelKind::SI) {
    pi = 1.0;
    pi_over.clear();
    pr = 0.0;
    pr_over.clear();
  }
  if (*model == ModelKind::SIR || *model == ModelKind::SIS) {
    pr = 0.0;
    pr_over.clear();
  }
  inst.params.p_s = field_with_overrides(inst.graph, ps, ps_over);
  inst.params.p_i = field_with_overrides(inst.graph, pi, pi_over);
  inst.params.p_r = field_with_overrides(inst.graph, pr, pr_over);
  inst.params.validate(inst.graph.node_count());

  for (const auto& tok : split(infected_text, ',')) {
    inst.infected.push_back(resolve_label(inst.graph, tok));
  }
  inst.infected = canonical_node_set(inst.infected);
  if (!source_text.empty()) inst.source = resolve_label(inst.graph, source_text);
  return inst;
}

OracleInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return load_instance(in);
}

namespace {

Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph::from_edges(n, edges);
}

// Root plus 3 branches, each branch a chain of `depth` nodes: the radius-r
// ball of the 3-regular tree for depth <= 2.
Graph regular3_ball(int depth) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId next = 1;
  std::vector<NodeId> shell{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<NodeId> grown;
    for (NodeId p : shell) {
      const int children = (d == 0) ? 3 : 2;
      for (int c = 0; c < children; ++c) {
        edges.emplace_back(p, next);
        grown.push_back(next);
        ++next;
      }
    }
    shell = grown;
  }
  return Graph::from_edges(next, edges);
}

}  // namespace

OracleInstance builtin_instance(const std::string& check) {
  OracleInstance inst;
  if (check == "prop1") {
    // 5-node star, SIS: source in the middle, observed set = the leaves.
    inst.graph = Graph::from_edges(5, std::vector<std::pair<NodeId, NodeId>>{
                                          {0, 1}, {0, 2}, {0, 3}, {0, 4}});
    inst.params = SpreadParams::sis(0.4, 0.6);
    inst.infected = {1, 2, 3, 4};
    inst.source = 0;
    inst.t_extra = 3;
    return inst;
  }
  if (check == "prop2" || check == "theorem1") {
    inst.graph = path_graph(11);
    inst.params = SpreadParams::si(0.5);
    inst.infected = {4, 5, 6};
    inst.source = 5;
    inst.t_extra = 3;
    return inst;
  }
  if (check == "theorem2" || check == "lemma1" || check == "lemma2") {
    inst.graph = path_graph(11);
    inst.params = SpreadParams::si(0.5);
    inst.infected = {2, 3, 4, 6, 7, 8};
    inst.k = 2;
    inst.t_extra = 2;
    inst.seed = 7;
    return inst;
  }
  if (check == "sisfit") {
    inst.graph = regular3_ball(2);
    inst.params = SpreadParams::sis(0.35, 0.7);
    inst.infected = {0, 1, 4, 5};
    inst.source = 0;
    inst.t_extra = 2;
    return inst;
  }
  throw std::invalid_argument("no built-in instance for check '" + check + "'");
}

CheckResult check_theorem1(const OracleInstance& inst) {
  CheckResult res;
  res.name = "theorem1";
  MlipOptions options;
  options.k = 1;
  options.t_extra = inst.t_extra;
  const MlipResult mlip = mlip_estimate(inst.graph, inst.infected, inst.params, options);
  const int winner_range = infection_range(inst.graph, mlip.best_sources, inst.infected);
  res.pass = winner_range == mlip.jordan_range;
  std::ostringstream line;
  line << "winner=" << join_labels(inst.graph, mlip.best_sources) << " range=" << winner_range
       << " jordan_range=" << mlip.jordan_range << " best_elapsed=" << mlip.best_elapsed
       << " best_log_prob=" << mlip.best_log_prob << " paths=" << mlip.paths_enumerated;
  res.details.push_back(line.str());
  return res;
}

CheckResult check_theorem2(const OracleInstance& inst) {
  CheckResult res;
  res.name = "theorem2";
  const int k = std::max(inst.k, 2);
  MlipOptions options;
  options.k = k;
  options.t_extra = inst.t_extra;
  const MlipResult mlip = mlip_estimate(inst.graph, inst.infected, inst.params, options);
  const std::vector<NodeId> jordan_set = k_jordan_set_bruteforce(inst.graph, inst.infected, k);
  const int jordan_range = infection_range(inst.graph, jordan_set, inst.infected);
  const int winner_range = infection_range(inst.graph, mlip.best_sources, inst.infected);
  res.pass = winner_range == jordan_range;
  std::ostringstream line;
  line << "winner=" << join_labels(inst.graph, mlip.best_sources) << " range=" << winner_range
       << " k_jordan=" << join_labels(inst.graph, jordan_set) << " range=" << jordan_range;
  res.details.push_back(line.str());
  return res;
}

CheckResult check_prop1(const OracleInstance& inst) {
  CheckResult res;
  res.name = "prop1";
  const NodeId source = inst.source ? *inst.source
                                    : jordan_center(inst.graph, inst.infected).sources.front();
  const ElapsedTimeCheck check =
      verify_optimal_elapsed_time(inst.graph, source, inst.infected, inst.params, inst.t_extra);
  res.pass = check.pass();
  std::ostringstream head;
  head << "source=" << inst.graph.label(source) << " range=" << check.range
       << " delta=" << check.delta << " maximizer_at_range=" << check.maximizer_at_range
       << " decay_bounded=" << check.decay_bounded;
  res.details.push_back(head.str());
  for (const auto& [t, cell] : check.by_elapsed) {
    std::ostringstream line;
    line << "t=" << t << " paths=" << cell.n_paths << " max_log_prob=";
    if (cell.n_paths == 0) {
      line << "-";
    } else {
      line << cell.max_log_prob;
    }
    res.details.push_back(line.str());
  }
  return res;
}

CheckResult check_prop2(const OracleInstance& inst) {
  CheckResult res;
  res.name = "prop2";
  res.pass = true;
  const std::vector<NodeId> infected = canonical_node_set(inst.infected);

  std::vector<int> range(inst.graph.node_count());
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
    range[v] = infection_range(inst.graph, std::vector<NodeId>{v}, infected);
  }
  auto best_at_range = [&](NodeId v) -> PathTableCell {
    if (range[v] > kMaxOracleElapsed) return {};
    return enumerate_consistent_paths(inst.graph, std::vector<NodeId>{v}, infected, range[v],
                                      inst.params);
  };

  std::size_t compared = 0;
  for (NodeId u = 0; u < inst.graph.node_count(); ++u) {
    for (NodeId v : inst.graph.neighbors(u)) {
      if (range[v] >= range[u]) continue;  // need t_v < t_u
      const PathTableCell cv = best_at_range(v);
      const PathTableCell cu = best_at_range(u);
      if (cu.n_paths == 0) continue;  // nothing to dominate
      ++compared;
      if (cv.n_paths == 0 || cv.max_log_prob < cu.max_log_prob - 1e-9) {
        res.pass = false;
        std::ostringstream line;
        line << "violated at v=" << inst.graph.label(v) << " (t=" << range[v]
             << ") vs u=" << inst.graph.label(u) << " (t=" << range[u] << ")";
        res.details.push_back(line.str());
      }
    }
  }
  res.details.push_back("neighbor pairs compared: " + std::to_string(compared));
  return res;
}

CheckResult check_lemma1(const OracleInstance& inst) {
  CheckResult res;
  res.name = "lemma1";
  res.pass = true;
  const int k = std::max(inst.k, 2);
  const std::vector<NodeId> sources = k_jordan_set_bruteforce(inst.graph, inst.infected, k);

  // Lemma 1 holds for any SI path, so a handful of simulated paths and
  // independent tie-break draws make a solid spot check.
  for (int trial = 0; trial < 5; ++trial) {
    Rng sim_rng(derive_seed(inst.seed, 0xa11ce, static_cast<std::uint64_t>(trial)));
    const InfectionOutcome outcome =
        simulate(inst.graph, sources, inst.params, StopRule::after(3), sim_rng);
    const double on_tree = log_path_probability(inst.graph, outcome.path, inst.params);

    Rng merge_rng(derive_seed(inst.seed, 0xb0b, static_cast<std::uint64_t>(trial)));
    const SuperNodeGraph sng = super_node_graph(inst.graph, sources, outcome.path, merge_rng);
    const InfectionPath merged_path = translate_path(sng, outcome.path);
    const SpreadParams merged_params =
        translate_params(sng, inst.params, inst.graph.node_count());
    const double on_merged = log_path_probability(sng.merged, merged_path, merged_params);

    std::ostringstream line;
    line << "trial " << trial << ": log_prob tree=" << on_tree << " merged=" << on_merged;
    res.details.push_back(line.str());
    if (!(std::fabs(on_tree - on_merged) <= 1e-12 ||
          (on_tree == kLogZero && on_merged == kLogZero))) {
      res.pass = false;
    }
  }
  return res;
}

namespace {

std::optional<InfectionPath> consistent_path_for(const OracleInstance& inst,
                                                 const std::vector<NodeId>& sources) {
  const int range = infection_range(inst.graph, sources, inst.infected);
  for (int t = range; t <= std::min(range + inst.t_extra, kMaxOracleElapsed); ++t) {
    auto paths = collect_max_paths(inst.graph, sources, inst.infected, t, inst.params);
    if (!paths.empty()) return paths.front();
  }
  return std::nullopt;
}

}  // namespace

namespace {

// A minimum-range k-subset drawn from the observed set when one exists;
// under SI only sets inside V_i admit consistent paths.
std::vector<NodeId> realizable_k_jordan_set(const Graph& g, const std::vector<NodeId>& infected,
                                            int k) {
  const std::vector<NodeId> global = k_jordan_set_bruteforce(g, infected, k);
  const int target = infection_range(g, global, infected);
  std::vector<NodeId> pick(static_cast<std::size_t>(k));
  std::vector<NodeId> found;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int depth) {
    if (!found.empty()) return;
    if (depth == k) {
      if (infection_range(g, pick, infected) == target) found = pick;
      return;
    }
    for (std::size_t i = start; i < infected.size(); ++i) {
      pick[static_cast<std::size_t>(depth)] = infected[i];
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return found.empty() ? global : found;
}

}  // namespace

CheckResult check_lemma2(const OracleInstance& inst) {
  CheckResult res;
  res.name = "lemma2";
  const int k = std::max(inst.k, 2);
  const std::vector<NodeId> jordan_set =
      realizable_k_jordan_set(inst.graph, canonical_node_set(inst.infected), k);
  res.details.push_back("k_jordan_set=" + join_labels(inst.graph, jordan_set));

  const auto path = consistent_path_for(inst, jordan_set);
  if (!path) {
    res.pass = false;
    res.details.push_back("no consistent path for the k-Jordan center set");
    return res;
  }
  res.pass = true;
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(derive_seed(inst.seed, 0x5e77, static_cast<std::uint64_t>(trial)));
    if (!verify_k_jordan_supernode(inst.graph, inst.infected, k, *path, rng)) {
      res.pass = false;
      res.details.push_back("super node is not a Jordan center (trial " +
                            std::to_string(trial) + ")");
    }
  }
  if (res.pass) res.details.push_back("super node minimal in all merge draws");
  return res;
}

CheckResult check_sis_fit(const OracleInstance& inst) {
  CheckResult res;
  res.name = "sisfit";
  const NodeId source = inst.source ? *inst.source
                                    : jordan_center(inst.graph, inst.infected).sources.front();
  const int elapsed = infection_range(inst.graph, std::vector<NodeId>{source}, inst.infected);
  const std::map<NodeId, int> law =
      sis_first_infection_times(inst.graph, source, elapsed, inst.infected);

  const auto paths =
      collect_max_paths(inst.graph, std::vector<NodeId>{source}, inst.infected, elapsed,
                        inst.params);
  if (paths.empty()) {
    res.pass = false;
    res.details.push_back("no consistent path at t = " + std::to_string(elapsed));
    return res;
  }
  res.pass = false;
  for (const auto& path : paths) {
    const std::map<NodeId, int> got = first_infection_times(path);
    bool all = true;
    for (const auto& [u, t_int] : law) {
      auto it = got.find(u);
      if (it == got.end() || it->second != t_int) {
        all = false;
        break;
      }
    }
    if (all) {
      res.pass = true;
      break;
    }
  }
  std::ostringstream line;
  line << "source=" << inst.graph.label(source) << " t=" << elapsed << " max_paths="
       << paths.size() << " law=[";
  bool first = true;
  for (const auto& [u, t_int] : law) {
    if (!first) line << ' ';
    first = false;
    line << inst.graph.label(u) << ':' << t_int;
  }
  line << ']';
  res.details.push_back(line.str());
  return res;
}

CheckResult run_check(const std::string& name, const OracleInstance& inst) {
  if (name == "theorem1") return check_theorem1(inst);
  if (name == "theorem2") return check_theorem2(inst);
  if (name == "prop1") return check_prop1(inst);
  if (name == "prop2") return check_prop2(inst);
  if (name == "lemma1") return check_lemma1(inst);
  if (name == "lemma2") return check_lemma2(inst);
  if (name == "sisfit") return check_sis_fit(inst);
  throw std::invalid_argument("unknown check '" + name +
                              "' (expected theorem1|theorem2|prop1|prop2|lemma1|lemma2|sisfit)");
}

bool max_paths_avoid_boundary(const Graph& g, std::span<const NodeId> sources,
                              std::span<const NodeId> infected, int elapsed,
                              const SpreadParams& params) {
  const auto paths = collect_max_paths(g, sources, infected, elapsed, params);
  for (const auto& path : paths) {
    const auto times = first_infection_times(path);
    for (const auto& [u, t_int] : times) {
      if (g.degree(u) < 2 && t_int > 0 && t_int < elapsed) return false;
    }
  }
  return true;
}

}  // namespace epicenter
