#include "epicenter/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "epicenter/kvconfig.hpp"
#include "epicenter/lazy_tree.hpp"

namespace epicenter {

namespace {

bool on_grid(double x, double lo, double hi, double step) {
  if (x < lo - 1e-9 || x > hi + 1e-9) return false;
  const double k = (x - lo) / step;
  return std::fabs(k - std::round(k)) < 1e-6;
}

}  // namespace

SpreadParams sample_params(int scheme, ModelKind model, double x_value, std::size_t node_count,
                           Rng& rng) {
  (void)node_count;  // schemes draw scalars or keyed fields; the size is free
  switch (scheme) {
    case 1: {
      if (!on_grid(x_value, 0.1, 1.0, 0.1)) {
        throw std::invalid_argument("scheme 1: p_i must be one of 0.1, 0.2, ..., 1");
      }
      const double ps = uniform_unit(rng);
      const double pi = x_value;
      const double pr_hi = pi < 1.0 ? std::min(1.0, pi / (1.0 - pi)) : 1.0;
      const double pr = uniform_range(rng, 0.0, pr_hi);
      return SpreadParams::siri(ps, pi, pr);
    }
    case 2: {
      if (!on_grid(x_value, 0.0, 1.0, 0.1)) {
        throw std::invalid_argument("scheme 2: p_r must be one of 0, 0.1, ..., 1");
      }
      const double ps = uniform_unit(rng);
      const double pi = uniform_range(rng, 0.5, 1.0);
      return SpreadParams::siri(ps, pi, x_value);
    }
    case 3: {
      if (!on_grid(x_value, 0.5, 1.0, 0.1)) {
        throw std::invalid_argument("scheme 3: p_i must be one of 0.5, 0.6, ..., 1");
      }
      const double ps = uniform_range(rng, 0.0, x_value);
      return SpreadParams::sis(ps, x_value);
    }
    case 4: {
      // Heterogeneous per-node draws, expressed as keyed fields so they stay
      // defined while a lazy tree keeps growing.
      auto field = [&rng] { return ProbField::keyed_uniform(0.0, 1.0, rng()); };
      switch (model) {
        case ModelKind::SI: {
          return SpreadParams::si(field());
        }
        case ModelKind::SIR: {
          ProbField ps = field();
          ProbField pi = field();
          return SpreadParams::sir(std::move(ps), std::move(pi));
        }
        case ModelKind::SIRI: {
          ProbField ps = field();
          ProbField pi = field();
          ProbField pr = field();
          return SpreadParams::siri(std::move(ps), std::move(pi), std::move(pr));
        }
        case ModelKind::SIS: {
          // The assumptions are dropped in this experiment; the SIS dynamics
          // still need only p_s and p_i.
          ProbField ps = field();
          ProbField pi = field();
          return SpreadParams::sis(std::move(ps), std::move(pi));
        }
      }
      break;
    }
    default:
      break;
  }
  throw std::invalid_argument("sample_params: scheme must be 1..4");
}

namespace {

struct AttemptResult {
  bool reached = false;
  Graph graph;
  std::vector<NodeId> sources;
  std::vector<NodeId> infected;
};

AttemptResult run_attempt(const ScenarioConfig& cfg, const Graph* dataset, std::uint64_t seed) {
  AttemptResult result;
  Rng rng(seed);

  if (cfg.network.kind == NetworkSpec::Kind::RandomTree) {
    LazyTree tree(cfg.network.degree_low, cfg.network.degree_high, derive_seed(seed, 0x7ee1));
    tree.expand_to_size(std::max<std::size_t>(cfg.network.prerealize, cfg.k + 1u));

    std::vector<NodeId> pool(tree.node_count());
    std::iota(pool.begin(), pool.end(), 0);
    result.sources = canonical_node_set(sample_without_replacement<NodeId>(rng, pool, cfg.k));

    // Scheme 4 yields keyed per-node fields, so every scheme runs on the
    // lazy tree directly; it grows under the infection front.
    const SpreadParams params =
        sample_params(cfg.scheme, cfg.model, cfg.x_value, tree.node_count(), rng);
    InfectionOutcome outcome = simulate(tree, result.sources, params,
                                        StopRule::infected_at_least(cfg.stop_threshold), rng);
    result.reached = outcome.stop_reason == StopReason::ThresholdReached;
    result.infected = outcome.observed_infected;
    result.graph = tree.graph();
    return result;
  }

  // Fixed dataset.
  result.graph = *dataset;
  std::vector<NodeId> pool(result.graph.node_count());
  std::iota(pool.begin(), pool.end(), 0);
  result.sources = canonical_node_set(sample_without_replacement<NodeId>(rng, pool, cfg.k));
  SpreadParams params =
      sample_params(cfg.scheme, cfg.model, cfg.x_value, result.graph.node_count(), rng);
  InfectionOutcome outcome = simulate(result.graph, result.sources, params,
                                      StopRule::infected_at_least(cfg.stop_threshold), rng);
  result.reached = outcome.stop_reason == StopReason::ThresholdReached;
  result.infected = outcome.observed_infected;
  return result;
}

}  // namespace

std::vector<RunRecord> run_scenario(const ScenarioConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run_scenario: runs must be >= 1");
  if (cfg.stop_threshold < static_cast<std::size_t>(cfg.k)) {
    throw std::invalid_argument("run_scenario: stop threshold below k");
  }
  if (cfg.estimators.empty()) throw std::invalid_argument("run_scenario: no estimators");

  std::optional<Graph> dataset;
  if (cfg.network.kind == NetworkSpec::Kind::EdgeList) {
    dataset = load_edge_list_file(cfg.network.path).graph;
  }

  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.runs));
  for (int run = 0; run < cfg.runs; ++run) {
    RunRecord rec;
    rec.run_index = run;

    AttemptResult attempt;
    int tries = 0;
    for (;; ++tries) {
      if (tries > cfg.max_retries) {
        throw std::runtime_error("run_scenario: run " + std::to_string(run) +
                                 " exceeded the retry budget without reaching the threshold");
      }
      attempt = run_attempt(cfg, dataset ? &*dataset : nullptr,
                            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run),
                                        static_cast<std::uint64_t>(tries)));
      if (attempt.reached) break;
    }
    rec.retries = tries;
    rec.true_sources = attempt.sources;
    rec.infected_count = attempt.infected.size();

    for (EstimatorKind kind : cfg.estimators) {
      EstimatorOutcome out;
      Rng erng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(run),
                           0xe000 + static_cast<std::uint64_t>(kind)));
      try {
        out.estimate =
            centrality_estimate(attempt.graph, attempt.infected, kind, cfg.k, erng, cfg.mjc);
        out.error = error_distance(attempt.graph, attempt.sources, out.estimate.sources);
      } catch (const std::exception& e) {
        out.failure = e.what();
      }
      rec.outcomes.emplace_back(kind, std::move(out));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

Summary aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  Summary summary;
  summary.runs = static_cast<int>(records.size());

  double total_retries = 0.0;
  for (const auto& rec : records) total_retries += rec.retries;
  summary.mean_retries = total_retries / records.size();

  // Estimator order follows the first record; accumulation runs in run-index
  // order so the output is bit-stable.
  for (std::size_t slot = 0; slot < records.front().outcomes.size(); ++slot) {
    EstimatorSummary es;
    es.kind = records.front().outcomes[slot].first;
    std::vector<double> errors;
    for (const auto& rec : records) {
      const auto& [kind, outcome] = rec.outcomes.at(slot);
      if (kind != es.kind) throw std::logic_error("aggregate: estimator order differs per run");
      if (outcome.failed()) {
        ++es.failures;
      } else {
        errors.push_back(outcome.error);
      }
    }
    es.n = static_cast<int>(errors.size());
    if (es.n > 0) {
      double sum = 0.0;
      for (double e : errors) sum += e;
      es.mean_error = sum / es.n;
      double ss = 0.0;
      for (double e : errors) ss += (e - es.mean_error) * (e - es.mean_error);
      const double stddev = es.n > 1 ? std::sqrt(ss / (es.n - 1)) : 0.0;
      es.stderr_error = stddev / std::sqrt(static_cast<double>(es.n));
      es.ci95 = 1.96 * es.stderr_error;
    }
    summary.per_estimator.push_back(es);
  }
  return summary;
}

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

void emit_records_csv(const std::vector<RunRecord>& records, const Graph* g, std::ostream& out) {
  out << "run,retries,infected_count,true_sources,estimator,k,sources,infection_range,"
         "iterations,error_distance,status\n";
  auto labels = [&](const std::vector<NodeId>& nodes) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i) s += ';';
      s += g ? g->label(nodes[i]) : std::to_string(nodes[i]);
    }
    return s;
  };
  for (const auto& rec : records) {
    for (const auto& [kind, outcome] : rec.outcomes) {
      out << rec.run_index << ',' << rec.retries << ',' << rec.infected_count << ','
          << labels(rec.true_sources) << ',' << to_string(kind) << ',';
      if (outcome.failed()) {
        out << ",,,,,error\n";  // k..error_distance stay blank
      } else {
        out << outcome.estimate.k << ',' << labels(outcome.estimate.sources) << ','
            << outcome.estimate.infection_range << ',' << outcome.estimate.iterations << ','
            << format_double(outcome.error) << ",ok\n";
      }
    }
  }
}

std::vector<SummaryCsvRow> summary_rows(const ScenarioConfig& cfg, const Summary& summary) {
  std::vector<SummaryCsvRow> rows;
  for (const auto& es : summary.per_estimator) {
    SummaryCsvRow row;
    row.scenario_id = cfg.id;
    row.estimator = to_string(es.kind);
    row.k = cfg.k;
    row.model = to_string(cfg.model);
    row.scheme = cfg.scheme;
    row.x_value = cfg.x_value;
    row.runs = es.n;
    row.mean_error = es.mean_error;
    row.stderr_error = es.stderr_error;
    row.ci95 = es.ci95;
    row.mean_retries = summary.mean_retries;
    rows.push_back(row);
  }
  return rows;
}

void emit_summary_csv(const std::vector<SummaryCsvRow>& rows, std::ostream& out) {
  out << "scenario_id,estimator,k,model,scheme,x_value,runs,mean_error,stderr,ci95,"
         "mean_retries\n";
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.estimator << ',' << r.k << ',' << r.model << ','
        << r.scheme << ',' << format_double(r.x_value) << ',' << r.runs << ','
        << format_double(r.mean_error) << ',' << format_double(r.stderr_error) << ','
        << format_double(r.ci95) << ',' << format_double(r.mean_retries) << "\n";
  }
}

std::vector<SummaryCsvRow> parse_summary_csv(std::istream& in) {
  std::vector<SummaryCsvRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("summary csv: empty input");
  const std::string expected =
      "scenario_id,estimator,k,model,scheme,x_value,runs,mean_error,stderr,ci95,mean_retries";
  if (line != expected && line != expected + "\r") {
    throw std::runtime_error("summary csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw std::runtime_error("summary csv: bad row: " + line);
    SummaryCsvRow r;
    r.scenario_id = cells[0];
    r.estimator = cells[1];
    r.k = std::stoi(cells[2]);
    r.model = cells[3];
    r.scheme = std::stoi(cells[4]);
    r.x_value = std::stod(cells[5]);
    r.runs = std::stoi(cells[6]);
    r.mean_error = std::stod(cells[7]);
    r.stderr_error = std::stod(cells[8]);
    r.ci95 = std::stod(cells[9]);
    r.mean_retries = std::stod(cells[10]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

struct PlotGeometry {
  static constexpr double width = 720.0;
  static constexpr double height = 480.0;
  static constexpr double margin_left = 70.0;
  static constexpr double margin_right = 160.0;
  static constexpr double margin_top = 30.0;
  static constexpr double margin_bottom = 50.0;
};

const char* kSeriesColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

}  // namespace

void emit_plot(const std::vector<std::pair<double, Summary>>& by_x, std::ostream& out) {
  if (by_x.empty()) throw std::invalid_argument("emit_plot: no data");

  std::vector<EstimatorKind> series;
  for (const auto& es : by_x.front().second.per_estimator) series.push_back(es.kind);
  for (const auto& [x, summary] : by_x) {
    if (summary.per_estimator.size() != series.size()) {
      throw std::invalid_argument("emit_plot: series lengths differ across x values");
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (summary.per_estimator[i].kind != series[i]) {
        throw std::invalid_argument("emit_plot: estimator sets differ across x values");
      }
    }
  }

  auto sorted = by_x;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double x_lo = sorted.front().first;
  double x_hi = sorted.back().first;
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  double y_hi = 0.0;
  for (const auto& [x, summary] : sorted) {
    for (const auto& es : summary.per_estimator) {
      y_hi = std::max(y_hi, es.mean_error + es.ci95);
    }
  }
  if (y_hi <= 0.0) y_hi = 1.0;
  y_hi *= 1.05;

  const PlotGeometry geo;
  const double plot_w = geo.width - geo.margin_left - geo.margin_right;
  const double plot_h = geo.height - geo.margin_top - geo.margin_bottom;
  auto sx = [&](double x) { return geo.margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return geo.margin_top + plot_h - y / y_hi * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << geo.width << "\" height=\""
      << geo.height << "\" viewBox=\"0 0 " << geo.width << ' ' << geo.height << "\">\n";
  out << "  <rect width=\"" << geo.width << "\" height=\"" << geo.height
      << "\" fill=\"white\"/>\n";

  // axes
  out << "  <line x1=\"" << geo.margin_left << "\" y1=\"" << geo.margin_top + plot_h
      << "\" x2=\"" << geo.margin_left + plot_w << "\" y2=\"" << geo.margin_top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << geo.margin_left << "\" y1=\"" << geo.margin_top << "\" x2=\""
      << geo.margin_left << "\" y2=\"" << geo.margin_top + plot_h << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double y = y_hi * tick / 5.0;
    out << "  <text x=\"" << geo.margin_left - 8 << "\" y=\"" << sy(y) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << std::setprecision(3) << y
        << "</text>\n";
  }
  for (const auto& [x, summary] : sorted) {
    out << "  <text x=\"" << sx(x) << "\" y=\"" << geo.margin_top + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << std::setprecision(3) << x
        << "</text>\n";
  }
  out << "  <text x=\"" << geo.margin_left + plot_w / 2 << "\" y=\"" << geo.height - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">parameter</text>\n";
  out << "  <text x=\"16\" y=\"" << geo.margin_top + plot_h / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << geo.margin_top + plot_h / 2 << ")\">average error distance</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kSeriesColors[s % (sizeof(kSeriesColors) / sizeof(kSeriesColors[0]))];
    std::ostringstream points;
    for (const auto& [x, summary] : sorted) {
      const auto& es = summary.per_estimator[s];
      points << sx(x) << ',' << sy(es.mean_error) << ' ';
    }
    if (sorted.size() > 1) {
      out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
          << points.str() << "\"/>\n";
    }
    for (const auto& [x, summary] : sorted) {
      const auto& es = summary.per_estimator[s];
      const double cx = sx(x);
      if (es.ci95 > 0.0) {
        const double y0 = sy(es.mean_error - es.ci95);
        const double y1 = sy(es.mean_error + es.ci95);
        out << "  <line class=\"errbar\" x1=\"" << cx << "\" y1=\"" << y0 << "\" x2=\"" << cx
            << "\" y2=\"" << y1 << "\" stroke=\"" << color << "\"/>\n";
        out << "  <line class=\"errcap\" x1=\"" << cx - 3 << "\" y1=\"" << y0 << "\" x2=\""
            << cx + 3 << "\" y2=\"" << y0 << "\" stroke=\"" << color << "\"/>\n";
        out << "  <line class=\"errcap\" x1=\"" << cx - 3 << "\" y1=\"" << y1 << "\" x2=\""
            << cx + 3 << "\" y2=\"" << y1 << "\" stroke=\"" << color << "\"/>\n";
      }
      out << "  <circle class=\"marker\" cx=\"" << cx << "\" cy=\"" << sy(es.mean_error)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "  <text x=\"" << geo.margin_left + plot_w + 14 << "\" y=\""
        << geo.margin_top + 14 + 16 * static_cast<double>(s) << "\" font-size=\"12\" fill=\""
        << color << "\">" << to_string(series[s]) << "</text>\n";
  }
  out << "</svg>\n";
}

namespace {

ScenarioConfig scenario_from_section(const KvSection& sec) {
  ScenarioConfig cfg;
  cfg.id = sec.get_or("id", "scenario");
  const std::string network = sec.get_or("network", "random_tree");
  if (network == "random_tree") {
    cfg.network.kind = NetworkSpec::Kind::RandomTree;
    cfg.network.degree_low = std::stoi(sec.get_or("degree_low", "3"));
    cfg.network.degree_high = std::stoi(sec.get_or("degree_high", "5"));
    cfg.network.prerealize = std::stoul(sec.get_or("tree_nodes", "300"));
  } else if (network == "edge_list") {
    cfg.network.kind = NetworkSpec::Kind::EdgeList;
    cfg.network.path = sec.require("graph");
  } else {
    throw std::runtime_error("scenario: unknown network '" + network + "'");
  }
  cfg.model = parse_model(sec.get_or("model", "SI"));
  cfg.scheme = std::stoi(sec.get_or("scheme", "4"));
  cfg.x_value = std::stod(sec.get_or("x_value", "0"));
  cfg.k = std::stoi(sec.get_or("k", "1"));
  cfg.runs = std::stoi(sec.get_or("runs", "500"));
  cfg.stop_threshold = std::stoul(sec.get_or("stop_threshold", "101"));
  cfg.master_seed = std::stoull(sec.get_or("seed", "1"));
  cfg.mjc.eta = std::stoi(sec.get_or("eta", "0"));
  cfg.mjc.max_iter = std::stoi(sec.get_or("max_iter", "30"));
  cfg.max_retries = std::stoi(sec.get_or("max_retries", "1000"));
  const std::string default_estimators =
      cfg.k == 1 ? "JC,BC,CC,DisC,DegC,EC,PC,Random" : "MJC,BC,CC,DisC,DegC,EC,PC,Random";
  const std::string estimators = sec.get_or("estimators", default_estimators);
  std::istringstream split(estimators);
  std::string token;
  while (std::getline(split, token, ',')) {
    const std::size_t a = token.find_first_not_of(" \t");
    const std::size_t b = token.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    cfg.estimators.push_back(parse_estimator(token.substr(a, b - a + 1)));
  }
  return cfg;
}

}  // namespace

std::vector<ScenarioConfig> parse_scenarios(std::istream& in) {
  std::vector<ScenarioConfig> out;
  for (const auto& sec : parse_kv_sections(in)) {
    if (sec.name == "scenario") out.push_back(scenario_from_section(sec));
  }
  if (out.empty()) throw std::runtime_error("config contains no [scenario] sections");
  return out;
}

std::vector<ScenarioConfig> parse_scenarios_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config: " + path);
  return parse_scenarios(in);
}

}  // namespace epicenter
