#include "epicenter/spreading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace epicenter {

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::SI: return "SI";
    case ModelKind::SIR: return "SIR";
    case ModelKind::SIRI: return "SIRI";
    case ModelKind::SIS: return "SIS";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  if (s == "SI") return ModelKind::SI;
  if (s == "SIR") return ModelKind::SIR;
  if (s == "SIRI") return ModelKind::SIRI;
  if (s == "SIS") return ModelKind::SIS;
  throw std::invalid_argument("unknown model: " + s);
}

char state_char(NodeState s) {
  switch (s) {
    case NodeState::Susceptible: return 's';
    case NodeState::Infected: return 'i';
    case NodeState::NonSusceptible: return 'n';
    case NodeState::Recovered: return 'r';
  }
  return '?';
}

ProbField ProbField::keyed_uniform(double lo, double hi, std::uint64_t seed) {
  ProbField f;
  f.kind_ = Kind::Keyed;
  f.lo_ = lo;
  f.hi_ = hi;
  f.seed_ = seed;
  return f;
}

double ProbField::min_value() const {
  switch (kind_) {
    case Kind::Scalar: return scalar_;
    case Kind::Keyed: return lo_;
    case Kind::Vector: break;
  }
  return *std::min_element(values_.begin(), values_.end());
}

double ProbField::max_value() const {
  switch (kind_) {
    case Kind::Scalar: return scalar_;
    case Kind::Keyed: return hi_;
    case Kind::Vector: break;
  }
  return *std::max_element(values_.begin(), values_.end());
}

void ProbField::validate(std::size_t node_count, const std::string& name) const {
  if (is_vector() && values_.size() != node_count) {
    throw std::invalid_argument(name + ": per-node vector has " + std::to_string(values_.size()) +
                                " entries, graph has " + std::to_string(node_count) + " nodes");
  }
  const double lo = min_value();
  const double hi = max_value();
  if (!(lo >= 0.0) || !(hi <= 1.0)) {
    throw std::invalid_argument(name + ": probabilities must lie in [0,1]");
  }
}

SpreadParams SpreadParams::si(ProbField p_s) {
  SpreadParams p;
  p.model = ModelKind::SI;
  p.p_s = std::move(p_s);
  p.p_i = 1.0;  // infected nodes never exit
  p.p_r = 0.0;
  return p;
}

SpreadParams SpreadParams::sir(ProbField p_s, ProbField p_i) {
  SpreadParams p;
  p.model = ModelKind::SIR;
  p.p_s = std::move(p_s);
  p.p_i = std::move(p_i);
  p.p_r = 0.0;  // recovery is permanent
  return p;
}

SpreadParams SpreadParams::siri(ProbField p_s, ProbField p_i, ProbField p_r) {
  SpreadParams p;
  p.model = ModelKind::SIRI;
  p.p_s = std::move(p_s);
  p.p_i = std::move(p_i);
  p.p_r = std::move(p_r);
  return p;
}

SpreadParams SpreadParams::sis(ProbField p_s, ProbField p_i) {
  SpreadParams p;
  p.model = ModelKind::SIS;
  p.p_s = std::move(p_s);
  p.p_i = std::move(p_i);
  p.p_r = 0.0;  // no recovered state
  return p;
}

void SpreadParams::validate(std::size_t node_count) const {
  p_s.validate(node_count, "p_s");
  p_i.validate(node_count, "p_i");
  p_r.validate(node_count, "p_r");
  if (model == ModelKind::SI) {
    if (p_i.min_value() != 1.0 || p_r.max_value() != 0.0) {
      throw std::invalid_argument("SI requires p_i == 1 and p_r == 0");
    }
  }
  if (model == ModelKind::SIR && p_r.max_value() != 0.0) {
    throw std::invalid_argument("SIR requires p_r == 0");
  }
  if (model == ModelKind::SIS && p_r.max_value() != 0.0) {
    throw std::invalid_argument("SIS has no recovered state; p_r must be 0");
  }
}

std::string format_params(const SpreadParams& params) {
  if (params.p_s.is_keyed() || params.p_i.is_keyed() || params.p_r.is_keyed()) {
    throw std::invalid_argument("keyed probability fields have no per-node serialization");
  }
  std::ostringstream out;
  out.precision(17);
  out << "model=" << to_string(params.model) << "\n";
  if (params.p_s.is_scalar() && params.p_i.is_scalar() && params.p_r.is_scalar()) {
    out << "p_s=" << params.p_s.at(0) << "\n";
    out << "p_i=" << params.p_i.at(0) << "\n";
    out << "p_r=" << params.p_r.at(0) << "\n";
    return out.str();
  }
  const std::size_t n = std::max({params.p_s.size(), params.p_i.size(), params.p_r.size()});
  out << "node_id,p_s,p_i,p_r\n";
  for (NodeId u = 0; u < n; ++u) {
    out << u << ',' << params.p_s.at(u) << ',' << params.p_i.at(u) << ',' << params.p_r.at(u)
        << "\n";
  }
  return out.str();
}

SpreadParams parse_params(std::istream& in) {
  std::optional<ModelKind> model;
  std::optional<double> ps_scalar, pi_scalar, pr_scalar;
  std::vector<double> ps_vec, pi_vec, pr_vec;
  bool in_table = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string body = line.substr(start);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();

    if (!in_table && body.rfind("node_id,", 0) == 0) {
      if (body != "node_id,p_s,p_i,p_r") {
        throw std::runtime_error("params line " + std::to_string(line_no) +
                                 ": expected header node_id,p_s,p_i,p_r");
      }
      in_table = true;
      continue;
    }
    if (in_table) {
      std::istringstream row(body);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      if (cells.size() != 4) {
        throw std::runtime_error("params line " + std::to_string(line_no) +
                                 ": expected node_id,p_s,p_i,p_r row");
      }
      const std::size_t id = std::stoul(cells[0]);
      if (id != ps_vec.size()) {
        throw std::runtime_error("params line " + std::to_string(line_no) +
                                 ": node ids must be dense and ascending");
      }
      ps_vec.push_back(std::stod(cells[1]));
      pi_vec.push_back(std::stod(cells[2]));
      pr_vec.push_back(std::stod(cells[3]));
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("params line " + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t");
      const std::size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key == "model") {
      model = parse_model(value);
    } else if (key == "p_s") {
      ps_scalar = std::stod(value);
    } else if (key == "p_i") {
      pi_scalar = std::stod(value);
    } else if (key == "p_r") {
      pr_scalar = std::stod(value);
    } else {
      throw std::runtime_error("params line " + std::to_string(line_no) + ": unknown key '" +
                               key + "'");
    }
  }
  if (!model) throw std::runtime_error("params: missing model=");

  SpreadParams params;
  params.model = *model;
  auto field = [](std::vector<double>& vec, std::optional<double> scalar, double fallback) {
    if (!vec.empty()) return ProbField(std::move(vec));
    return ProbField(scalar.value_or(fallback));
  };
  params.p_s = field(ps_vec, ps_scalar, 0.0);
  params.p_i = field(pi_vec, pi_scalar, params.model == ModelKind::SI ? 1.0 : 0.0);
  params.p_r = field(pr_vec, pr_scalar, 0.0);
  return params;
}

SpreadParams parse_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  return parse_params(in);
}

namespace {

void report(AssumptionReport& rep, const std::string& clause, std::optional<NodeId> node,
            double value, double lo, double hi) {
  if (value < lo - 1e-12 || value > hi + 1e-12) {
    rep.pass = false;
    rep.violations.push_back({clause, node, value, lo, hi});
  }
}

}  // namespace

AssumptionReport validate_assumptions(const SpreadParams& params, std::size_t node_count) {
  params.validate(node_count);
  AssumptionReport rep;
  rep.alpha = params.alpha();
  rep.beta = params.beta();
  const double alpha = rep.alpha;
  const double beta = rep.beta;

  switch (params.model) {
    case ModelKind::SI: {
      // beta <= alpha/(1-alpha)^2; the bound is +inf at alpha = 1.
      const double rhs = alpha < 1.0 ? alpha / ((1.0 - alpha) * (1.0 - alpha))
                                     : std::numeric_limits<double>::infinity();
      report(rep, "SI: beta <= alpha/(1-alpha)^2", std::nullopt, beta, 0.0, rhs);
      break;
    }
    case ModelKind::SIR: {
      const double hi = alpha == beta ? 1.0 : std::sqrt(alpha / beta);
      for (NodeId u = 0; u < node_count; ++u) {
        report(rep, "SIR: 0 <= p_i(v) <= sqrt(alpha/beta)", u, params.p_i.at(u), 0.0, hi);
      }
      break;
    }
    case ModelKind::SIRI: {
      const double root = alpha == beta ? 1.0 : std::sqrt(alpha / beta);
      const double pi_lo = alpha < 1.0 ? (beta - alpha) / (1.0 - alpha) : 0.0;
      for (NodeId u = 0; u < node_count; ++u) {
        const double pi = params.p_i.at(u);
        report(rep, "SIRI: (beta-alpha)/(1-alpha) <= p_i(v) <= sqrt(alpha/beta)", u, pi, pi_lo,
               root);
        // At p_i = 1 the upper expression's limit is 1.
        const double pr_hi = pi < 1.0 ? std::min(1.0, root * pi / (1.0 - pi)) : 1.0;
        report(rep, "SIRI: 1-sqrt(alpha/beta) <= p_r(v) <= min{1, sqrt(alpha/beta)*p_i/(1-p_i)}",
               u, params.p_r.at(u), 1.0 - root, pr_hi);
      }
      break;
    }
    case ModelKind::SIS: {
      if (!params.p_s.is_scalar() || !params.p_i.is_scalar()) {
        rep.pass = false;
        rep.violations.push_back(
            {"SIS: p_s and p_i must be homogeneous scalars", std::nullopt, 0.0, 0.0, 0.0});
      }
      report(rep, "SIS: 0 <= p_s <= p_i <= 1", std::nullopt, params.p_s.max_value(), 0.0,
             params.p_i.min_value());
      break;
    }
  }
  return rep;
}

std::vector<NodeId> InfectionPath::infected_at(int tau) const {
  std::vector<NodeId> out;
  const auto& row = slots[static_cast<std::size_t>(tau)];
  for (NodeId u = 0; u < row.size(); ++u) {
    if (row[u] == NodeState::Infected) out.push_back(u);
  }
  return out;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::ThresholdReached: return "threshold";
    case StopReason::Extinct: return "extinct";
    case StopReason::Horizon: return "horizon";
  }
  return "?";
}

namespace {

template <typename GraphLike>
void relabel_uninfected(const GraphLike& g, std::vector<NodeState>& states) {
  for (NodeId u = 0; u < states.size(); ++u) {
    if (states[u] == NodeState::Infected || states[u] == NodeState::Recovered) continue;
    bool infected_neighbor = false;
    for (NodeId v : g.neighbors(u)) {
      if (v < states.size() && states[v] == NodeState::Infected) {
        infected_neighbor = true;
        break;
      }
    }
    states[u] = infected_neighbor ? NodeState::Susceptible : NodeState::NonSusceptible;
  }
}

void check_states(const Graph& g, const std::vector<NodeState>& states,
                  const SpreadParams& params) {
  if (states.size() != g.node_count()) {
    throw std::invalid_argument("state vector size does not match graph");
  }
  for (NodeId u = 0; u < states.size(); ++u) {
    const NodeState s = states[u];
    if (s == NodeState::Recovered &&
        (params.model == ModelKind::SI || params.model == ModelKind::SIS)) {
      throw std::invalid_argument("recovered state is impossible under " +
                                  to_string(params.model));
    }
    if (s == NodeState::Susceptible || s == NodeState::NonSusceptible) {
      bool infected_neighbor = false;
      for (NodeId v : g.neighbors(u)) {
        if (states[v] == NodeState::Infected) {
          infected_neighbor = true;
          break;
        }
      }
      if (infected_neighbor != (s == NodeState::Susceptible)) {
        throw std::invalid_argument("susceptible/non-susceptible label of node " + g.label(u) +
                                    " contradicts its neighborhood");
      }
    }
  }
}

// Core synchronous update; assumes labels are already consistent.
template <typename GraphLike>
std::vector<NodeState> advance(const GraphLike& g, const std::vector<NodeState>& current,
                               const SpreadParams& params, Rng& rng) {
  std::vector<NodeState> next(current.size());
  for (NodeId u = 0; u < current.size(); ++u) {
    switch (current[u]) {
      case NodeState::Susceptible:
        next[u] = uniform_unit(rng) < params.p_s.at(u) ? NodeState::Infected
                                                       : NodeState::NonSusceptible;
        break;
      case NodeState::NonSusceptible:
        next[u] = NodeState::NonSusceptible;
        break;
      case NodeState::Infected:
        if (params.model == ModelKind::SI) {
          next[u] = NodeState::Infected;
        } else if (uniform_unit(rng) < params.p_i.at(u)) {
          next[u] = NodeState::Infected;
        } else {
          next[u] = params.model == ModelKind::SIS ? NodeState::NonSusceptible
                                                   : NodeState::Recovered;
        }
        break;
      case NodeState::Recovered:
        if (params.model == ModelKind::SIRI && uniform_unit(rng) < params.p_r.at(u)) {
          next[u] = NodeState::Infected;
        } else {
          next[u] = NodeState::Recovered;
        }
        break;
    }
  }
  relabel_uninfected(g, next);
  return next;
}

std::size_t count_state(const std::vector<NodeState>& states, NodeState s) {
  return static_cast<std::size_t>(std::count(states.begin(), states.end(), s));
}

template <typename GraphLike, typename ExpandHook>
InfectionOutcome simulate_impl(GraphLike& g, std::span<const NodeId> sources,
                               const SpreadParams& params, StopRule stop, Rng& rng,
                               int max_slots, ExpandHook&& ensure_expanded) {
  const std::vector<NodeId> src = canonical_node_set(sources);
  if (src.empty()) throw std::invalid_argument("simulate: no sources");
  if (src.size() != sources.size()) throw std::invalid_argument("simulate: duplicate sources");
  if (!stop.infected_count && !stop.elapsed) {
    throw std::invalid_argument("simulate: stop rule is empty");
  }

  ensure_expanded(src);
  std::vector<NodeState> states(g.node_count(), NodeState::NonSusceptible);
  for (NodeId s : src) states[s] = NodeState::Infected;
  relabel_uninfected(g, states);

  InfectionOutcome out;
  out.path.sources = src;
  out.path.slots.push_back(states);

  auto finish = [&](StopReason reason) {
    out.stop_reason = reason;
    const auto& last = out.path.slots.back();
    for (NodeId u = 0; u < last.size(); ++u) {
      if (last[u] == NodeState::Infected) out.observed_infected.push_back(u);
    }
    return out;
  };

  for (int slot = 0;; ++slot) {
    const std::size_t infected = count_state(states, NodeState::Infected);
    if (stop.infected_count && infected >= *stop.infected_count) {
      return finish(StopReason::ThresholdReached);
    }
    if (stop.elapsed && slot >= *stop.elapsed) return finish(StopReason::Horizon);
    const bool revivable =
        params.model == ModelKind::SIRI && count_state(states, NodeState::Recovered) > 0;
    // Under a count-based stop an extinct run can never reach the threshold;
    // under an elapsed stop the (constant) tail is still part of the path.
    if (infected == 0 && !revivable && stop.infected_count) return finish(StopReason::Extinct);
    if (slot >= max_slots) return finish(StopReason::Horizon);

    states = advance(g, states, params, rng);
    std::vector<NodeId> infected_now;
    for (NodeId u = 0; u < states.size(); ++u) {
      if (states[u] == NodeState::Infected) infected_now.push_back(u);
    }
    ensure_expanded(infected_now);
    // Newly realized nodes (LazyTree) join as uninfected and get labeled by
    // the derived rule.
    states.resize(g.node_count(), NodeState::NonSusceptible);
    relabel_uninfected(g, states);
    out.path.slots.push_back(states);
  }
}

}  // namespace

std::vector<NodeState> initial_states(const Graph& g, std::span<const NodeId> sources) {
  std::vector<NodeState> states(g.node_count(), NodeState::NonSusceptible);
  for (NodeId s : sources) {
    g.check_node(s);
    states[s] = NodeState::Infected;
  }
  relabel_uninfected(g, states);
  return states;
}

std::vector<NodeState> step(const Graph& g, const std::vector<NodeState>& current,
                            const SpreadParams& params, Rng& rng) {
  params.validate(g.node_count());
  check_states(g, current, params);
  return advance(g, current, params, rng);
}

InfectionOutcome simulate(const Graph& g, std::span<const NodeId> sources,
                          const SpreadParams& params, StopRule stop, Rng& rng, int max_slots) {
  params.validate(g.node_count());
  return simulate_impl(g, sources, params, stop, rng, max_slots,
                       [](const std::vector<NodeId>&) {});
}

InfectionOutcome simulate(LazyTree& tree, std::span<const NodeId> sources,
                          const SpreadParams& params, StopRule stop, Rng& rng, int max_slots) {
  if (params.p_s.is_vector() || params.p_i.is_vector() || params.p_r.is_vector()) {
    throw std::invalid_argument("simulate on a LazyTree needs scalar or keyed parameters: the "
                                "node set is not known up front");
  }
  auto ensure_expanded = [&tree](const std::vector<NodeId>& infected) {
    // Expand every infected frontier node and every frontier neighbor of an
    // infected node, so nodes are realized before they can become
    // susceptible.
    for (NodeId u : infected) {
      if (tree.in_frontier(u)) tree.expand(u);
      for (NodeId v : tree.neighbors(u)) {
        if (tree.in_frontier(v)) tree.expand(v);
      }
    }
  };
  return simulate_impl(tree, sources, params, stop, rng, max_slots, ensure_expanded);
}

namespace detail {

namespace {
double log_or_zero_prob(double p) { return p > 0.0 ? std::log(p) : kLogZero; }
}  // namespace

double log_transition(ModelKind model, NodeState prev, NodeState cur, double ps, double pi,
                      double pr) {
  switch (prev) {
    case NodeState::Susceptible:
      if (cur == NodeState::Infected) return log_or_zero_prob(ps);
      if (cur == NodeState::Susceptible || cur == NodeState::NonSusceptible) {
        return log_or_zero_prob(1.0 - ps);
      }
      return kLogZero;
    case NodeState::NonSusceptible:
      if (cur == NodeState::Susceptible || cur == NodeState::NonSusceptible) return 0.0;
      return kLogZero;
    case NodeState::Infected:
      switch (model) {
        case ModelKind::SI:
          return cur == NodeState::Infected ? 0.0 : kLogZero;
        case ModelKind::SIR:
        case ModelKind::SIRI:
          if (cur == NodeState::Infected) return log_or_zero_prob(pi);
          if (cur == NodeState::Recovered) return log_or_zero_prob(1.0 - pi);
          return kLogZero;
        case ModelKind::SIS:
          if (cur == NodeState::Infected) return log_or_zero_prob(pi);
          if (cur == NodeState::Susceptible || cur == NodeState::NonSusceptible) {
            return log_or_zero_prob(1.0 - pi);
          }
          return kLogZero;
      }
      return kLogZero;
    case NodeState::Recovered:
      if (model == ModelKind::SIRI) {
        if (cur == NodeState::Infected) return log_or_zero_prob(pr);
        if (cur == NodeState::Recovered) return log_or_zero_prob(1.0 - pr);
        return kLogZero;
      }
      if (model == ModelKind::SIR) return cur == NodeState::Recovered ? 0.0 : kLogZero;
      return kLogZero;  // no recovered state under SI/SIS
  }
  return kLogZero;
}

}  // namespace detail

double log_path_probability(const Graph& g, const InfectionPath& path,
                            const SpreadParams& params) {
  params.validate(g.node_count());
  if (path.slots.empty()) throw std::invalid_argument("path has no slots");
  for (const auto& row : path.slots) {
    if (row.size() > g.node_count()) {
      throw std::invalid_argument("path rows exceed the graph's node count");
    }
  }

  // A slot whose derived labels contradict the infected sets has zero
  // probability: the label is part of the state.
  auto labels_consistent = [&](int tau) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const NodeState s = path.state(u, tau);
      if (s == NodeState::Infected || s == NodeState::Recovered) continue;
      bool infected_neighbor = false;
      for (NodeId v : g.neighbors(u)) {
        if (path.state(v, tau) == NodeState::Infected) {
          infected_neighbor = true;
          break;
        }
      }
      if (infected_neighbor != (s == NodeState::Susceptible)) return false;
    }
    return true;
  };

  if (!labels_consistent(0)) return kLogZero;
  double total = 0.0;
  for (int tau = 1; tau <= path.elapsed(); ++tau) {
    if (!labels_consistent(tau)) return kLogZero;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const double f = detail::log_transition(params.model, path.state(u, tau - 1),
                                              path.state(u, tau), params.p_s.at(u),
                                              params.p_i.at(u), params.p_r.at(u));
      if (f == kLogZero) return kLogZero;
      total += f;
    }
  }
  return total;
}

bool is_consistent(const InfectionPath& path, std::span<const NodeId> infected) {
  const std::vector<NodeId> want = canonical_node_set(infected);
  return path.infected_at(path.elapsed()) == want;
}

}  // namespace epicenter
