#pragma once

#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "epicenter/graph.hpp"
#include "epicenter/lazy_tree.hpp"
#include "epicenter/rng.hpp"

namespace epicenter {

enum class ModelKind { SI, SIR, SIRI, SIS };

std::string to_string(ModelKind m);
ModelKind parse_model(const std::string& s);

/// Node states as reported per slot. Susceptible vs NonSusceptible is a
/// derived label: an uninfected node is Susceptible exactly when it has an
/// infected neighbor in the same slot. Under SIRI an uninfected node is also
/// guaranteed never to have been infected, since leaving the infected state
/// goes to Recovered.
enum class NodeState : std::uint8_t { Susceptible, Infected, NonSusceptible, Recovered };

char state_char(NodeState s);

/// Probability per node: a scalar broadcast, an explicit vector, or a keyed
/// uniform draw. Keyed fields map every node id to a value in [lo, hi)
/// through a hash of (seed, id), which gives iid-uniform heterogeneous
/// parameters over an unbounded node set — the form lazily grown trees need.
class ProbField {
 public:
  ProbField() : scalar_(0.0) {}
  ProbField(double value) : scalar_(value) {}  // NOLINT: implicit by design of call sites
  explicit ProbField(std::vector<double> values)
      : kind_(Kind::Vector), values_(std::move(values)) {}

  static ProbField keyed_uniform(double lo, double hi, std::uint64_t seed);

  bool is_scalar() const { return kind_ == Kind::Scalar; }
  bool is_vector() const { return kind_ == Kind::Vector; }
  bool is_keyed() const { return kind_ == Kind::Keyed; }
  double at(NodeId u) const {
    switch (kind_) {
      case Kind::Scalar: return scalar_;
      case Kind::Vector: return values_[u];
      case Kind::Keyed: break;
    }
    const std::uint64_t h = splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (u + 1)));
    return lo_ + (hi_ - lo_) * (static_cast<double>(h >> 11) * 0x1.0p-53);
  }
  double min_value() const;
  double max_value() const;
  std::size_t size() const { return values_.size(); }
  void validate(std::size_t node_count, const std::string& name) const;

 private:
  enum class Kind { Scalar, Vector, Keyed };

  Kind kind_ = Kind::Scalar;
  double scalar_ = 0.0;
  std::vector<double> values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Per-node spreading probabilities plus the model they drive.
/// p_s: infection probability while susceptible; p_i: probability of staying
/// infected; p_r: relapse probability while recovered (SIRI only).
struct SpreadParams {
  ModelKind model = ModelKind::SI;
  ProbField p_s;
  ProbField p_i;
  ProbField p_r;

  static SpreadParams si(ProbField p_s);
  static SpreadParams sir(ProbField p_s, ProbField p_i);
  static SpreadParams siri(ProbField p_s, ProbField p_i, ProbField p_r);
  static SpreadParams sis(ProbField p_s, ProbField p_i);

  double alpha() const { return p_s.min_value(); }  // min_v p_s(v)
  double beta() const { return p_s.max_value(); }   // max_v p_s(v)

  void validate(std::size_t node_count) const;
};

std::string format_params(const SpreadParams& params);
SpreadParams parse_params(std::istream& in);
SpreadParams parse_params_file(const std::string& path);

struct AssumptionViolation {
  std::string clause;
  std::optional<NodeId> node;
  double value = 0.0;
  double bound_lo = 0.0;
  double bound_hi = 1.0;
};

struct AssumptionReport {
  bool pass = true;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<AssumptionViolation> violations;
};

/// Checks the per-model parameter regime under which the Jordan center is the
/// optimal single-source estimator:
///   SI:   beta <= alpha / (1-alpha)^2
///   SIR:  0 <= p_i(v) <= sqrt(alpha/beta)
///   SIRI: (beta-alpha)/(1-alpha) <= p_i(v) <= sqrt(alpha/beta) and
///         1-sqrt(alpha/beta) <= p_r(v) <= min{1, sqrt(alpha/beta) * p_i/(1-p_i)}
///   SIS:  scalar p_s, p_i with 0 <= p_s <= p_i <= 1
/// Violations are reported, never thrown.
AssumptionReport validate_assumptions(const SpreadParams& params, std::size_t node_count);

/// Full per-slot state trajectory. Rows may be shorter than the final node
/// count when the graph grew lazily during simulation; missing entries read
/// as NonSusceptible.
struct InfectionPath {
  std::vector<NodeId> sources;
  std::vector<std::vector<NodeState>> slots;  // slots[tau][node], tau = 0..elapsed

  int elapsed() const { return static_cast<int>(slots.size()) - 1; }
  NodeState state(NodeId u, int tau) const {
    const auto& row = slots[static_cast<std::size_t>(tau)];
    return u < row.size() ? row[u] : NodeState::NonSusceptible;
  }
  std::vector<NodeId> infected_at(int tau) const;
};

enum class StopReason { ThresholdReached, Extinct, Horizon };

std::string to_string(StopReason r);

struct InfectionOutcome {
  InfectionPath path;
  std::vector<NodeId> observed_infected;  // sorted; infected set at the final slot
  StopReason stop_reason = StopReason::Horizon;
};

struct StopRule {
  std::optional<std::size_t> infected_count;  // stop once |infected| >= this
  std::optional<int> elapsed;                 // stop after this many slots

  static StopRule infected_at_least(std::size_t n) { return {n, std::nullopt}; }
  static StopRule after(int slots) { return {std::nullopt, slots}; }
};

/// Initial slot-0 states: sources infected, everyone else labeled by the
/// derived susceptible/non-susceptible rule.
std::vector<NodeState> initial_states(const Graph& g, std::span<const NodeId> sources);

/// One synchronous slot update. Every transition is drawn from the slot-start
/// states; susceptible/non-susceptible labels are recomputed afterwards.
/// Nodes consume draws in id order, so results are reproducible per seed.
std::vector<NodeState> step(const Graph& g, const std::vector<NodeState>& current,
                            const SpreadParams& params, Rng& rng);

InfectionOutcome simulate(const Graph& g, std::span<const NodeId> sources,
                          const SpreadParams& params, StopRule stop, Rng& rng,
                          int max_slots = 100000);

/// LazyTree variant: frontier nodes adjacent to an infected node (and
/// infected frontier nodes themselves) are expanded before each update, so
/// the realized tree always covers everything the infection can touch next.
InfectionOutcome simulate(LazyTree& tree, std::span<const NodeId> sources,
                          const SpreadParams& params, StopRule stop, Rng& rng,
                          int max_slots = 100000);

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log P(path | sources), summed per node and slot. Each factor depends on
/// the node's previous state and its own parameters; an impossible transition
/// (including a mislabeled susceptible/non-susceptible state) yields -inf.
double log_path_probability(const Graph& g, const InfectionPath& path,
                            const SpreadParams& params);

/// True iff the final slot's infected set is exactly `infected`.
bool is_consistent(const InfectionPath& path, std::span<const NodeId> infected);

namespace detail {

// Transition factor for one node across one slot boundary. `prev` carries the
// infected-neighbor information through the derived susceptible label.
double log_transition(ModelKind model, NodeState prev, NodeState cur, double ps, double pi,
                      double pr);

}  // namespace detail

}  // namespace epicenter
