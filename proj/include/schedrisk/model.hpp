#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schedrisk/distribution.hpp"

namespace schedrisk {

struct Activity {
  std::string id;
  std::string name;
  Distribution duration = PointDist{0.0};
  double fixed_cost = 0.0;
  double variable_cost_rate = 0.0;  // money per time unit

  friend bool operator==(const Activity&, const Activity&) = default;
};

enum class RiskKind { duration, cost };

struct RiskEvent {
  std::string id;
  std::string name;
  double probability = 0.0;
  Distribution impact = PointDist{0.0};
  RiskKind kind = RiskKind::duration;
  std::string target;

  friend bool operator==(const RiskEvent&, const RiskEvent&) = default;
};

/// "successor has predecessor" relation, one row of the precedence matrix.
struct Precedence {
  std::string successor;
  std::string predecessor;

  friend bool operator==(const Precedence&, const Precedence&) = default;
};

/// Project as written by the user. Precedence is kept as a list of pairs; when
/// the source used a binary matrix, `matrix_columns` records its row/column
/// order so the matrix can be written back unchanged.
///
/// A duration risk whose id appears in `precedence` is already wired into the
/// network (the matrix style where risks are rows of their own). Any other
/// duration risk is inserted after its target during validation.
struct ProjectSpec {
  std::vector<Activity> activities;
  std::vector<RiskEvent> risks;
  std::vector<Precedence> precedence;
  std::optional<std::vector<std::string>> matrix_columns;

  friend bool operator==(const ProjectSpec&, const ProjectSpec&) = default;
};

/// Square binary matrix M over `ids`; M[i][j] == 1 means ids[i] has
/// predecessor ids[j].
struct PrecedenceMatrix {
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint8_t>> cells;
};

PrecedenceMatrix precedence_matrix(const ProjectSpec& spec);

enum class NodeKind { activity, duration_risk };

/// Node of the expanded network. Risk nodes take `gate_probability` = p and
/// `law` = impact, so their duration is the mixture (1-p)*point(0) + p*impact.
struct NetworkNode {
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::activity;
  Distribution law = PointDist{0.0};
  double gate_probability = 1.0;
  double fixed_cost = 0.0;
  double variable_cost_rate = 0.0;
  std::string risk_target;  // risk nodes only

  double expected_duration() const { return gate_probability * mean(law); }
};

/// Mutable adjacency form used while building a network.
struct NetworkGraph {
  std::vector<NetworkNode> nodes;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<std::vector<std::size_t>> succs;

  std::optional<std::size_t> find(const std::string& id) const;
  std::size_t add_node(NetworkNode node);
  void add_edge(std::size_t predecessor, std::size_t successor);
};

/// Inserts a node for a duration risk directly after its target: the target's
/// successors are rerouted through the risk node, which becomes the target's
/// only successor. Throws BadRiskTarget if the target is unknown or the risk
/// is not a duration risk.
std::size_t expand_duration_risk(NetworkGraph& graph, const RiskEvent& risk);

struct CostRiskAttachment {
  std::string id;
  std::string name;
  double probability = 0.0;
  Distribution impact;
  std::size_t node = 0;  // topological index of the target

  double expected_amount() const { return probability * mean(impact); }
};

/// Validated, topologically ordered network. Immutable once built; node
/// indices are positions in topological order, source first and sink last.
class ValidatedNetwork {
 public:
  ValidatedNetwork(std::vector<NetworkNode> nodes, std::vector<std::vector<std::size_t>> preds,
                   std::vector<std::vector<std::size_t>> succs,
                   std::vector<CostRiskAttachment> cost_risks);

  std::size_t size() const { return nodes_.size(); }
  const NetworkNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& preds(std::size_t i) const { return preds_[i]; }
  const std::vector<std::size_t>& succs(std::size_t i) const { return succs_[i]; }
  const std::vector<CostRiskAttachment>& cost_risks() const { return cost_risks_; }

  std::size_t source() const { return 0; }
  std::size_t sink() const { return nodes_.size() - 1; }
  bool is_dummy(std::size_t i) const { return i == source() || i == sink(); }

  std::optional<std::size_t> find(const std::string& id) const;
  std::vector<double> expected_durations() const;

  /// Planned value of each node: fixed + rate * expected duration + expected
  /// amounts of the cost risks attached to it.
  std::vector<double> planned_values() const;

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<CostRiskAttachment> cost_risks_;
};

ValidatedNetwork validate(const ProjectSpec& spec);

/// Writes a validated network back as a spec with every duration risk wired
/// explicitly; validate(render(validate(s))) is isomorphic to validate(s).
ProjectSpec render(const ValidatedNetwork& network);

}  // namespace schedrisk
