#include "schedrisk/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "schedrisk/error.hpp"

namespace schedrisk {
namespace {

void check_distribution(const Distribution& dist, const std::string& owner) {
  if (auto problem = check_params(dist); !problem.empty())
    throw Error(ErrorCode::BadDistributionParams, owner + ": " + problem, owner);
}

void check_cost(double value, const std::string& field, const std::string& owner) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::BadDistributionParams, owner + ": " + field + " must be >= 0", owner);
}

// Depth-first search for a back edge; returns one cycle as a closed id list.
std::optional<std::vector<std::size_t>> find_cycle(const NetworkGraph& g) {
  enum class Mark : std::uint8_t { fresh, open, done };
  std::vector<Mark> mark(g.nodes.size(), Mark::fresh);
  std::vector<std::size_t> parent(g.nodes.size(), 0);

  for (std::size_t root = 0; root < g.nodes.size(); ++root) {
    if (mark[root] != Mark::fresh) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::open;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < g.succs[v].size()) {
        const std::size_t w = g.succs[v][next++];
        if (mark[w] == Mark::open) {
          std::vector<std::size_t> cycle{w};
          for (std::size_t u = v; u != w; u = parent[u]) cycle.push_back(u);
          cycle.push_back(w);
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
        if (mark[w] == Mark::fresh) {
          mark[w] = Mark::open;
          parent[w] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        mark[v] = Mark::done;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

bool is_zero_dummy(const NetworkNode& n) {
  return n.kind == NodeKind::activity && is_point(n.law) && mean(n.law) == 0.0 &&
         n.fixed_cost == 0.0 && n.variable_cost_rate == 0.0;
}

}  // namespace

PrecedenceMatrix precedence_matrix(const ProjectSpec& spec) {
  PrecedenceMatrix m;
  if (spec.matrix_columns) {
    m.ids = *spec.matrix_columns;
  } else {
    for (const auto& a : spec.activities) m.ids.push_back(a.id);
    std::unordered_set<std::string> wired;
    for (const auto& p : spec.precedence) {
      wired.insert(p.successor);
      wired.insert(p.predecessor);
    }
    for (const auto& r : spec.risks)
      if (wired.contains(r.id)) m.ids.push_back(r.id);
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.ids.size(); ++i) index.emplace(m.ids[i], i);
  m.cells.assign(m.ids.size(), std::vector<std::uint8_t>(m.ids.size(), 0));
  for (const auto& p : spec.precedence) {
    auto s = index.find(p.successor);
    auto q = index.find(p.predecessor);
    if (s != index.end() && q != index.end()) m.cells[s->second][q->second] = 1;
  }
  return m;
}

std::optional<std::size_t> NetworkGraph::find(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

std::size_t NetworkGraph::add_node(NetworkNode node) {
  nodes.push_back(std::move(node));
  preds.emplace_back();
  succs.emplace_back();
  return nodes.size() - 1;
}

void NetworkGraph::add_edge(std::size_t predecessor, std::size_t successor) {
  auto& s = succs[predecessor];
  if (std::find(s.begin(), s.end(), successor) != s.end()) return;
  s.push_back(successor);
  preds[successor].push_back(predecessor);
}

std::size_t expand_duration_risk(NetworkGraph& graph, const RiskEvent& risk) {
  if (risk.kind != RiskKind::duration)
    throw Error(ErrorCode::BadRiskTarget, risk.id + ": only duration risks become nodes", risk.id);
  auto target = graph.find(risk.target);
  if (!target)
    throw Error(ErrorCode::BadRiskTarget, risk.id + ": unknown target '" + risk.target + "'",
                risk.id);

  NetworkNode node;
  node.id = risk.id;
  node.name = risk.name;
  node.kind = NodeKind::duration_risk;
  node.law = risk.impact;
  node.gate_probability = risk.probability;
  node.risk_target = risk.target;
  const std::size_t r = graph.add_node(std::move(node));
  const std::size_t t = *target;

  auto rerouted = std::move(graph.succs[t]);
  graph.succs[t] = {r};
  graph.preds[r] = {t};
  for (std::size_t s : rerouted) {
    std::replace(graph.preds[s].begin(), graph.preds[s].end(), t, r);
    graph.succs[r].push_back(s);
  }
  return r;
}

ValidatedNetwork::ValidatedNetwork(std::vector<NetworkNode> nodes,
                                   std::vector<std::vector<std::size_t>> preds,
                                   std::vector<std::vector<std::size_t>> succs,
                                   std::vector<CostRiskAttachment> cost_risks)
    : nodes_(std::move(nodes)),
      preds_(std::move(preds)),
      succs_(std::move(succs)),
      cost_risks_(std::move(cost_risks)) {}

std::optional<std::size_t> ValidatedNetwork::find(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return i;
  return std::nullopt;
}

std::vector<double> ValidatedNetwork::expected_durations() const {
  std::vector<double> d(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) d[i] = nodes_[i].expected_duration();
  return d;
}

std::vector<double> ValidatedNetwork::planned_values() const {
  std::vector<double> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    v[i] = nodes_[i].fixed_cost + nodes_[i].variable_cost_rate * nodes_[i].expected_duration();
  for (const auto& c : cost_risks_) v[c.node] += c.expected_amount();
  return v;
}

ValidatedNetwork validate(const ProjectSpec& spec) {
  std::unordered_set<std::string> seen;
  for (const auto& a : spec.activities) {
    if (!seen.insert(a.id).second)
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + a.id + "'", a.id);
    check_distribution(a.duration, a.id);
    check_cost(a.fixed_cost, "fixed_cost", a.id);
    check_cost(a.variable_cost_rate, "variable_cost_rate", a.id);
  }
  for (const auto& r : spec.risks) {
    if (!seen.insert(r.id).second)
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + r.id + "'", r.id);
    if (!(r.probability >= 0.0 && r.probability <= 1.0))
      throw Error(ErrorCode::BadDistributionParams, r.id + ": probability must lie in [0, 1]",
                  r.id);
    check_distribution(r.impact, r.id);
  }

  std::unordered_set<std::string> wired;
  for (const auto& p : spec.precedence) {
    wired.insert(p.successor);
    wired.insert(p.predecessor);
  }

  NetworkGraph g;
  for (const auto& a : spec.activities) {
    NetworkNode n;
    n.id = a.id;
    n.name = a.name;
    n.law = a.duration;
    n.fixed_cost = a.fixed_cost;
    n.variable_cost_rate = a.variable_cost_rate;
    g.add_node(std::move(n));
  }
  std::vector<const RiskEvent*> explicit_risks, inserted_risks, cost_risks;
  for (const auto& r : spec.risks) {
    if (r.kind == RiskKind::cost) {
      if (wired.contains(r.id))
        throw Error(ErrorCode::BadRiskTarget, r.id + ": cost risks cannot appear in precedence",
                    r.id);
      cost_risks.push_back(&r);
    } else if (wired.contains(r.id)) {
      explicit_risks.push_back(&r);
      NetworkNode n;
      n.id = r.id;
      n.name = r.name;
      n.kind = NodeKind::duration_risk;
      n.law = r.impact;
      n.gate_probability = r.probability;
      n.risk_target = r.target;
      g.add_node(std::move(n));
    } else {
      inserted_risks.push_back(&r);
    }
  }

  for (const auto& p : spec.precedence) {
    auto s = g.find(p.successor);
    if (!s)
      throw Error(ErrorCode::UnknownPredecessor, "unknown activity '" + p.successor + "'",
                  p.successor);
    auto q = g.find(p.predecessor);
    if (!q)
      throw Error(ErrorCode::UnknownPredecessor,
                  p.successor + ": unknown predecessor '" + p.predecessor + "'", p.predecessor);
    if (*s == *q)
      throw Error(ErrorCode::CycleDetected, "cycle: " + p.successor + " -> " + p.successor,
                  p.successor);
    g.add_edge(*q, *s);
  }

  if (auto cycle = find_cycle(g)) {
    std::string text;
    for (std::size_t i = 0; i < cycle->size(); ++i)
      text += (i ? " -> " : "") + g.nodes[(*cycle)[i]].id;
    throw Error(ErrorCode::CycleDetected, "cycle: " + text, g.nodes[cycle->front()].id);
  }

  auto endpoint = [&](bool want_source) {
    std::vector<std::size_t> found;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if ((want_source ? g.preds[i] : g.succs[i]).empty()) found.push_back(i);
    if (found.size() != 1) {
      std::string ids;
      for (auto i : found) ids += (ids.empty() ? "" : ", ") + g.nodes[i].id;
      const auto code = want_source ? ErrorCode::MultipleSources : ErrorCode::MultipleSinks;
      throw Error(code,
                  std::to_string(found.size()) + (want_source ? " sources" : " sinks") +
                      (ids.empty() ? "" : " (" + ids + ")"),
                  found.empty() ? std::string{} : g.nodes[found[found.size() > 1]].id);
    }
    return found.front();
  };
  const std::size_t source = endpoint(true);
  const std::size_t sink = endpoint(false);
  for (std::size_t end : {source, sink}) {
    if (!is_zero_dummy(g.nodes[end]))
      throw Error(ErrorCode::BadDistributionParams,
                  g.nodes[end].id + ": start/end dummy must have point(0) duration and no cost",
                  g.nodes[end].id);
  }

  auto target_of = [&](const RiskEvent& r) {
    auto t = g.find(r.target);
    if (!t || g.nodes[*t].kind != NodeKind::activity)
      throw Error(ErrorCode::BadRiskTarget, r.id + ": unknown target '" + r.target + "'", r.id);
    return *t;
  };
  // A wired risk hangs off its target, possibly behind other wired risks on
  // the same target: target -> R1 -> R2 -> ..., each link exclusive.
  std::map<std::size_t, std::string> wired_target;
  for (const RiskEvent* r : explicit_risks) wired_target[*g.find(r->id)] = r->target;
  for (const RiskEvent* r : explicit_risks) {
    const std::size_t t = target_of(*r);
    std::size_t cur = *g.find(r->id);
    for (std::size_t hops = 0; hops <= explicit_risks.size(); ++hops) {
      const bool exclusive = g.preds[cur].size() == 1 &&
                             g.succs[g.preds[cur][0]] == std::vector<std::size_t>{cur};
      const std::size_t p = exclusive ? g.preds[cur][0] : t;
      const auto w = wired_target.find(p);
      if (exclusive && p == t) break;
      if (!exclusive || w == wired_target.end() || w->second != r->target)
        throw Error(ErrorCode::BadRiskTarget,
                    r->id + ": a wired risk node must follow its target '" + r->target +
                        "' as its only successor, optionally behind other risks on that target",
                    r->id);
      cur = p;
    }
  }
  for (const RiskEvent* r : inserted_risks) {
    if (target_of(*r) == sink)
      throw Error(ErrorCode::BadRiskTarget, r->id + ": cannot target the end dummy", r->id);
    expand_duration_risk(g, *r);
  }
  for (const RiskEvent* r : cost_risks) target_of(*r);

  // FIFO Kahn: released successors queue up in input order.
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> indegree(n), order;
  for (std::size_t i = 0; i < n; ++i) indegree[i] = g.preds[i].size();
  std::deque<std::size_t> ready{source};
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    order.push_back(v);
    auto released = g.succs[v];
    std::sort(released.begin(), released.end());
    for (std::size_t w : released)
      if (--indegree[w] == 0) ready.push_back(w);
  }

  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
  std::vector<NetworkNode> nodes;
  std::vector<std::vector<std::size_t>> preds(n), succs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t v = order[k];
    nodes.push_back(g.nodes[v]);
    for (std::size_t p : g.preds[v]) preds[k].push_back(position[p]);
    for (std::size_t s : g.succs[v]) succs[k].push_back(position[s]);
    std::sort(preds[k].begin(), preds[k].end());
    std::sort(succs[k].begin(), succs[k].end());
  }

  std::vector<CostRiskAttachment> attachments;
  for (const RiskEvent* r : cost_risks)
    attachments.push_back({r->id, r->name, r->probability, r->impact, position[*g.find(r->target)]});

  return ValidatedNetwork(std::move(nodes), std::move(preds), std::move(succs),
                          std::move(attachments));
}

ProjectSpec render(const ValidatedNetwork& network) {
  ProjectSpec spec;
  for (std::size_t i = 0; i < network.size(); ++i) {
    const auto& n = network.node(i);
    if (n.kind == NodeKind::activity) {
      spec.activities.push_back({n.id, n.name, n.law, n.fixed_cost, n.variable_cost_rate});
    } else {
      spec.risks.push_back(
          {n.id, n.name, n.gate_probability, n.law, RiskKind::duration, n.risk_target});
    }
  }
  for (const auto& c : network.cost_risks())
    spec.risks.push_back(
        {c.id, c.name, c.probability, c.impact, RiskKind::cost, network.node(c.node).id});
  for (std::size_t i = 0; i < network.size(); ++i)
    for (std::size_t p : network.preds(i))
      spec.precedence.push_back({network.node(i).id, network.node(p).id});
  return spec;
}

}  // namespace schedrisk
