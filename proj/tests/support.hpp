#pragma once

// Shared builders and independent oracles for the test programs. Nothing in
// here calls into the CPM or simulation code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schedrisk/model.hpp"

namespace support {

using namespace schedrisk;

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SCHEDRISK_FIXTURE_DIR) / name;
}

inline Activity act(std::string id, Distribution d, double fixed = 0.0, double rate = 0.0) {
  return {id, id, std::move(d), fixed, rate};
}

inline RiskEvent risk(std::string id, std::string target, double p, Distribution impact,
                      RiskKind kind = RiskKind::duration) {
  return {id, id, p, std::move(impact), kind, std::move(target)};
}

/// A0 -> X1 -> ... -> Xn -> Af
inline ProjectSpec serial(const std::vector<Distribution>& laws, double fixed = 0.0,
                          double rate = 0.0) {
  ProjectSpec s;
  s.activities.push_back(act("A0", PointDist{0}));
  std::string prev = "A0";
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const std::string id = "X" + std::to_string(i + 1);
    s.activities.push_back(act(id, laws[i], fixed, rate));
    s.precedence.push_back({id, prev});
    prev = id;
  }
  s.activities.push_back(act("Af", PointDist{0}));
  s.precedence.push_back({"Af", prev});
  return s;
}

/// A0 -> {X1, ..., Xn} -> Af
inline ProjectSpec parallel(const std::vector<Distribution>& laws, double fixed = 0.0,
                            double rate = 0.0) {
  ProjectSpec s;
  s.activities.push_back(act("A0", PointDist{0}));
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const std::string id = "X" + std::to_string(i + 1);
    s.activities.push_back(act(id, laws[i], fixed, rate));
    s.precedence.push_back({id, "A0"});
    s.precedence.push_back({"Af", id});
  }
  s.activities.push_back(act("Af", PointDist{0}));
  return s;
}

/// The six-activity network with R1 -> A1 and R2 -> A2 written as matrix rows.
inline ProjectSpec figure3(double d1 = 2, double d2 = 3, double d3 = 4, double d4 = 5,
                           Distribution r1 = PointDist{0}, Distribution r2 = PointDist{0},
                           double p1 = 1.0, double p2 = 1.0) {
  ProjectSpec s;
  s.activities = {act("A0", PointDist{0}), act("A1", PointDist{d1}), act("A2", PointDist{d2}),
                  act("A3", PointDist{d3}), act("A4", PointDist{d4}), act("Af", PointDist{0})};
  s.risks = {risk("A5", "A1", p1, std::move(r1)), risk("A6", "A2", p2, std::move(r2))};
  s.precedence = {{"A1", "A0"}, {"A2", "A0"}, {"A3", "A5"}, {"A4", "A5"}, {"A4", "A6"},
                  {"A5", "A1"}, {"A6", "A2"}, {"Af", "A3"}, {"Af", "A4"}};
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle for networks whose laws are all discrete (or point).

struct Atom {
  double value;
  double prob;
};

inline std::vector<Atom> atoms_of(const Distribution& d) {
  if (auto p = std::get_if<PointDist>(&d)) return {{p->value, 1.0}};
  if (auto q = std::get_if<DiscreteDist>(&d)) {
    std::vector<Atom> out;
    for (auto [v, w] : q->atoms) out.push_back({v, w});
    return out;
  }
  throw std::logic_error("oracle needs point or discrete laws");
}

/// Plain graph of a spec after inserting every duration risk not already in
/// the precedence list: target -> risk -> former successors of target.
struct OracleGraph {
  std::vector<std::string> ids;
  std::vector<std::vector<Atom>> laws;  // duration outcome per node
  std::vector<double> fixed, rate;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (pred, succ)
  struct CostRisk {
    std::size_t node;
    std::vector<Atom> outcomes;
  };
  std::vector<CostRisk> cost_risks;

  std::size_t index(const std::string& id) const {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  }
};

inline std::vector<Atom> gated(double p, const std::vector<Atom>& impact) {
  std::vector<Atom> out;
  if (p < 1.0) out.push_back({0.0, 1.0 - p});
  if (p > 0.0)
    for (auto a : impact) out.push_back({a.value, p * a.prob});
  return out;
}

inline OracleGraph oracle_graph(const ProjectSpec& spec) {
  OracleGraph g;
  for (const auto& a : spec.activities) {
    g.ids.push_back(a.id);
    g.laws.push_back(atoms_of(a.duration));
    g.fixed.push_back(a.fixed_cost);
    g.rate.push_back(a.variable_cost_rate);
  }
  std::set<std::string> wired;
  for (const auto& p : spec.precedence) wired.insert(p.successor), wired.insert(p.predecessor);
  for (const auto& r : spec.risks)
    if (r.kind == RiskKind::duration) {
      g.ids.push_back(r.id);
      g.laws.push_back(gated(r.probability, atoms_of(r.impact)));
      g.fixed.push_back(0.0);
      g.rate.push_back(0.0);
    }
  for (const auto& p : spec.precedence)
    g.edges.push_back({g.index(p.predecessor), g.index(p.successor)});
  for (const auto& r : spec.risks) {
    if (r.kind == RiskKind::cost) {
      g.cost_risks.push_back({g.index(r.target), gated(r.probability, atoms_of(r.impact))});
      continue;
    }
    if (wired.contains(r.id)) continue;
    const std::size_t t = g.index(r.target), k = g.index(r.id);
    for (auto& e : g.edges)
      if (e.first == t) e.first = k;
    g.edges.push_back({t, k});
  }
  return g;
}

/// Every source-to-sink path by DFS over the edge list (source/sink found by
/// in/out degree).
inline std::vector<std::vector<std::size_t>> oracle_paths(const OracleGraph& g) {
  const std::size_t n = g.ids.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : g.edges) succ[a].push_back(b), ++indeg[b];
  std::size_t src = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) src = i;
  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> stack{src};
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    if (succ[v].empty()) {
      paths.push_back(stack);
      return;
    }
    for (auto w : succ[v]) {
      stack.push_back(w);
      dfs(w);
      stack.pop_back();
    }
  };
  dfs(src);
  return paths;
}

struct ExactOutcome {
  std::map<double, double> duration;  // value -> probability
  std::map<double, double> cost;
  std::vector<double> criticality;  // per oracle node, P(on a longest path)
};

/// Enumerates every joint outcome of node durations and cost risks.
inline ExactOutcome exact_outcome(const ProjectSpec& spec) {
  const OracleGraph g = oracle_graph(spec);
  const auto paths = oracle_paths(g);
  const std::size_t n = g.ids.size();
  ExactOutcome out;
  out.criticality.assign(n, 0.0);

  std::vector<std::size_t> pick(n, 0);
  std::vector<double> d(n);
  while (true) {
    double prob = 1.0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = g.laws[i][pick[i]].value;
      prob *= g.laws[i][pick[i]].prob;
      cost += g.fixed[i] + g.rate[i] * d[i];
    }
    double best = -1.0;
    std::vector<double> lengths;
    for (const auto& p : paths) {
      double len = 0.0;
      for (auto v : p) len += d[v];
      lengths.push_back(len);
      best = std::max(best, len);
    }
    std::vector<char> crit(n, 0);
    for (std::size_t q = 0; q < paths.size(); ++q)
      if (lengths[q] >= best - 1e-9)
        for (auto v : paths[q]) crit[v] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (crit[i]) out.criticality[i] += prob;
    out.duration[best] += prob;

    // cost risks are independent of durations: convolve their outcomes here
    std::map<double, double> extra{{0.0, 1.0}};
    for (const auto& cr : g.cost_risks) {
      std::map<double, double> next;
      for (auto [v, w] : extra)
        for (auto a : cr.outcomes) next[v + a.value] += w * a.prob;
      extra = std::move(next);
    }
    for (auto [v, w] : extra) out.cost[cost + v] += prob * w;

    std::size_t i = 0;
    while (i < n && ++pick[i] == g.laws[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// sup |F_n - F| for a discrete reference law, checking both one-sided limits
/// at every atom of either distribution.
inline double ks_distance(std::vector<double> sample, const std::map<double, double>& exact) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  std::set<double> xs;
  for (auto [v, w] : exact) xs.insert(v);
  xs.insert(sample.begin(), sample.end());
  double worst = 0.0;
  for (double x : xs) {
    double below = 0.0, upto = 0.0;
    for (auto [v, w] : exact) {
      if (v < x) below += w;
      if (v <= x) upto += w;
    }
    const double lo = static_cast<double>(std::lower_bound(sample.begin(), sample.end(), x) -
                                          sample.begin()) / n;
    const double hi = static_cast<double>(std::upper_bound(sample.begin(), sample.end(), x) -
                                          sample.begin()) / n;
    worst = std::max({worst, std::abs(lo - below), std::abs(hi - upto)});
  }
  return worst;
}

inline double dkw_bound99(std::size_t n) {
  return std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(n)));
}

/// Random network: 2..max_act real activities on a layered DAG, integer
/// 2-3-atom discrete durations, up to two risks (duration or cost).
inline ProjectSpec random_discrete_network(std::mt19937_64& rng, int max_act = 6,
                                           int max_risks = 2) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto law = [&] {
    const int k = uni(2, 3);
    std::set<int> vals;
    while (static_cast<int>(vals.size()) < k) vals.insert(uni(0, 9));
    std::vector<double> w;
    double total = 0.0;
    for (int i = 0; i < k; ++i) w.push_back(uni(1, 5)), total += w.back();
    DiscreteDist d;
    int i = 0;
    double acc = 0.0;
    for (int v : vals) {
      const double p = i + 1 == k ? 1.0 - acc : w[i] / total;
      acc += p;
      d.atoms.emplace_back(v, p);
      ++i;
    }
    return Distribution{d};
  };

  ProjectSpec s;
  const int n = uni(2, max_act);
  s.activities.push_back(act("A0", PointDist{0}));
  for (int i = 1; i <= n; ++i)
    s.activities.push_back(act("T" + std::to_string(i), law(), uni(0, 20), uni(0, 3)));
  s.activities.push_back(act("Af", PointDist{0}));

  // each activity gets 1-2 predecessors among earlier ones (or the start)
  std::vector<int> outdeg(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    std::set<int> preds{uni(0, i - 1)};
    if (i > 1 && uni(0, 1)) preds.insert(uni(1, i - 1));
    for (int p : preds) {
      s.precedence.push_back({"T" + std::to_string(i), p == 0 ? "A0" : "T" + std::to_string(p)});
      ++outdeg[p];
    }
  }
  for (int i = 1; i <= n; ++i)
    if (outdeg[i] == 0) s.precedence.push_back({"Af", "T" + std::to_string(i)});

  const int risks = uni(0, max_risks);
  for (int r = 0; r < risks; ++r) {
    DiscreteDist impact;
    const int a = uni(1, 4), b = a + uni(1, 3);
    impact.atoms = {{static_cast<double>(a), 0.5}, {static_cast<double>(b), 0.5}};
    const double p = uni(1, 9) / 10.0;
    const auto kind = uni(0, 2) == 0 ? RiskKind::cost : RiskKind::duration;
    s.risks.push_back(
        risk("R" + std::to_string(r + 1), "T" + std::to_string(uni(1, n)), p, impact, kind));
  }
  return s;
}

}  // namespace support
