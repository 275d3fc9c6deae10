#include "schedrisk/cpm.hpp"

#include <algorithm>
#include <cmath>

#include "schedrisk/error.hpp"

namespace schedrisk {

std::vector<std::size_t> CpmResult::critical_set() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < critical.size(); ++i)
    if (critical[i]) out.push_back(i);
  return out;
}

void batch_forward_backward(const ValidatedNetwork& network, const kernels::Table& k,
                            NodeRows<const double> durations, NodeRows<double> early_start,
                            NodeRows<double> early_finish, NodeRows<double> late_start,
                            NodeRows<double> late_finish, NodeRows<std::uint8_t> critical,
                            double eps) {
  const std::size_t n = network.size();

  for (std::size_t i = 0; i < n; ++i) {
    auto es = early_start.row(i);
    const auto& preds = network.preds(i);
    if (preds.empty()) {
      std::fill(es.begin(), es.end(), 0.0);
    } else {
      std::copy_n(early_finish.row(preds.front()).begin(), es.size(), es.begin());
      for (std::size_t p = 1; p < preds.size(); ++p) k.max_into(es, early_finish.row(preds[p]));
    }
    k.add(early_finish.row(i), es, durations.row(i));
  }

  for (std::size_t r = n; r-- > 0;) {
    auto lf = late_finish.row(r);
    const auto& succs = network.succs(r);
    if (succs.empty()) {
      std::copy_n(early_finish.row(r).begin(), lf.size(), lf.begin());
    } else {
      std::copy_n(late_start.row(succs.front()).begin(), lf.size(), lf.begin());
      for (std::size_t s = 1; s < succs.size(); ++s) k.min_into(lf, late_start.row(succs[s]));
    }
    k.sub(late_start.row(r), lf, durations.row(r));
    k.flag_within(critical.row(r), late_start.row(r), early_start.row(r), eps);
  }
}

CpmResult forward_backward(const ValidatedNetwork& network, std::span<const double> durations,
                           double eps) {
  const std::size_t n = network.size();
  CpmResult r;
  r.early_start.resize(n);
  r.early_finish.resize(n);
  r.late_start.resize(n);
  r.late_finish.resize(n);
  r.critical.resize(n);
  auto rows = [](auto& v) { return NodeRows<std::remove_reference_t<decltype(v[0])>>{v.data(), 1, 1}; };
  batch_forward_backward(network, kernels::scalar_table(),
                         NodeRows<const double>{durations.data(), 1, 1}, rows(r.early_start),
                         rows(r.early_finish), rows(r.late_start), rows(r.late_finish),
                         rows(r.critical), eps);
  r.total_float.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.total_float[i] = r.late_start[i] - r.early_start[i];
  r.duration = r.early_finish[network.sink()];
  return r;
}

CpmResult plan(const ValidatedNetwork& network, double eps) {
  const auto durations = network.expected_durations();
  CpmResult r = forward_backward(network, durations, eps);
  for (double v : network.planned_values()) r.budget += v;
  return r;
}

bool PathMatrix::contains(std::size_t path, std::size_t node) const {
  const auto& p = paths[path];
  return std::binary_search(p.begin(), p.end(), node);
}

PathMatrix enumerate_paths(const ValidatedNetwork& network, std::size_t cap) {
  PathMatrix out;
  out.node_count = network.size();
  std::vector<std::size_t> current{network.source()};
  std::vector<std::size_t> next_child{0};
  while (!current.empty()) {
    const std::size_t v = current.back();
    if (v == network.sink()) {
      if (out.paths.size() == cap)
        throw Error(ErrorCode::PathExplosion,
                    "more than " + std::to_string(cap) + " source-to-sink paths");
      out.paths.push_back(current);
      current.pop_back();
      next_child.pop_back();
      continue;
    }
    const auto& succs = network.succs(v);
    if (next_child.back() < succs.size()) {
      current.push_back(succs[next_child.back()++]);
      next_child.push_back(0);
    } else {
      current.pop_back();
      next_child.pop_back();
    }
  }
  // Node indices along a path increase (topological order), so rows are sorted.
  return out;
}

double PlannedValueCurve::value_at(double t) const {
  if (times.empty()) return 0.0;
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times.begin());
  const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

double planned_value_at(const ValidatedNetwork& network, const CpmResult& planned, double t) {
  const auto values = network.planned_values();
  double pv = 0.0;
  for (std::size_t i = 0; i < network.size(); ++i) {
    const double es = planned.early_start[i];
    const double ef = planned.early_finish[i];
    double f = 0.0;
    if (t >= ef)
      f = 1.0;
    else if (ef > es)
      f = std::clamp((t - es) / (ef - es), 0.0, 1.0);
    pv += values[i] * f;
  }
  return pv;
}

PlannedValueCurve planned_value_curve(const ValidatedNetwork& network, const CpmResult& planned,
                                      std::size_t grid_points) {
  if (grid_points < 2) throw Error(ErrorCode::ConfigError, "planned value grid needs >= 2 points");
  PlannedValueCurve pv;
  pv.duration = planned.duration;
  pv.budget = planned.budget;
  pv.times.resize(grid_points);
  pv.values.resize(grid_points);
  for (std::size_t j = 0; j < grid_points; ++j) {
    const double t = j + 1 == grid_points
                         ? planned.duration
                         : planned.duration * static_cast<double>(j) /
                               static_cast<double>(grid_points - 1);
    pv.times[j] = t;
    pv.values[j] = planned_value_at(network, planned, t);
  }
  // Monotone by construction; guard against rounding in the partial sums.
  for (std::size_t j = 1; j < grid_points; ++j)
    pv.values[j] = std::min(std::max(pv.values[j], pv.values[j - 1]), pv.budget);
  return pv;
}

double earned_schedule(const PlannedValueCurve& pv, double ev) {
  const double slack = 1e-12 * std::max(1.0, std::abs(pv.budget));
  if (!(ev >= -slack && ev <= pv.budget + slack))
    throw Error(ErrorCode::EvOutOfRange, "earned value " + format_number(ev) +
                                             " outside [0, " + format_number(pv.budget) + "]");
  if (ev <= 0.0) return 0.0;
  if (ev >= pv.budget) return pv.duration;
  const auto it = std::lower_bound(pv.values.begin(), pv.values.end(), ev);
  const std::size_t j = static_cast<std::size_t>(it - pv.values.begin());
  if (j == 0) return pv.times.front();
  const double v0 = pv.values[j - 1], v1 = pv.values[j];
  return pv.times[j - 1] + (ev - v0) / (v1 - v0) * (pv.times[j] - pv.times[j - 1]);
}

}  // namespace schedrisk
