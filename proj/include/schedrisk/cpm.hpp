#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "schedrisk/kernels.hpp"
#include "schedrisk/model.hpp"

namespace schedrisk {

inline constexpr double kCriticalityTolerance = 1e-9;
inline constexpr std::size_t kDefaultPathCap = 1'000'000;

struct CpmResult {
  std::vector<double> early_start, early_finish, late_start, late_finish, total_float;
  std::vector<std::uint8_t> critical;
  double duration = 0.0;  // PD
  double budget = 0.0;    // BAC

  std::vector<std::size_t> critical_set() const;
};

/// Row-strided view over node-major storage: row(i) is node i's values for a
/// contiguous block of runs.
template <class T>
struct NodeRows {
  T* base = nullptr;
  std::size_t stride = 0;
  std::size_t width = 0;

  std::span<T> row(std::size_t node) const { return {base + node * stride, width}; }
};

/// Forward and backward pass for `durations.width` independent duration
/// vectors at once. `critical` receives total_float <= eps per node and lane.
void batch_forward_backward(const ValidatedNetwork& network, const kernels::Table& k,
                            NodeRows<const double> durations, NodeRows<double> early_start,
                            NodeRows<double> early_finish, NodeRows<double> late_start,
                            NodeRows<double> late_finish, NodeRows<std::uint8_t> critical,
                            double eps = kCriticalityTolerance);

/// CPM on one duration vector (indexed by topological node index). `budget`
/// is left at 0; see plan().
CpmResult forward_backward(const ValidatedNetwork& network, std::span<const double> durations,
                           double eps = kCriticalityTolerance);

/// Planned schedule: expected durations of every node (risk nodes at
/// p * mean(impact)) and BAC = sum of planned values.
CpmResult plan(const ValidatedNetwork& network, double eps = kCriticalityTolerance);

/// Simple source-to-sink paths, one row per path, in lexicographic order of
/// topological indices.
struct PathMatrix {
  std::size_t node_count = 0;
  std::vector<std::vector<std::size_t>> paths;

  bool contains(std::size_t path, std::size_t node) const;
  std::size_t size() const { return paths.size(); }
};

PathMatrix enumerate_paths(const ValidatedNetwork& network, std::size_t cap = kDefaultPathCap);

struct PlannedValueCurve {
  std::vector<double> times;
  std::vector<double> values;
  double duration = 0.0;
  double budget = 0.0;

  /// Linear interpolation on the grid; constant beyond the ends.
  double value_at(double t) const;
};

inline constexpr std::size_t kDefaultPvGrid = 101;

/// Cumulative planned value: each node accrues its planned value uniformly
/// over [ES, EF] (a step at ES when the window is empty).
PlannedValueCurve planned_value_curve(const ValidatedNetwork& network, const CpmResult& planned,
                                      std::size_t grid_points = kDefaultPvGrid);

/// Exact planned value at t from the node windows (no grid).
double planned_value_at(const ValidatedNetwork& network, const CpmResult& planned, double t);

/// inf{t : PV(t) >= ev} on the interpolated grid; throws EvOutOfRange unless
/// 0 <= ev <= BAC.
double earned_schedule(const PlannedValueCurve& pv, double ev);

}  // namespace schedrisk
