#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schedrisk/cpm.hpp"
#include "schedrisk/kernels.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/rng.hpp"

namespace schedrisk {

/// One draw from `dist`. Uniform, triangular and discrete laws use the
/// inverse CDF; normal draws are resampled until non-negative.
double sample(const Distribution& dist, Stream& stream);

inline constexpr std::size_t kDefaultRuns = 20'000;
inline constexpr std::size_t kDefaultTrajectoryGrid = 51;

struct SimConfig {
  std::size_t runs = kDefaultRuns;
  std::uint64_t seed = 42;
  std::size_t trajectory_grid = kDefaultTrajectoryGrid;
  std::optional<double> horizon;  // default 1.5 * planned duration
  std::size_t threads = 0;        // 0: hardware concurrency
  bool store_trajectories = true;
  double criticality_tolerance = kCriticalityTolerance;
  std::optional<kernels::Isa> isa;  // default: kernels::active()
};

/// Random-number slots within an entity's substream.
enum class Slot : std::uint64_t { duration = 0, gate = 1, impact = 2 };

/// Outcome of a risk (gate and realized amount) in every run.
struct RiskTrace {
  std::string id;
  RiskKind kind = RiskKind::duration;
  std::size_t node = 0;                 // risk node, or target node for cost risks
  std::vector<std::uint8_t> active;     // per run
  std::vector<double> amount;           // realized impact per run (0 when inactive)
};

/// Results of a simulation. Per-node arrays are node-major: node i's values
/// for all runs are contiguous.
class Ensemble {
 public:
  std::size_t runs() const { return runs_; }
  std::size_t node_count() const { return network_.size(); }
  const ValidatedNetwork& network() const { return network_; }
  const CpmResult& planned() const { return planned_; }
  double planned_duration() const { return planned_.duration; }
  double budget() const { return planned_.budget; }
  std::span<const double> planned_values() const { return planned_values_; }

  std::span<const double> durations(std::size_t node) const { return row(durations_, node); }
  std::span<const double> starts(std::size_t node) const { return row(starts_, node); }
  /// Actual cost of the node in each run, including cost risks attached to it.
  std::span<const double> node_costs(std::size_t node) const { return row(node_costs_, node); }
  std::span<const std::uint8_t> critical(std::size_t node) const {
    return {critical_.data() + node * runs_, runs_};
  }
  std::span<const double> project_durations() const { return project_durations_; }
  std::span<const double> project_costs() const { return project_costs_; }
  const std::vector<RiskTrace>& risks() const { return risks_; }

  /// Exact run trajectories: cumulative actual cost and earned value at t.
  double cost_at(std::size_t run, double t) const;
  double earned_value_at(std::size_t run, double t) const;

  bool has_trajectories() const { return !trajectory_times_.empty(); }
  std::span<const double> trajectory_times() const { return trajectory_times_; }
  /// Values of all runs at grid point j.
  std::span<const double> cost_trajectory(std::size_t point) const {
    return row(cost_trajectory_, point);
  }
  std::span<const double> earned_value_trajectory(std::size_t point) const {
    return row(ev_trajectory_, point);
  }

 private:
  friend Ensemble run_ensemble(const ValidatedNetwork&, const SimConfig&);

  explicit Ensemble(ValidatedNetwork network) : network_(std::move(network)) {}

  std::span<const double> row(const std::vector<double>& v, std::size_t i) const {
    return {v.data() + i * runs_, runs_};
  }

  ValidatedNetwork network_;
  CpmResult planned_;
  std::vector<double> planned_values_;
  std::size_t runs_ = 0;
  std::vector<double> durations_, starts_, node_costs_;
  std::vector<std::uint8_t> critical_;
  std::vector<double> project_durations_, project_costs_;
  std::vector<RiskTrace> risks_;
  std::vector<double> trajectory_times_, cost_trajectory_, ev_trajectory_;
};

/// Generates `cfg.runs` independent runs. Run k draws only from substreams
/// keyed by (seed, k, entity id, slot), so the result is bit-identical for any
/// thread count. Throws ConfigError on invalid settings.
Ensemble run_ensemble(const ValidatedNetwork& network, const SimConfig& cfg);

}  // namespace schedrisk
