#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "schedrisk/cpm.hpp"
#include "schedrisk/montecarlo.hpp"

namespace schedrisk {

/// Schedule and cost risk baselines: the project standard deviation released
/// as planned work progresses. Each node holds a share of the variance
/// (max(0, cov(node, project)), normalized) that accrues linearly over its
/// planned window, so SRB(t)^2 = sigma_PD^2 * sum_i w_i * progress_i(t).
struct RiskBaseline {
  std::vector<double> times;  // uniform grid over [0, PD0]
  std::vector<double> srb;
  std::vector<double> crb;
  std::vector<double> schedule_shares;  // per node, sums to 1 when sigma_PD > 0
  std::vector<double> cost_shares;
  std::vector<double> window_start;  // planned ES per node
  std::vector<double> window_finish;  // planned EF per node
  double sigma_duration = 0.0;
  double sigma_cost = 0.0;
  double planned_duration = 0.0;

  double srb_at(double t) const;
  double crb_at(double t) const;

  /// Baseline with no risk budget (deterministic project).
  static RiskBaseline zero(const CpmResult& planned, std::size_t grid_points);
};

inline constexpr std::size_t kDefaultBaselineGrid = 101;

/// Throws DegenerateProject when neither duration nor cost varies.
RiskBaseline risk_baselines(const Ensemble& ensemble,
                            std::size_t grid_points = kDefaultBaselineGrid);

struct ActivityRiskEntry {
  std::size_t node = 0;
  std::string id;
  std::string name;
  double percent = 0.0;  // ARI, share of schedule variance in %
};

/// Nodes with a positive schedule share, highest contribution first (ties by
/// topological order).
std::vector<ActivityRiskEntry> activity_risk_index(const RiskBaseline& baseline,
                                                   const ValidatedNetwork& network);

struct ControlObservation {
  double time = 0.0;
  double actual_cost = 0.0;
  double earned_value = 0.0;
};

/// Throws BadObservation / EvOutOfRange for inadmissible observations.
void check_observation(const ControlObservation& obs, double budget);

struct ControlIndices {
  double earned_schedule = 0.0;
  double schedule_delay = 0.0;  // D_s = t - ES(EV); negative means ahead
  double cost_deviation = 0.0;  // D_c = AC - EV
  double srb = 0.0;
  double crb = 0.0;
  double scoi = 0.0;  // SRB(t) - D_s, positive = delay within the risk budget
  double ccoi = 0.0;  // CRB(t) - D_c
};

ControlIndices control_indices(const ControlObservation& obs, const RiskBaseline& baseline,
                               const PlannedValueCurve& pv);

/// Positions of every run when it had earned a fraction x of BAC.
struct CrossSection {
  double fraction = 0.0;
  std::vector<double> times;
  std::vector<double> costs;
};

/// T_k(x) = inf{t : ev_k(t) >= x * BAC} on the exact run trajectory and
/// C_k(x) = cost_k(T_k(x)); x >= 1 gives the run endpoints (PD_k, C_k).
CrossSection cross_section(const Ensemble& ensemble, double x);

enum class ScheduleStatus { ahead, on, delayed };
enum class CostStatus { under, on, over };

std::string_view to_string(ScheduleStatus s);
std::string_view to_string(CostStatus s);

inline constexpr double kDefaultTriadBand = 5.0;

struct TriadReport {
  double fraction = 0.0;
  double schedule_percentile = 0.0;
  double cost_percentile = 0.0;
  ScheduleStatus schedule_status = ScheduleStatus::on;
  CostStatus cost_status = CostStatus::on;
};

/// Places the observation within the cross-section of simulated runs at the
/// same completion fraction. Throws EvZero when EV = 0.
TriadReport triad(const ControlObservation& obs, const Ensemble& ensemble,
                  double band = kDefaultTriadBand);

enum class Estimator { neighbor_mean, linear };

struct SevmOptions {
  std::size_t neighbors = 0;  // 0: default_neighbors(runs)
  std::vector<double> interval_percentiles{5.0, 95.0};
  Estimator estimator = Estimator::neighbor_mean;
};

std::size_t default_neighbors(std::size_t runs);

struct SevmNeighbor {
  std::size_t run = 0;
  double distance = 0.0;
  double control_time = 0.0;  // T_k(x)
  double control_cost = 0.0;  // C_k(x)
  double final_duration = 0.0;
  double final_cost = 0.0;
  bool late = false;  // final_duration > planned duration
};

struct SevmInterval {
  double percentile = 0.0;
  double duration = 0.0;
  double cost = 0.0;
};

struct SevmForecast {
  double fraction = 0.0;
  double duration_estimate = 0.0;  // EAC_t
  double cost_estimate = 0.0;      // EAC_c
  std::vector<SevmInterval> intervals;
  double probability_late = 0.0;
  double probability_overrun = 0.0;
  std::vector<SevmNeighbor> neighbors;  // ascending run index
};

/// k-nearest-neighbour forecast on the control cross-section, with per-axis
/// standardized distance. Throws EvZero or KTooLarge.
SevmForecast sevm_forecast(const ControlObservation& obs, const Ensemble& ensemble,
                           const SevmOptions& options = {});

}  // namespace schedrisk
