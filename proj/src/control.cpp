#include "schedrisk/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "schedrisk/error.hpp"
#include "schedrisk/stats.hpp"

namespace schedrisk {

namespace {

double window_progress(double t, double start, double finish) {
  if (t >= finish) return 1.0;
  if (!(finish > start)) return 0.0;
  return std::clamp((t - start) / (finish - start), 0.0, 1.0);
}

double released_sd(const RiskBaseline& b, const std::vector<double>& shares, double sigma,
                   double t) {
  if (!(sigma > 0.0)) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i)
    acc += shares[i] * window_progress(t, b.window_start[i], b.window_finish[i]);
  return std::sqrt(sigma * sigma * acc);
}

std::vector<double> uniform_grid(double end, std::size_t points) {
  std::vector<double> times(points);
  const double step = end / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) times[j] = step * static_cast<double>(j);
  times.back() = end;
  return times;
}

// max(0, cov(x_i, total)) normalized to sum 1; all zero when no share is positive.
std::vector<double> variance_shares(std::size_t n, std::span<const double> total,
                                    const auto& column) {
  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::max(0.0, sample_covariance(column(i), total));
    sum += w[i];
  }
  if (sum > 0.0)
    for (auto& v : w) v /= sum;
  return w;
}

double fraction_of(const ControlObservation& obs, double budget) {
  if (!(obs.earned_value > 0.0) || !(budget > 0.0))
    throw Error(ErrorCode::EvZero, "earned value is 0, completion fraction undefined");
  return std::min(obs.earned_value / budget, 1.0);
}

}  // namespace

double RiskBaseline::srb_at(double t) const {
  return released_sd(*this, schedule_shares, sigma_duration, t);
}

double RiskBaseline::crb_at(double t) const {
  return released_sd(*this, cost_shares, sigma_cost, t);
}

RiskBaseline RiskBaseline::zero(const CpmResult& planned, std::size_t grid_points) {
  if (grid_points < 2) throw Error(ErrorCode::ConfigError, "baseline grid needs >= 2 points");
  RiskBaseline b;
  const std::size_t n = planned.early_start.size();
  b.planned_duration = planned.duration;
  b.times = uniform_grid(planned.duration, grid_points);
  b.srb.assign(grid_points, 0.0);
  b.crb.assign(grid_points, 0.0);
  b.schedule_shares.assign(n, 0.0);
  b.cost_shares.assign(n, 0.0);
  b.window_start = planned.early_start;
  b.window_finish = planned.early_finish;
  return b;
}

RiskBaseline risk_baselines(const Ensemble& ensemble, std::size_t grid_points) {
  RiskBaseline b = RiskBaseline::zero(ensemble.planned(), grid_points);
  b.sigma_duration = sample_sd(ensemble.project_durations());
  b.sigma_cost = sample_sd(ensemble.project_costs());
  if (!(b.sigma_duration > 0.0) && !(b.sigma_cost > 0.0))
    throw Error(ErrorCode::DegenerateProject, "neither duration nor cost varies across runs");

  const std::size_t n = ensemble.node_count();
  if (b.sigma_duration > 0.0)
    b.schedule_shares = variance_shares(n, ensemble.project_durations(),
                                        [&](std::size_t i) { return ensemble.durations(i); });
  if (b.sigma_cost > 0.0)
    b.cost_shares = variance_shares(n, ensemble.project_costs(),
                                    [&](std::size_t i) { return ensemble.node_costs(i); });

  for (std::size_t j = 0; j < b.times.size(); ++j) {
    b.srb[j] = b.srb_at(b.times[j]);
    b.crb[j] = b.crb_at(b.times[j]);
  }
  return b;
}

std::vector<ActivityRiskEntry> activity_risk_index(const RiskBaseline& baseline,
                                                   const ValidatedNetwork& network) {
  std::vector<ActivityRiskEntry> out;
  for (std::size_t i = 0; i < baseline.schedule_shares.size(); ++i) {
    const double w = baseline.schedule_shares[i];
    if (!(w > 0.0)) continue;
    out.push_back({i, network.node(i).id, network.node(i).name, 100.0 * w});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.percent > b.percent; });
  return out;
}

void check_observation(const ControlObservation& obs, double budget) {
  if (!std::isfinite(obs.time) || obs.time < 0.0)
    throw Error(ErrorCode::BadObservation, "control time must be >= 0");
  if (!std::isfinite(obs.actual_cost) || obs.actual_cost < 0.0)
    throw Error(ErrorCode::BadObservation, "actual cost must be >= 0");
  const double slack = 1e-12 * std::max(1.0, std::abs(budget));
  if (!std::isfinite(obs.earned_value) || obs.earned_value < 0.0 ||
      obs.earned_value > budget + slack)
    throw Error(ErrorCode::EvOutOfRange,
                "earned value " + format_number(obs.earned_value) + " outside [0, " +
                    format_number(budget) + "]");
}

ControlIndices control_indices(const ControlObservation& obs, const RiskBaseline& baseline,
                               const PlannedValueCurve& pv) {
  check_observation(obs, pv.budget);
  ControlIndices c;
  c.earned_schedule = earned_schedule(pv, std::min(obs.earned_value, pv.budget));
  c.schedule_delay = obs.time - c.earned_schedule;
  c.cost_deviation = obs.actual_cost - obs.earned_value;
  c.srb = baseline.srb_at(obs.time);
  c.crb = baseline.crb_at(obs.time);
  c.scoi = c.srb - c.schedule_delay;
  c.ccoi = c.crb - c.cost_deviation;
  return c;
}

CrossSection cross_section(const Ensemble& ensemble, double x) {
  CrossSection cs;
  cs.fraction = x;
  const std::size_t runs = ensemble.runs();
  const std::size_t n = ensemble.node_count();
  cs.times.resize(runs);
  cs.costs.resize(runs);
  if (x >= 1.0) {
    const auto pd = ensemble.project_durations();
    const auto c = ensemble.project_costs();
    cs.times.assign(pd.begin(), pd.end());
    cs.costs.assign(c.begin(), c.end());
    return cs;
  }
  const double target = std::max(x, 0.0) * ensemble.budget();
  std::vector<double> breaks;
  breaks.reserve(2 * n + 1);
  for (std::size_t k = 0; k < runs; ++k) {
    breaks.assign(1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = ensemble.starts(i)[k];
      breaks.push_back(s);
      breaks.push_back(s + ensemble.durations(i)[k]);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    // ev is non-decreasing and right-continuous: find the first breakpoint
    // that reaches the target, then solve on the linear piece before it.
    const auto ev = [&](double t) { return ensemble.earned_value_at(k, t); };
    const auto it = std::partition_point(breaks.begin(), breaks.end(),
                                         [&](double b) { return ev(b) < target; });
    double t;
    if (it == breaks.begin()) {
      t = breaks.front();
    } else if (it == breaks.end()) {
      t = breaks.back();
    } else {
      const double b0 = *(it - 1);
      const double b1 = *it;
      const double v0 = ev(b0);
      const double left = 2.0 * ev(0.5 * (b0 + b1)) - v0;  // left limit at b1
      if (left >= target && left > v0)
        t = std::min(b0 + (target - v0) / (left - v0) * (b1 - b0), b1);
      else
        t = b1;
    }
    cs.times[k] = t;
    cs.costs[k] = ensemble.cost_at(k, t);
  }
  return cs;
}

std::string_view to_string(ScheduleStatus s) {
  switch (s) {
    case ScheduleStatus::ahead: return "ahead";
    case ScheduleStatus::on: return "on";
    case ScheduleStatus::delayed: return "delayed";
  }
  return "on";
}

std::string_view to_string(CostStatus s) {
  switch (s) {
    case CostStatus::under: return "under";
    case CostStatus::on: return "on";
    case CostStatus::over: return "over";
  }
  return "on";
}

TriadReport triad(const ControlObservation& obs, const Ensemble& ensemble, double band) {
  check_observation(obs, ensemble.budget());
  if (!(band >= 0.0) || band > 50.0)
    throw Error(ErrorCode::ConfigError, "triad band must lie in [0, 50]");
  TriadReport r;
  r.fraction = fraction_of(obs, ensemble.budget());
  const CrossSection cs = cross_section(ensemble, r.fraction);
  r.schedule_percentile = 100.0 * midrank_cdf(cs.times, obs.time);
  r.cost_percentile = 100.0 * midrank_cdf(cs.costs, obs.actual_cost);
  if (r.schedule_percentile < 50.0 - band)
    r.schedule_status = ScheduleStatus::ahead;
  else if (r.schedule_percentile > 50.0 + band)
    r.schedule_status = ScheduleStatus::delayed;
  if (r.cost_percentile < 50.0 - band)
    r.cost_status = CostStatus::under;
  else if (r.cost_percentile > 50.0 + band)
    r.cost_status = CostStatus::over;
  return r;
}

std::size_t default_neighbors(std::size_t runs) {
  const auto five_pct = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(runs)));
  return std::min<std::size_t>(500, std::max<std::size_t>(1, five_pct));
}

namespace {

// Least squares of y on centered (u, v) evaluated at (u0, v0); axes without
// spread drop out, and a singular system falls back to the mean.
double linear_estimate(std::span<const double> y, std::span<const double> u,
                       std::span<const double> v, double u0, double v0) {
  const double my = sample_mean(y);
  if (y.size() < 3) return my;
  const double mu = sample_mean(u);
  const double mv = sample_mean(v);
  double suu = 0, svv = 0, suv = 0, suy = 0, svy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double du = u[i] - mu, dv = v[i] - mv, dy = y[i] - my;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
    suy += du * dy;
    svy += dv * dy;
  }
  const bool use_u = suu > 0.0, use_v = svv > 0.0;
  if (use_u && use_v) {
    const double det = suu * svv - suv * suv;
    if (det > 1e-12 * suu * svv) {
      const double bu = (suy * svv - svy * suv) / det;
      const double bv = (svy * suu - suy * suv) / det;
      return my + bu * (u0 - mu) + bv * (v0 - mv);
    }
    return my + suy / suu * (u0 - mu);
  }
  if (use_u) return my + suy / suu * (u0 - mu);
  if (use_v) return my + svy / svv * (v0 - mv);
  return my;
}

}  // namespace

SevmForecast sevm_forecast(const ControlObservation& obs, const Ensemble& ensemble,
                           const SevmOptions& options) {
  check_observation(obs, ensemble.budget());
  const std::size_t runs = ensemble.runs();
  const std::size_t k = options.neighbors ? options.neighbors : default_neighbors(runs);
  if (k > runs)
    throw Error(ErrorCode::KTooLarge,
                std::to_string(k) + " neighbors requested from " + std::to_string(runs) + " runs");
  for (double p : options.interval_percentiles)
    if (!(p >= 0.0 && p <= 100.0))
      throw Error(ErrorCode::ConfigError, "interval percentile must lie in [0, 100]");

  SevmForecast f;
  f.fraction = fraction_of(obs, ensemble.budget());
  const CrossSection cs = cross_section(ensemble, f.fraction);
  const double st = sample_sd(cs.times);
  const double sc = sample_sd(cs.costs);

  std::vector<std::pair<double, std::size_t>> dist(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    double d2 = 0.0;
    if (st > 0.0) d2 += std::pow((cs.times[r] - obs.time) / st, 2);
    if (sc > 0.0) d2 += std::pow((cs.costs[r] - obs.actual_cost) / sc, 2);
    dist[r] = {std::sqrt(d2), r};
  }
  if (k < runs) std::nth_element(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
  dist.resize(k);
  std::sort(dist.begin(), dist.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });

  const auto pd = ensemble.project_durations();
  const auto cost = ensemble.project_costs();
  const double pd0 = ensemble.planned_duration();
  const double bac = ensemble.budget();
  std::vector<double> nd(k), nc(k), nt(k), nac(k);
  std::size_t late = 0, overrun = 0;
  f.neighbors.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t r = dist[j].second;
    nd[j] = pd[r];
    nc[j] = cost[r];
    nt[j] = cs.times[r];
    nac[j] = cs.costs[r];
    const bool is_late = pd[r] > pd0;
    late += is_late;
    overrun += cost[r] > bac;
    f.neighbors.push_back({r, dist[j].first, cs.times[r], cs.costs[r], pd[r], cost[r], is_late});
  }

  if (options.estimator == Estimator::linear) {
    f.duration_estimate = linear_estimate(nd, nt, nac, obs.time, obs.actual_cost);
    f.cost_estimate = linear_estimate(nc, nt, nac, obs.time, obs.actual_cost);
  } else {
    f.duration_estimate = sample_mean(nd);
    f.cost_estimate = sample_mean(nc);
  }
  std::sort(nd.begin(), nd.end());
  std::sort(nc.begin(), nc.end());
  for (double p : options.interval_percentiles)
    f.intervals.push_back({p, sorted_percentile(nd, p), sorted_percentile(nc, p)});
  f.probability_late = static_cast<double>(late) / static_cast<double>(k);
  f.probability_overrun = static_cast<double>(overrun) / static_cast<double>(k);
  return f;
}

}  // namespace schedrisk
