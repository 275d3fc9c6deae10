#include "schedrisk/indices.hpp"

#include <algorithm>
#include <cmath>

#include "schedrisk/error.hpp"
#include "schedrisk/stats.hpp"

namespace schedrisk {

std::vector<double> criticality_index(const Ensemble& ensemble) {
  std::vector<double> ci(ensemble.node_count());
  for (std::size_t i = 0; i < ci.size(); ++i) {
    const auto flags = ensemble.critical(i);
    std::size_t hits = 0;
    for (auto f : flags) hits += f;
    ci[i] = static_cast<double>(hits) / static_cast<double>(ensemble.runs());
  }
  return ci;
}

std::vector<double> cruciality_index(const Ensemble& ensemble, Correlation method) {
  std::vector<double> cri(ensemble.node_count(), 0.0);
  if (ensemble.runs() < 2) return cri;
  const auto pd = ensemble.project_durations();
  for (std::size_t i = 0; i < cri.size(); ++i) {
    const auto d = ensemble.durations(i);
    const double r = method == Correlation::pearson ? pearson(d, pd) : spearman(d, pd);
    cri[i] = std::abs(r);
  }
  return cri;
}

namespace {

std::vector<double> ssi_from(const Ensemble& ensemble, const std::vector<double>& ci,
                             double sigma_pd) {
  std::vector<double> ssi(ensemble.node_count(), 0.0);
  for (std::size_t i = 0; i < ssi.size(); ++i) {
    const double sigma_i = sample_sd(ensemble.durations(i));
    ssi[i] = ci[i] * sigma_i / sigma_pd;
  }
  return ssi;
}

}  // namespace

std::vector<double> schedule_sensitivity_index(const Ensemble& ensemble) {
  const double sigma_pd = sample_sd(ensemble.project_durations());
  if (!(sigma_pd > 0.0))
    throw Error(ErrorCode::DegenerateProject, "project duration has zero variance");
  return ssi_from(ensemble, criticality_index(ensemble), sigma_pd);
}

SensitivityReport sensitivity_report(const Ensemble& ensemble, Correlation method) {
  SensitivityReport report;
  report.sigma_duration = sample_sd(ensemble.project_durations());
  const auto ci = criticality_index(ensemble);
  const auto cri = cruciality_index(ensemble, method);
  const auto ssi = report.sigma_duration > 0.0
                       ? ssi_from(ensemble, ci, report.sigma_duration)
                       : std::vector<double>(ensemble.node_count(), 0.0);
  const auto& net = ensemble.network();
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.is_dummy(i)) continue;
    report.rows.push_back({i, net.node(i).id, net.node(i).name, ci[i], cri[i], ssi[i],
                           sample_sd(ensemble.durations(i))});
  }
  return report;
}

double contingency_reserve(const Ensemble& ensemble, double p, Dimension dimension) {
  if (dimension == Dimension::cost)
    return empirical_percentile(ensemble.project_costs(), p) - ensemble.budget();
  return empirical_percentile(ensemble.project_durations(), p) - ensemble.planned_duration();
}

}  // namespace schedrisk
