#pragma once

#include <vector>

#include "schedrisk/control.hpp"
#include "schedrisk/cpm.hpp"
#include "schedrisk/csv.hpp"
#include "schedrisk/indices.hpp"
#include "schedrisk/montecarlo.hpp"
#include "schedrisk/stats.hpp"

namespace schedrisk {

/// Percentiles 5, 10, ..., 95.
std::vector<double> report_percentiles();

CsvTable cpm_table(const ValidatedNetwork& network, const CpmResult& cpm);
CsvTable paths_table(const ValidatedNetwork& network, const PathMatrix& paths);
CsvTable pv_table(const PlannedValueCurve& pv);
CsvTable percentile_table(const Ensemble& ensemble);
CsvTable runs_table(const Ensemble& ensemble);
CsvTable histogram_table(const HistogramTable& hist);
CsvTable risk_table(const Ensemble& ensemble);
CsvTable sensitivity_table(const SensitivityReport& report);
CsvTable baseline_table(const RiskBaseline& baseline);
CsvTable ari_table(const std::vector<ActivityRiskEntry>& ari);
CsvTable control_table(const ControlObservation& obs, const ControlIndices& idx);
CsvTable triad_table(const ControlObservation& obs, const TriadReport& report);
CsvTable forecast_table(const SevmForecast& forecast);
CsvTable neighbors_table(const SevmForecast& forecast);

}  // namespace schedrisk
