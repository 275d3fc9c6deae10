#include "schedrisk/reports.hpp"

#include <string>

namespace schedrisk {

namespace {

std::string num(double v) { return csv_number(v); }

std::string count(std::size_t v) { return std::to_string(v); }

}  // namespace

std::vector<double> report_percentiles() {
  std::vector<double> ps;
  for (int p = 5; p <= 95; p += 5) ps.push_back(p);
  return ps;
}

CsvTable cpm_table(const ValidatedNetwork& network, const CpmResult& cpm) {
  CsvTable t{{"id", "name", "kind", "expected_duration", "planned_value", "es", "ef", "ls", "lf",
              "total_float", "critical"},
             {}};
  const auto d = network.expected_durations();
  const auto pv = network.planned_values();
  for (std::size_t i = 0; i < network.size(); ++i) {
    const auto& n = network.node(i);
    t.add_row({n.id, n.name, n.kind == NodeKind::activity ? "activity" : "duration_risk",
               num(d[i]), num(pv[i]), num(cpm.early_start[i]), num(cpm.early_finish[i]),
               num(cpm.late_start[i]), num(cpm.late_finish[i]), num(cpm.total_float[i]),
               cpm.critical[i] ? "1" : "0"});
  }
  return t;
}

CsvTable paths_table(const ValidatedNetwork& network, const PathMatrix& paths) {
  CsvTable t{{"path", "length"}, {}};
  for (const auto& n : network.nodes()) t.header.push_back(n.id);
  const auto d = network.expected_durations();
  for (std::size_t p = 0; p < paths.size(); ++p) {
    double length = 0.0;
    for (auto i : paths.paths[p]) length += d[i];
    std::vector<std::string> row{count(p + 1), num(length)};
    for (std::size_t i = 0; i < network.size(); ++i) row.push_back(paths.contains(p, i) ? "1" : "0");
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable pv_table(const PlannedValueCurve& pv) {
  CsvTable t{{"t", "pv"}, {}};
  for (std::size_t j = 0; j < pv.times.size(); ++j) t.add_row({num(pv.times[j]), num(pv.values[j])});
  return t;
}

CsvTable percentile_table(const Ensemble& ensemble) {
  CsvTable t{{"percentile", "duration", "cost"}, {}};
  for (double p : report_percentiles())
    t.add_row({num(p), num(empirical_percentile(ensemble.project_durations(), p)),
               num(empirical_percentile(ensemble.project_costs(), p))});
  return t;
}

CsvTable runs_table(const Ensemble& ensemble) {
  CsvTable t{{"run", "duration", "cost"}, {}};
  const auto pd = ensemble.project_durations();
  const auto c = ensemble.project_costs();
  for (std::size_t k = 0; k < ensemble.runs(); ++k) t.add_row({count(k), num(pd[k]), num(c[k])});
  return t;
}

CsvTable histogram_table(const HistogramTable& hist) {
  CsvTable t{{"bin_lower", "bin_upper", "pdf", "cdf"}, {}};
  for (std::size_t b = 0; b < hist.pdf.size(); ++b)
    t.add_row({num(hist.bin_lower[b]), num(hist.bin_upper[b]), num(hist.pdf[b]), num(hist.cdf[b])});
  return t;
}

CsvTable risk_table(const Ensemble& ensemble) {
  CsvTable t{{"id", "kind", "node", "activation_rate", "mean_amount"}, {}};
  for (const auto& r : ensemble.risks()) {
    std::size_t on = 0;
    double total = 0.0;
    for (std::size_t k = 0; k < r.active.size(); ++k) {
      on += r.active[k];
      total += r.amount[k];
    }
    const double n = static_cast<double>(ensemble.runs());
    t.add_row({r.id, r.kind == RiskKind::duration ? "duration" : "cost",
               ensemble.network().node(r.node).id, num(static_cast<double>(on) / n),
               num(total / n)});
  }
  return t;
}

CsvTable sensitivity_table(const SensitivityReport& report) {
  CsvTable t{{"id", "name", "CI", "CrI", "SSI", "sigma_i"}, {}};
  for (const auto& r : report.rows)
    t.add_row({r.id, r.name, num(r.criticality), num(r.cruciality), num(r.sensitivity),
               num(r.sigma)});
  return t;
}

CsvTable baseline_table(const RiskBaseline& baseline) {
  CsvTable t{{"t", "srb", "crb"}, {}};
  for (std::size_t j = 0; j < baseline.times.size(); ++j)
    t.add_row({num(baseline.times[j]), num(baseline.srb[j]), num(baseline.crb[j])});
  return t;
}

CsvTable ari_table(const std::vector<ActivityRiskEntry>& ari) {
  CsvTable t{{"rank", "id", "name", "ari_percent"}, {}};
  for (std::size_t r = 0; r < ari.size(); ++r)
    t.add_row({count(r + 1), ari[r].id, ari[r].name, num(ari[r].percent)});
  return t;
}

CsvTable control_table(const ControlObservation& obs, const ControlIndices& idx) {
  return {{"t", "ev", "ac", "earned_schedule", "schedule_delay", "srb", "scoi", "cost_deviation",
           "crb", "ccoi"},
          {{num(obs.time), num(obs.earned_value), num(obs.actual_cost), num(idx.earned_schedule),
            num(idx.schedule_delay), num(idx.srb), num(idx.scoi), num(idx.cost_deviation),
            num(idx.crb), num(idx.ccoi)}}};
}

CsvTable triad_table(const ControlObservation& obs, const TriadReport& report) {
  return {{"t", "ev", "ac", "fraction", "schedule_percentile", "schedule_status", "cost_percentile",
           "cost_status"},
          {{num(obs.time), num(obs.earned_value), num(obs.actual_cost), num(report.fraction),
            num(report.schedule_percentile), std::string(to_string(report.schedule_status)),
            num(report.cost_percentile), std::string(to_string(report.cost_status))}}};
}

CsvTable forecast_table(const SevmForecast& f) {
  CsvTable t{{"quantity", "duration", "cost"}, {}};
  t.add_row({"estimate", num(f.duration_estimate), num(f.cost_estimate)});
  for (const auto& iv : f.intervals)
    t.add_row({"p" + num(iv.percentile), num(iv.duration), num(iv.cost)});
  t.add_row({"probability_exceeding_plan", num(f.probability_late), num(f.probability_overrun)});
  t.add_row({"neighbors", count(f.neighbors.size()), count(f.neighbors.size())});
  return t;
}

CsvTable neighbors_table(const SevmForecast& f) {
  CsvTable t{{"run", "distance", "control_time", "control_cost", "final_duration", "final_cost",
              "label", "color"},
             {}};
  for (const auto& n : f.neighbors)
    t.add_row({count(n.run), num(n.distance), num(n.control_time), num(n.control_cost),
               num(n.final_duration), num(n.final_cost), n.late ? "late" : "early",
               n.late ? "red" : "blue"});
  return t;
}

}  // namespace schedrisk
