#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "schedrisk/montecarlo.hpp"

namespace schedrisk {

enum class Correlation { pearson, spearman };

struct ActivitySensitivity {
  std::size_t node = 0;
  std::string id;
  std::string name;
  double criticality = 0.0;  // CI
  double cruciality = 0.0;   // CrI
  double sensitivity = 0.0;  // SSI
  double sigma = 0.0;        // sd of the node duration
};

struct SensitivityReport {
  std::vector<ActivitySensitivity> rows;  // every node except the two dummies
  double sigma_duration = 0.0;            // sd of project duration
};

/// CI per node (indexed by topological node index): share of runs in which
/// the node's total float is within tolerance.
std::vector<double> criticality_index(const Ensemble& ensemble);

/// CrI per node: |corr(d_i, PD)|, 0 when either variance is 0.
std::vector<double> cruciality_index(const Ensemble& ensemble,
                                     Correlation method = Correlation::pearson);

/// SSI per node: CI * sigma_i / sigma_PD. Throws DegenerateProject when the
/// project duration has no spread.
std::vector<double> schedule_sensitivity_index(const Ensemble& ensemble);

SensitivityReport sensitivity_report(const Ensemble& ensemble,
                                     Correlation method = Correlation::pearson);

enum class Dimension { cost, duration };

/// Percentile p of the simulated dimension minus its planned value (BAC or PD).
double contingency_reserve(const Ensemble& ensemble, double p, Dimension dimension);

}  // namespace schedrisk
