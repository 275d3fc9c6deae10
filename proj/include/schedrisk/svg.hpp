#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schedrisk/control.hpp"
#include "schedrisk/cpm.hpp"
#include "schedrisk/indices.hpp"
#include "schedrisk/stats.hpp"

namespace schedrisk {

enum class PlotKind { pv, pdfcdf, scatter, ci_bars, srb_crb, triad, sevm };

std::optional<PlotKind> plot_kind_from(std::string_view name);
std::string_view to_string(PlotKind kind);

enum class Mark { line, step, points, bars };

/// One data series. Bars span [x[i], x_end[i]] from 0 to y[i].
struct Series {
  std::string label;
  Mark mark = Mark::line;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> x_end;
  bool right_axis = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string y2_label;                 // right axis, when a series uses it
  std::vector<std::string> categories;  // x tick labels at 0, 1, ... when set
  std::vector<Series> series;
  std::vector<Series> top_marginal;    // histograms over the x axis
  std::vector<Series> right_marginal;  // histograms over the y axis (x = value, y = mass)
};

/// Standalone SVG document. Every series is one <g class="series"> element
/// whose data-x / data-y attributes hold the plotted values (when there are at
/// most kMaxDataAttr of them). Throws ShapeMismatch on inconsistent series.
std::string render_svg(const Chart& chart);
void write_svg(const Chart& chart, const std::filesystem::path& path);

inline constexpr std::size_t kMaxDataAttr = 2000;
inline constexpr std::size_t kMaxDrawnPoints = 5000;

Chart pv_chart(const PlannedValueCurve& pv);
Chart pdfcdf_chart(const HistogramTable& hist, std::string_view quantity);
Chart scatter_chart(std::span<const double> durations, std::span<const double> costs,
                    std::size_t bins = 30);
Chart ci_bars_chart(const SensitivityReport& report);
Chart srb_crb_chart(const RiskBaseline& baseline);
Chart triad_chart(const CrossSection& cs, const ControlObservation& obs);
/// Neighbours at their control position, red when they finish late.
Chart sevm_chart(const SevmForecast& forecast, const ControlObservation& obs);

}  // namespace schedrisk
