#include "schedrisk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "schedrisk/csv.hpp"
#include "schedrisk/error.hpp"
#include "schedrisk/project_file.hpp"

namespace schedrisk {

std::optional<PlotKind> plot_kind_from(std::string_view name) {
  for (auto k : {PlotKind::pv, PlotKind::pdfcdf, PlotKind::scatter, PlotKind::ci_bars,
                 PlotKind::srb_crb, PlotKind::triad, PlotKind::sevm})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::pv: return "pv";
    case PlotKind::pdfcdf: return "pdfcdf";
    case PlotKind::scatter: return "scatter";
    case PlotKind::ci_bars: return "ci_bars";
    case PlotKind::srb_crb: return "srb_crb";
    case PlotKind::triad: return "triad";
    case PlotKind::sevm: return "sevm";
  }
  return "pv";
}

namespace {

constexpr double kWidth = 760, kHeight = 500;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return lo > hi; }
  Range padded() const {
    Range r = *this;
    if (r.empty()) return {0.0, 1.0};
    if (r.hi == r.lo) {
      const double d = 0.05 * std::abs(r.lo) + 0.5;
      return {r.lo - d, r.hi + d};
    }
    const double d = 0.04 * (r.hi - r.lo);
    return {r.lo - d, r.hi + d};
  }
};

struct Scale {
  Range domain;
  double from = 0, to = 1;  // pixel range
  double operator()(double v) const {
    return from + (v - domain.lo) / (domain.hi - domain.lo) * (to - from);
  }
};

void check(const Series& s) {
  if (s.x.size() != s.y.size())
    throw Error(ErrorCode::ShapeMismatch,
                "series '" + s.label + "' has " + std::to_string(s.x.size()) + " x and " +
                    std::to_string(s.y.size()) + " y values",
                s.label);
  if (!s.x_end.empty() && s.x_end.size() != s.x.size())
    throw Error(ErrorCode::ShapeMismatch, "series '" + s.label + "' bar edges do not match",
                s.label);
  if (s.x.empty())
    throw Error(ErrorCode::ShapeMismatch, "series '" + s.label + "' is empty", s.label);
}

std::string joined(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += csv_number(v[i]);
  }
  return out;
}

double bar_right(const Series& s, std::size_t i) {
  return s.x_end.empty() ? s.x[i] + 0.4 : s.x_end[i];
}
double bar_left(const Series& s, std::size_t i) {
  return s.x_end.empty() ? s.x[i] - 0.4 : s.x[i];
}

// `sx` maps the series x, `sy` its y. `swap` draws bars horizontally
// (right marginal: x holds values on the vertical axis).
void draw_series(std::string& out, const Series& s, const Scale& sx, const Scale& sy,
                 bool swap = false) {
  out += "<g class=\"series\" data-label=\"" + escape(s.label) + "\" data-mark=\"";
  out += s.mark == Mark::line ? "line" : s.mark == Mark::step ? "step"
         : s.mark == Mark::points ? "points" : "bars";
  out += "\" data-count=\"" + std::to_string(s.x.size()) + "\"";
  if (s.x.size() <= kMaxDataAttr)
    out += " data-x=\"" + joined(s.x) + "\" data-y=\"" + joined(s.y) + "\"";
  out += ">\n";
  const std::string color = escape(s.color);
  switch (s.mark) {
    case Mark::line:
    case Mark::step: {
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.mark == Mark::step && i > 0)
          out += px(sx(s.x[i])) + "," + px(sy(s.y[i - 1])) + " ";
        out += px(sx(s.x[i])) + "," + px(sy(s.y[i])) + " ";
      }
      out += "\"/>\n";
      break;
    }
    case Mark::points: {
      const std::size_t stride = (s.x.size() + kMaxDrawnPoints - 1) / kMaxDrawnPoints;
      for (std::size_t i = 0; i < s.x.size(); i += stride)
        out += "<circle cx=\"" + px(sx(s.x[i])) + "\" cy=\"" + px(sy(s.y[i])) +
               "\" r=\"2.5\" fill=\"" + color + "\" fill-opacity=\"0.6\"/>\n";
      break;
    }
    case Mark::bars: {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!swap) {
          double x0 = sx(bar_left(s, i)), x1 = sx(bar_right(s, i));
          if (x1 - x0 < 2.0) x0 = 0.5 * (x0 + x1) - 1.0, x1 = x0 + 2.0;
          const double y0 = sy(0.0), y1 = sy(s.y[i]);
          out += "<rect x=\"" + px(x0) + "\" y=\"" + px(std::min(y0, y1)) + "\" width=\"" +
                 px(x1 - x0) + "\" height=\"" + px(std::abs(y0 - y1)) + "\" fill=\"" + color +
                 "\" fill-opacity=\"0.7\"/>\n";
        } else {
          // value range on the vertical axis, mass along the horizontal one
          double v0 = sy(bar_left(s, i)), v1 = sy(bar_right(s, i));
          if (std::abs(v1 - v0) < 2.0) v0 = 0.5 * (v0 + v1) - 1.0, v1 = v0 + 2.0;
          const double m0 = sx(0.0), m1 = sx(s.y[i]);
          out += "<rect x=\"" + px(std::min(m0, m1)) + "\" y=\"" + px(std::min(v0, v1)) +
                 "\" width=\"" + px(std::abs(m1 - m0)) + "\" height=\"" +
                 px(std::abs(v1 - v0)) + "\" fill=\"" + color + "\" fill-opacity=\"0.7\"/>\n";
        }
      }
      break;
    }
  }
  out += "</g>\n";
}

void axis(std::string& out, const Scale& s, bool horizontal, double at, bool ticks_after,
          const std::vector<std::string>& categories = {}) {
  const double a = s(s.domain.lo), b = s(s.domain.hi);
  if (horizontal)
    out += "<line x1=\"" + px(a) + "\" y1=\"" + px(at) + "\" x2=\"" + px(b) + "\" y2=\"" +
           px(at) + "\" stroke=\"black\"/>\n";
  else
    out += "<line x1=\"" + px(at) + "\" y1=\"" + px(a) + "\" x2=\"" + px(at) + "\" y2=\"" +
           px(b) + "\" stroke=\"black\"/>\n";
  std::vector<std::pair<double, std::string>> ticks;
  if (!categories.empty()) {
    for (std::size_t i = 0; i < categories.size(); ++i)
      ticks.emplace_back(static_cast<double>(i), categories[i]);
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double v = s.domain.lo + (s.domain.hi - s.domain.lo) * i / 5.0;
      ticks.emplace_back(v, tick_label(v));
    }
  }
  for (const auto& [v, text] : ticks) {
    const double p = s(v);
    if (horizontal) {
      out += "<line x1=\"" + px(p) + "\" y1=\"" + px(at) + "\" x2=\"" + px(p) + "\" y2=\"" +
             px(at + 5) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + px(p) + "\" y=\"" + px(at + 18) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + escape(text) + "</text>\n";
    } else {
      const double d = ticks_after ? 5 : -5;
      out += "<line x1=\"" + px(at) + "\" y1=\"" + px(p) + "\" x2=\"" + px(at + d) + "\" y2=\"" +
             px(p) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + px(at + 3 * d / 2) + "\" y=\"" + px(p + 4) + "\" font-size=\"11\"" +
             (ticks_after ? "" : " text-anchor=\"end\"") + ">" + escape(text) + "</text>\n";
    }
  }
}

}  // namespace

std::string render_svg(const Chart& chart) {
  if (chart.series.empty()) throw Error(ErrorCode::ShapeMismatch, "chart has no series");
  for (const auto* group : {&chart.series, &chart.top_marginal, &chart.right_marginal})
    for (const auto& s : *group) check(s);

  const bool top = !chart.top_marginal.empty();
  const bool right = !chart.right_marginal.empty();
  const bool y2 = std::any_of(chart.series.begin(), chart.series.end(),
                              [](const Series& s) { return s.right_axis; });
  const double left = 80, plot_top = top ? 150 : 70;
  const double plot_right = kWidth - (right ? 150 : (y2 ? 80 : 30));
  const double plot_bottom = kHeight - 60;

  Range rx, ry, ry2;
  for (const auto& s : chart.series) {
    Range& r = s.right_axis ? ry2 : ry;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.mark == Mark::bars) {
        rx.add(bar_left(s, i));
        rx.add(bar_right(s, i));
        r.add(0.0);
      } else {
        rx.add(s.x[i]);
      }
      r.add(s.y[i]);
    }
  }
  if (!chart.categories.empty()) {
    rx.add(-0.5);
    rx.add(static_cast<double>(chart.categories.size()) - 0.5);
  }
  Range mtop, mright;
  for (const auto& s : chart.top_marginal)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      rx.add(bar_left(s, i));
      rx.add(bar_right(s, i));
      mtop.add(0.0);
      mtop.add(s.y[i]);
    }
  for (const auto& s : chart.right_marginal)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      ry.add(bar_left(s, i));
      ry.add(bar_right(s, i));
      mright.add(0.0);
      mright.add(s.y[i]);
    }

  const Scale sx{chart.categories.empty() ? rx.padded() : rx, left, plot_right};
  const Scale sy{ry.padded(), plot_bottom, plot_top};
  const Scale sy2{ry2.padded(), plot_bottom, plot_top};

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
         px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text class=\"title\" x=\"" + px(kWidth / 2) +
         "\" y=\"22\" font-size=\"16\" text-anchor=\"middle\">" + escape(chart.title) +
         "</text>\n";

  out += "<g class=\"axes\">\n";
  axis(out, sx, true, plot_bottom, true, chart.categories);
  axis(out, sy, false, left, false);
  if (y2) axis(out, sy2, false, plot_right, true);
  out += "<text x=\"" + px((left + plot_right) / 2) + "\" y=\"" + px(kHeight - 15) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(chart.x_label) + "</text>\n";
  out += "<text transform=\"translate(18," + px((plot_top + plot_bottom) / 2) +
         ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" + escape(chart.y_label) +
         "</text>\n";
  if (y2)
    out += "<text transform=\"translate(" + px(kWidth - 12) + "," +
           px((plot_top + plot_bottom) / 2) +
           ") rotate(90)\" font-size=\"12\" text-anchor=\"middle\">" + escape(chart.y2_label) +
           "</text>\n";
  out += "</g>\n";

  for (const auto& s : chart.series) draw_series(out, s, sx, s.right_axis ? sy2 : sy);
  if (top) {
    const Scale mt{mtop.padded(), plot_top - 15, plot_top - 85};
    for (const auto& s : chart.top_marginal) draw_series(out, s, sx, mt);
  }
  if (right) {
    const Scale mr{mright.padded(), plot_right + 15, plot_right + 135};
    for (const auto& s : chart.right_marginal) draw_series(out, s, mr, sy, true);
  }

  out += "<g class=\"legend\">\n";
  double lx = left;
  for (const auto* group : {&chart.series, &chart.top_marginal, &chart.right_marginal})
    for (const auto& s : *group) {
      out += "<rect x=\"" + px(lx) + "\" y=\"34\" width=\"12\" height=\"12\" fill=\"" +
             escape(s.color) + "\"/>\n";
      out += "<text x=\"" + px(lx + 16) + "\" y=\"44\" font-size=\"11\">" + escape(s.label) +
             "</text>\n";
      lx += 28 + 6.5 * static_cast<double>(s.label.size());
    }
  out += "</g>\n</svg>\n";
  return out;
}

void write_svg(const Chart& chart, const std::filesystem::path& path) {
  write_text_file(path, render_svg(chart));
}

Chart pv_chart(const PlannedValueCurve& pv) {
  Chart c{"Planned value", "time", "planned value", "", {}, {}, {}, {}};
  c.series.push_back({"PV", Mark::line, "#1f77b4", pv.times, pv.values, {}, false});
  return c;
}

namespace {

Series bars_of(const HistogramTable& h, std::string label, std::string color) {
  Series s{std::move(label), Mark::bars, std::move(color), {}, {}, {}, false};
  const bool constant = !h.bin_lower.empty() && h.bin_lower.front() == h.bin_upper.back();
  for (std::size_t b = 0; b < h.pdf.size(); ++b) {
    if (constant && h.pdf[b] == 0.0) continue;
    s.x.push_back(h.bin_lower[b]);
    s.x_end.push_back(h.bin_upper[b]);
    s.y.push_back(h.pdf[b]);
  }
  return s;
}

}  // namespace

Chart pdfcdf_chart(const HistogramTable& hist, std::string_view quantity) {
  if (hist.pdf.empty() || hist.pdf.size() != hist.cdf.size() ||
      hist.bin_lower.size() != hist.pdf.size() || hist.bin_upper.size() != hist.pdf.size())
    throw Error(ErrorCode::ShapeMismatch, "histogram columns differ in length");
  Chart c{"Distribution of " + std::string(quantity), std::string(quantity), "probability mass",
          "cumulative probability", {}, {}, {}, {}};
  c.series.push_back(bars_of(hist, "pdf", "#1f77b4"));
  Series cdf{"cdf", Mark::step, "#d62728", {}, {}, {}, true};
  const bool constant = hist.bin_lower.front() == hist.bin_upper.back();
  cdf.x.push_back(hist.bin_lower.front());
  cdf.y.push_back(0.0);
  if (constant) {
    cdf.x.push_back(hist.bin_lower.front());
    cdf.y.push_back(1.0);
  } else {
    for (std::size_t b = 0; b < hist.cdf.size(); ++b) {
      cdf.x.push_back(hist.bin_upper[b]);
      cdf.y.push_back(hist.cdf[b]);
    }
  }
  c.series.push_back(std::move(cdf));
  return c;
}

Chart scatter_chart(std::span<const double> durations, std::span<const double> costs,
                    std::size_t bins) {
  if (durations.size() != costs.size() || durations.empty())
    throw Error(ErrorCode::ShapeMismatch, "scatter needs one cost per duration");
  Chart c{"Project duration vs cost", "duration", "cost", "", {}, {}, {}, {}};
  c.series.push_back({"runs", Mark::points, "#1f77b4",
                      std::vector<double>(durations.begin(), durations.end()),
                      std::vector<double>(costs.begin(), costs.end()), {}, false});
  c.top_marginal.push_back(bars_of(histogram_and_cdf(durations, bins), "duration", "#2ca02c"));
  c.right_marginal.push_back(bars_of(histogram_and_cdf(costs, bins), "cost", "#ff7f0e"));
  return c;
}

Chart ci_bars_chart(const SensitivityReport& report) {
  if (report.rows.empty()) throw Error(ErrorCode::ShapeMismatch, "no activities to plot");
  Chart c{"Sensitivity indices", "activity", "index", "", {}, {}, {}, {}};
  const char* labels[] = {"CI", "CrI", "SSI"};
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
  for (int k = 0; k < 3; ++k) {
    Series s{labels[k], Mark::bars, colors[k], {}, {}, {}, false};
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& r = report.rows[i];
      const double x0 = static_cast<double>(i) - 0.4 + 0.8 / 3.0 * k;
      s.x.push_back(x0);
      s.x_end.push_back(x0 + 0.8 / 3.0);
      s.y.push_back(k == 0 ? r.criticality : k == 1 ? r.cruciality : r.sensitivity);
    }
    c.series.push_back(std::move(s));
  }
  for (const auto& r : report.rows) c.categories.push_back(r.id);
  return c;
}

Chart srb_crb_chart(const RiskBaseline& b) {
  if (b.times.empty() || b.srb.size() != b.times.size() || b.crb.size() != b.times.size())
    throw Error(ErrorCode::ShapeMismatch, "baseline columns differ in length");
  Chart c{"Risk baselines", "time", "SRB (time)", "CRB (money)", {}, {}, {}, {}};
  c.series.push_back({"SRB", Mark::line, "#1f77b4", b.times, b.srb, {}, false});
  c.series.push_back({"CRB", Mark::line, "#ff7f0e", b.times, b.crb, {}, true});
  return c;
}

Chart triad_chart(const CrossSection& cs, const ControlObservation& obs) {
  Chart c{"Runs at " + tick_label(100.0 * cs.fraction) + "% earned", "time", "actual cost", "",
          {}, {}, {}, {}};
  c.series.push_back({"runs", Mark::points, "#7f7f7f", cs.times, cs.costs, {}, false});
  c.series.push_back(
      {"observation", Mark::points, "#000000", {obs.time}, {obs.actual_cost}, {}, false});
  return c;
}

Chart sevm_chart(const SevmForecast& f, const ControlObservation& obs) {
  Chart c{"Nearest runs at " + tick_label(100.0 * f.fraction) + "% earned", "time", "actual cost",
          "", {}, {}, {}, {}};
  Series late{"late", Mark::points, "red", {}, {}, {}, false};
  Series early{"early", Mark::points, "blue", {}, {}, {}, false};
  for (const auto& n : f.neighbors) {
    Series& s = n.late ? late : early;
    s.x.push_back(n.control_time);
    s.y.push_back(n.control_cost);
  }
  if (!late.x.empty()) c.series.push_back(std::move(late));
  if (!early.x.empty()) c.series.push_back(std::move(early));
  c.series.push_back(
      {"observation", Mark::points, "#000000", {obs.time}, {obs.actual_cost}, {}, false});
  return c;
}

}  // namespace schedrisk
