#include "schedrisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schedrisk/error.hpp"
#include "schedrisk/kernels.hpp"

namespace schedrisk {

double sorted_percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptySample, "percentile of an empty sample");
  if (!(p >= 0.0 && p <= 100.0))
    throw Error(ErrorCode::ConfigError, "percentile must lie in [0, 100]");
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = rank - static_cast<double>(lo);
  if (w == 0.0) return sorted[lo];
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

double empirical_percentile(std::span<const double> samples, double p) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "percentile of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_percentile(sorted, p);
}

HistogramTable histogram_and_cdf(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "histogram of an empty sample");
  if (bins == 0) throw Error(ErrorCode::ConfigError, "histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  if (lo == hi) bins = 1;
  const double width = (hi - lo) / static_cast<double>(bins);

  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>((x - lo) / width);
      b = std::min(b, bins - 1);
    }
    ++counts[b];
  }

  HistogramTable t;
  const double n = static_cast<double>(samples.size());
  std::size_t running = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    t.bin_lower.push_back(lo + width * static_cast<double>(b));
    t.bin_upper.push_back(b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1));
    t.pdf.push_back(static_cast<double>(counts[b]) / n);
    running += counts[b];
    t.cdf.push_back(static_cast<double>(running) / n);
  }
  return t;
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::EmptySample, "mean of an empty sample");
  return kernels::active().sum(x) / static_cast<double>(x.size());
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "covariance of unequal lengths");
  if (x.size() < 2) return 0.0;
  const double mx = sample_mean(x), my = sample_mean(y);
  return kernels::active().centered_dot(x, mx, y, my) / static_cast<double>(x.size() - 1);
}

double sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double pearson(std::span<const double> x, std::span<const double> y) {
  const double vx = sample_variance(x), vy = sample_variance(y);
  if (!(vx > 0.0) || !(vy > 0.0)) return 0.0;
  const double r = sample_covariance(x, y) / std::sqrt(vx * vy);
  return std::clamp(r, -1.0, 1.0);
}

namespace {

std::vector<double> midranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = midranks(x), ry = midranks(y);
  return pearson(rx, ry);
}

double midrank_cdf(std::span<const double> samples, double value) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "rank within an empty sample");
  std::size_t less = 0, equal = 0;
  for (double s : samples) {
    less += s < value;
    equal += s == value;
  }
  return (static_cast<double>(less) + 0.5 * static_cast<double>(equal)) /
         static_cast<double>(samples.size());
}

}  // namespace schedrisk
