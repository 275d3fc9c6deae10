#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace schedrisk {

/// Linear-interpolation quantile: rank R = p/100 * (n-1) between adjacent
/// order statistics. Throws EmptySample.
double empirical_percentile(std::span<const double> samples, double p);

/// Same rule on data that is already sorted ascending.
double sorted_percentile(std::span<const double> sorted, double p);

struct HistogramTable {
  std::vector<double> bin_lower;
  std::vector<double> bin_upper;
  std::vector<double> pdf;  // bin mass, sums to 1
  std::vector<double> cdf;  // cumulative mass, last entry exactly 1
};

/// Equal-width bins over [min, max]; the top edge belongs to the last bin.
/// A constant sample gets one zero-width bin.
HistogramTable histogram_and_cdf(std::span<const double> samples, std::size_t bins);

double sample_mean(std::span<const double> x);
/// Unbiased (n-1) variance; 0 for fewer than two samples.
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);

/// Pearson correlation; 0 when either variance is 0.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Mid-rank empirical CDF: (#{x < v} + #{x == v} / 2) / n.
double midrank_cdf(std::span<const double> samples, double value);

}  // namespace schedrisk
