#pragma once

// Data-parallel inner loops of the engine. Every kernel has a scalar
// reference implementation; vector variants are picked at runtime from the
// host CPU. Element-wise kernels are bit-identical across variants (no fused
// multiply-add, same operation order per lane); reductions agree to within a
// few ulps of the compensated result.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace schedrisk::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct Table {
  Isa isa;

  /// dst[i] = max(dst[i], src[i])
  void (*max_into)(std::span<double> dst, std::span<const double> src);
  /// dst[i] = min(dst[i], src[i])
  void (*min_into)(std::span<double> dst, std::span<const double> src);
  /// dst[i] = a[i] + b[i]
  void (*add)(std::span<double> dst, std::span<const double> a, std::span<const double> b);
  /// dst[i] = a[i] - b[i]
  void (*sub)(std::span<double> dst, std::span<const double> a, std::span<const double> b);
  /// flags[i] = (a[i] - b[i]) <= eps
  void (*flag_within)(std::span<std::uint8_t> flags, std::span<const double> a,
                      std::span<const double> b, double eps);
  /// dst[i] = base + rate * x[i]
  void (*affine)(std::span<double> dst, double base, double rate, std::span<const double> x);
  /// dst[i] += weight[i] * f with f = 1 once t >= start[i] + dur[i], else
  /// clamp((t - start[i]) / dur[i], 0, 1) (0 for an empty window).
  void (*accrue)(std::span<double> dst, double t, std::span<const double> start,
                 std::span<const double> dur, std::span<const double> weight);
  /// Compensated (Neumaier) sum.
  double (*sum)(std::span<const double> x);
  /// Compensated sum of (x[i] - mx) * (y[i] - my).
  double (*centered_dot)(std::span<const double> x, double mx, std::span<const double> y,
                         double my);
};

const Table& scalar_table();
/// Null when the library was built without AVX2 support.
const Table* avx2_table();

bool available(Isa isa);
Isa detect();

/// Process-wide selection; defaults to detect().
const Table& active();
void select(Isa isa);

const Table& table(Isa isa);

}  // namespace schedrisk::kernels
