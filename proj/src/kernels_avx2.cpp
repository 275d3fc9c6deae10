// AVX2 variants of the kernels in kernels_scalar.cpp. Built with -mavx2 and
// without -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "schedrisk/kernels.hpp"

namespace schedrisk::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void max_into(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_loadu_pd(dst.data() + i);
    const __m256d s = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_max_pd(s, d));
  }
  for (; i < n; ++i) dst[i] = dst[i] < src[i] ? src[i] : dst[i];
}

void min_into(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_loadu_pd(dst.data() + i);
    const __m256d s = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(dst.data() + i, _mm256_min_pd(s, d));
  }
  for (; i < n; ++i) dst[i] = src[i] < dst[i] ? src[i] : dst[i];
}

void add(std::span<double> dst, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_add_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub(std::span<double> dst, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void flag_within(std::span<std::uint8_t> flags, std::span<const double> a,
                 std::span<const double> b, double eps) {
  const std::size_t n = flags.size();
  const __m256d e = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(diff, e, _CMP_LE_OQ));
    flags[i + 0] = static_cast<std::uint8_t>(mask & 1);
    flags[i + 1] = static_cast<std::uint8_t>((mask >> 1) & 1);
    flags[i + 2] = static_cast<std::uint8_t>((mask >> 2) & 1);
    flags[i + 3] = static_cast<std::uint8_t>((mask >> 3) & 1);
  }
  for (; i < n; ++i) flags[i] = (a[i] - b[i]) <= eps ? 1 : 0;
}

void affine(std::span<double> dst, double base, double rate, std::span<const double> x) {
  const std::size_t n = dst.size();
  const __m256d b = _mm256_set1_pd(base);
  const __m256d r = _mm256_set1_pd(rate);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_add_pd(b, _mm256_mul_pd(r, _mm256_loadu_pd(x.data() + i))));
  for (; i < n; ++i) dst[i] = base + rate * x[i];
}

void accrue(std::span<double> dst, double t, std::span<const double> start,
            std::span<const double> dur, std::span<const double> weight) {
  const std::size_t n = dst.size();
  const __m256d tv = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d s = _mm256_loadu_pd(start.data() + i);
    const __m256d d = _mm256_loadu_pd(dur.data() + i);
    const __m256d full = _mm256_cmp_pd(tv, _mm256_add_pd(s, d), _CMP_GE_OQ);
    const __m256d positive = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
    // Empty windows divide by one; their ramp is masked out below.
    const __m256d safe = _mm256_blendv_pd(one, d, positive);
    __m256d f = _mm256_div_pd(_mm256_sub_pd(tv, s), safe);
    f = _mm256_max_pd(f, zero);
    f = _mm256_min_pd(f, one);
    f = _mm256_and_pd(f, positive);
    f = _mm256_blendv_pd(f, one, full);
    const __m256d acc = _mm256_loadu_pd(dst.data() + i);
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(weight.data() + i), f)));
  }
  for (; i < n; ++i) {
    double f = 0.0;
    if (t >= start[i] + dur[i]) {
      f = 1.0;
    } else if (dur[i] > 0.0) {
      f = (t - start[i]) / dur[i];
      f = f > 0.0 ? f : 0.0;
      f = f < 1.0 ? f : 1.0;
    }
    dst[i] = dst[i] + weight[i] * f;
  }
}

// Lane-wise Neumaier accumulation; lanes are folded with a scalar Neumaier pass.
struct Compensated {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d big_s = _mm256_cmp_pd(_mm256_andnot_pd(sign, s), _mm256_andnot_pd(sign, v),
                                        _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
    const __m256d when_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(when_v, when_s, big_s));
    s = t;
  }

  double fold(double tail_s, double tail_c) const {
    alignas(32) double ls[kLanes];
    alignas(32) double lc[kLanes];
    _mm256_store_pd(ls, s);
    _mm256_store_pd(lc, c);
    double sum = 0.0, comp = 0.0;
    auto push = [&](double v) {
      const double t = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    };
    for (std::size_t k = 0; k < kLanes; ++k) push(ls[k]);
    push(tail_s);
    for (std::size_t k = 0; k < kLanes; ++k) push(lc[k]);
    push(tail_c);
    return sum + comp;
  }
};

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  Compensated acc;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc.add(_mm256_loadu_pd(x.data() + i));
  double s = 0.0, c = 0.0;
  for (; i < n; ++i) {
    const double t = s + x[i];
    c += std::abs(s) >= std::abs(x[i]) ? (s - t) + x[i] : (x[i] - t) + s;
    s = t;
  }
  return acc.fold(s, c);
}

double centered_dot(std::span<const double> x, double mx, std::span<const double> y, double my) {
  const std::size_t n = x.size();
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  Compensated acc;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), vmy);
    acc.add(_mm256_mul_pd(dx, dy));
  }
  double s = 0.0, c = 0.0;
  for (; i < n; ++i) {
    const double v = (x[i] - mx) * (y[i] - my);
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return acc.fold(s, c);
}

constexpr Table kAvx2{Isa::avx2, max_into, min_into, add,  sub,
                      flag_within, affine, accrue,   sum, centered_dot};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace schedrisk::kernels
