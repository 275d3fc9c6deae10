#include <atomic>
#include <cmath>

#include "schedrisk/error.hpp"
#include "schedrisk/kernels.hpp"

namespace schedrisk::kernels {
namespace {

void max_into(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = dst[i] < src[i] ? src[i] : dst[i];
}

void min_into(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] < dst[i] ? src[i] : dst[i];
}

void add(std::span<double> dst, std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] + b[i];
}

void sub(std::span<double> dst, std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] - b[i];
}

void flag_within(std::span<std::uint8_t> flags, std::span<const double> a,
                 std::span<const double> b, double eps) {
  for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = (a[i] - b[i]) <= eps ? 1 : 0;
}

void affine(std::span<double> dst, double base, double rate, std::span<const double> x) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = base + rate * x[i];
}

void accrue(std::span<double> dst, double t, std::span<const double> start,
            std::span<const double> dur, std::span<const double> weight) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
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

double sum(std::span<const double> x) {
  double s = 0.0, c = 0.0;
  for (double v : x) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

double centered_dot(std::span<const double> x, double mx, std::span<const double> y, double my) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = (x[i] - mx) * (y[i] - my);
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

constexpr Table kScalar{Isa::scalar, max_into, min_into, add,  sub,
                        flag_within, affine,   accrue,   sum, centered_dot};

std::atomic<const Table*> g_active{nullptr};

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const Table& scalar_table() { return kScalar; }

#ifndef SCHEDRISK_HAVE_AVX2
const Table* avx2_table() { return nullptr; }
#endif

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() { return available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const Table& table(Isa isa) {
  if (!available(isa))
    throw Error(ErrorCode::ConfigError,
                "instruction set '" + std::string(to_string(isa)) + "' is not available");
  return isa == Isa::avx2 ? *avx2_table() : kScalar;
}

const Table& active() {
  const Table* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = &table(detect());
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select(Isa isa) { g_active.store(&table(isa), std::memory_order_release); }

}  // namespace schedrisk::kernels
