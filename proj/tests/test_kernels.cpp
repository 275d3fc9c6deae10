#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "schedrisk/kernels.hpp"
#include "schedrisk/montecarlo.hpp"
#include "support.hpp"

using namespace schedrisk;

namespace {

const kernels::Table* vector_table() {
  if (!kernels::available(kernels::Isa::avx2)) return nullptr;
  return kernels::avx2_table();
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> noise(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

const std::vector<std::size_t> kLengths{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1001};

}  // namespace

TEST_CASE("element-wise kernels are bit-identical") {
  const auto* vec = vector_table();
  if (!vec) {
    MESSAGE("AVX2 not available, skipping");
    return;
  }
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(9);
  for (std::size_t n : kLengths) {
    const auto a = noise(rng, n, -5, 5), b = noise(rng, n, -5, 5);
    auto d1 = a, d2 = a;
    ref.max_into(d1, b);
    vec->max_into(d2, b);
    CHECK(bits_equal(d1, d2));
    d1 = a, d2 = a;
    ref.min_into(d1, b);
    vec->min_into(d2, b);
    CHECK(bits_equal(d1, d2));

    std::vector<double> o1(n), o2(n);
    ref.add(o1, a, b);
    vec->add(o2, a, b);
    CHECK(bits_equal(o1, o2));
    ref.sub(o1, a, b);
    vec->sub(o2, a, b);
    CHECK(bits_equal(o1, o2));
    ref.affine(o1, 3.25, 1.7, a);
    vec->affine(o2, 3.25, 1.7, a);
    CHECK(bits_equal(o1, o2));

    std::vector<std::uint8_t> f1(n), f2(n);
    auto near = b;
    for (std::size_t i = 0; i < n; i += 2) near[i] = a[i] - 1e-10;
    ref.flag_within(f1, a, near, 1e-9);
    vec->flag_within(f2, a, near, 1e-9);
    CHECK(f1 == f2);

    // windows: some empty, some finished, some in progress
    auto start = noise(rng, n, 0, 4), dur = noise(rng, n, 0, 3);
    for (std::size_t i = 0; i < n; i += 3) dur[i] = 0.0;
    const auto weight = noise(rng, n, 0, 100);
    for (double t : {0.0, 1.5, 2.0, 3.7, 10.0}) {
      std::vector<double> acc1 = o1, acc2 = o1;
      ref.accrue(acc1, t, start, dur, weight);
      vec->accrue(acc2, t, start, dur, weight);
      CHECK(bits_equal(acc1, acc2));
    }
  }
}

TEST_CASE("reductions agree to 1e-12") {
  const auto* vec = vector_table();
  if (!vec) {
    MESSAGE("AVX2 not available, skipping");
    return;
  }
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(10);
  for (std::size_t n : kLengths) {
    auto x = noise(rng, n, -1e3, 1e6), y = noise(rng, n, 0, 1);
    const double s1 = ref.sum(x), s2 = vec->sum(x);
    CHECK(std::abs(s1 - s2) <= 1e-12 * std::max(1.0, std::abs(s1)));
    const double c1 = ref.centered_dot(x, 17.0, y, 0.5), c2 = vec->centered_dot(x, 17.0, y, 0.5);
    CHECK(std::abs(c1 - c2) <= 1e-12 * std::max(1.0, std::abs(c1)));
  }
  // cancellation-heavy input
  std::vector<double> hard{1e16, 1.0, -1e16, 3.0, 1e-3, -2.0};
  CHECK(ref.sum(hard) == doctest::Approx(2.001).epsilon(1e-12));
  CHECK(vec->sum(hard) == doctest::Approx(2.001).epsilon(1e-12));
}

TEST_CASE("ensembles do not depend on the kernel variant") {
  if (!vector_table()) {
    MESSAGE("AVX2 not available, skipping");
    return;
  }
  ProjectSpec s = support::figure3(2, 3, 4, 5, UniformDist{0.5, 1.5}, TriangularDist{0.5, 1, 2}, 0.3, 0.2);
  s.activities[1].duration = TriangularDist{1, 2, 3};
  s.activities[3].duration = NormalDist{4, 0.5};
  for (std::size_t i = 1; i + 1 < s.activities.size(); ++i) s.activities[i].variable_cost_rate = 10;
  const auto net = validate(s);
  SimConfig cfg;
  cfg.runs = 2001;
  cfg.isa = kernels::Isa::scalar;
  const auto a = run_ensemble(net, cfg);
  cfg.isa = kernels::Isa::avx2;
  const auto b = run_ensemble(net, cfg);
  for (std::size_t k = 0; k < a.runs(); ++k) {
    CHECK(a.project_durations()[k] == b.project_durations()[k]);
    CHECK(a.project_costs()[k] == b.project_costs()[k]);
  }
  for (std::size_t i = 0; i < a.node_count(); ++i)
    for (std::size_t k = 0; k < a.runs(); ++k) CHECK(a.critical(i)[k] == b.critical(i)[k]);
  for (std::size_t j = 0; j < a.trajectory_times().size(); ++j)
    for (std::size_t k = 0; k < a.runs(); ++k) {
      CHECK(a.cost_trajectory(j)[k] == b.cost_trajectory(j)[k]);
      CHECK(a.earned_value_trajectory(j)[k] == b.earned_value_trajectory(j)[k]);
    }
}

TEST_CASE("selection") {
  CHECK(kernels::available(kernels::Isa::scalar));
  CHECK(kernels::table(kernels::Isa::scalar).isa == kernels::Isa::scalar);
  CHECK(kernels::to_string(kernels::Isa::avx2) == "avx2");
  const auto before = kernels::active().isa;
  kernels::select(kernels::Isa::scalar);
  CHECK(kernels::active().isa == kernels::Isa::scalar);
  kernels::select(before);
}
