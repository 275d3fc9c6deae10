#include <doctest.h>

#include "schedrisk/error.hpp"
#include "schedrisk/montecarlo.hpp"
#include "schedrisk/stats.hpp"
#include "support.hpp"

using namespace schedrisk;

namespace {

Ensemble simulate(const ProjectSpec& s, std::size_t runs, std::uint64_t seed = 42,
                  std::size_t threads = 1) {
  SimConfig cfg;
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.threads = threads;
  return run_ensemble(validate(s), cfg);
}

template <class A, class B>
bool same(const A& a, const B& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool identical(const Ensemble& a, const Ensemble& b) {
  if (a.runs() != b.runs() || a.node_count() != b.node_count()) return false;
  bool ok = same(a.project_durations(), b.project_durations()) &&
            same(a.project_costs(), b.project_costs()) &&
            same(a.trajectory_times(), b.trajectory_times());
  for (std::size_t i = 0; i < a.node_count(); ++i)
    ok = ok && same(a.durations(i), b.durations(i)) && same(a.starts(i), b.starts(i)) &&
         same(a.node_costs(i), b.node_costs(i)) && same(a.critical(i), b.critical(i));
  for (std::size_t j = 0; j < a.trajectory_times().size(); ++j)
    ok = ok && same(a.cost_trajectory(j), b.cost_trajectory(j)) &&
         same(a.earned_value_trajectory(j), b.earned_value_trajectory(j));
  return ok;
}

}  // namespace

TEST_CASE("point network gives identical runs") {
  const auto e = simulate(support::figure3(), 200);
  for (double pd : e.project_durations()) CHECK(pd == 8.0);
  CHECK(sample_sd(e.project_durations()) == 0.0);
  CHECK(e.planned_duration() == 8.0);
}

TEST_CASE("serial normals add up") {
  const auto e = simulate(support::serial(std::vector<Distribution>(5, NormalDist{10, 2})), 100'000);
  const auto pd = e.project_durations();
  // mean 50, sd sqrt(20); standard error of the mean is 0.0141
  CHECK(std::abs(sample_mean(pd) - 50.0) < 0.06);
  CHECK(std::abs(sample_sd(pd) - std::sqrt(20.0)) < 0.02 * std::sqrt(20.0));
}

TEST_CASE("merge bias of two parallel uniforms") {
  const auto e = simulate(support::parallel({UniformDist{4, 6}, UniformDist{4, 6}}), 100'000);
  // E max of two iid U(4,6) = 4 + 2 * 2/3
  CHECK(std::abs(sample_mean(e.project_durations()) - 16.0 / 3.0) < 0.02);
  CHECK(e.planned_duration() == 5.0);
}

TEST_CASE("determinism across seeds and worker counts") {
  const auto s = support::figure3(2, 3, 4, 5, UniformDist{0.5, 1.5}, TriangularDist{0.5, 1, 2},
                                  0.3, 0.2);
  ProjectSpec stochastic = s;
  stochastic.activities[1].duration = TriangularDist{1, 2, 3};
  stochastic.activities[2].duration = UniformDist{2, 4};
  stochastic.activities[3].duration = NormalDist{4, 0.5};
  stochastic.activities[4].duration = PertDist{4, 5, 6};
  for (auto& a : stochastic.activities) a.fixed_cost = 10, a.variable_cost_rate = 2;
  stochastic.activities.front().fixed_cost = stochastic.activities.back().fixed_cost = 0;
  stochastic.activities.front().variable_cost_rate = stochastic.activities.back().variable_cost_rate = 0;
  stochastic.risks.push_back(support::risk("C1", "A3", 0.5, UniformDist{5, 15}, RiskKind::cost));

  const auto one = simulate(stochastic, 3001, 7, 1);
  CHECK(identical(one, simulate(stochastic, 3001, 7, 1)));
  CHECK(identical(one, simulate(stochastic, 3001, 7, 3)));
  CHECK(identical(one, simulate(stochastic, 3001, 7, 8)));
  CHECK_FALSE(identical(one, simulate(stochastic, 3001, 8, 1)));

  // run k does not depend on how many runs there are
  const auto longer = simulate(stochastic, 5000, 7, 2);
  for (std::size_t k = 0; k < one.runs(); ++k)
    CHECK(one.project_durations()[k] == longer.project_durations()[k]);
}

TEST_CASE("run trajectories end at actual cost and budget") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = simulate(support::random_discrete_network(rng, 8, 2), 300);
    const auto times = e.trajectory_times();
    for (std::size_t k = 0; k < e.runs(); ++k) {
      const double pd = e.project_durations()[k];
      const double c = e.project_costs()[k];
      CHECK(e.cost_at(k, pd) == c);
      CHECK(e.earned_value_at(k, pd) == e.budget());
      CHECK(e.cost_at(k, pd + 100) == c);
      CHECK(e.cost_at(k, 0.0) <= c);
      for (std::size_t j = 0; j < times.size(); ++j)
        if (times[j] >= pd) {
          CHECK(e.cost_trajectory(j)[k] == c);
          CHECK(e.earned_value_trajectory(j)[k] == e.budget());
        }
    }
    // project cost is the sum of node costs
    for (std::size_t k = 0; k < e.runs(); ++k) {
      double total = 0.0;
      for (std::size_t i = 0; i < e.node_count(); ++i) total += e.node_costs(i)[k];
      CHECK(total == doctest::Approx(e.project_costs()[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("ensemble matches exhaustive enumeration") {
  std::mt19937_64 rng(101);
  const std::size_t n = 20'000;
  const double bound = 3.0 * std::sqrt(std::log(2.0) / (2.0 * n));
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectSpec s = support::random_discrete_network(rng, 6, 2);
    const auto exact = support::exact_outcome(s);
    const auto e = simulate(s, n, 1000 + trial);
    const double ks_d = support::ks_distance({e.project_durations().begin(), e.project_durations().end()},
                                             exact.duration);
    const double ks_c =
        support::ks_distance({e.project_costs().begin(), e.project_costs().end()}, exact.cost);
    CHECK(ks_d < bound);
    CHECK(ks_c < bound);
  }
}

TEST_CASE("p = 0 risks leave the ensemble unchanged") {
  ProjectSpec base = support::serial({UniformDist{1, 3}, TriangularDist{2, 3, 5}}, 4.0, 1.5);
  ProjectSpec gated = base;
  gated.risks.push_back(support::risk("R1", "X1", 0.0, UniformDist{1, 2}));
  gated.risks.push_back(support::risk("C1", "X2", 0.0, PointDist{100}, RiskKind::cost));
  const auto a = simulate(base, 5000);
  const auto b = simulate(gated, 5000);
  CHECK(same(a.project_durations(), b.project_durations()));
  CHECK(same(a.project_costs(), b.project_costs()));
  CHECK(a.budget() == b.budget());
  CHECK(a.planned_duration() == b.planned_duration());
}

TEST_CASE("certain point risk shifts every run") {
  ProjectSpec base = support::serial({UniformDist{1, 3}, TriangularDist{2, 3, 5}});
  ProjectSpec risky = base;
  risky.risks.push_back(support::risk("R1", "X1", 1.0, PointDist{5}));
  const auto a = simulate(base, 5000);
  const auto b = simulate(risky, 5000);
  for (std::size_t k = 0; k < a.runs(); ++k)
    CHECK(b.project_durations()[k] - a.project_durations()[k] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("risk traces") {
  ProjectSpec s = support::serial({PointDist{1}}, 0.0, 0.0);
  s.risks.push_back(support::risk("R1", "X1", 0.25, PointDist{2}));
  s.risks.push_back(support::risk("C1", "X1", 0.5, PointDist{10}, RiskKind::cost));
  const auto e = simulate(s, 40'000);
  REQUIRE(e.risks().size() == 2);
  for (const auto& r : e.risks()) {
    const double p = r.id == "R1" ? 0.25 : 0.5;
    double hits = 0;
    for (std::size_t k = 0; k < e.runs(); ++k) {
      hits += r.active[k];
      CHECK(r.amount[k] == (r.active[k] ? (r.id == "R1" ? 2.0 : 10.0) : 0.0));
    }
    CHECK(std::abs(hits / e.runs() - p) < 4 * std::sqrt(p * (1 - p) / e.runs()));
  }
  CHECK(e.budget() == doctest::Approx(5.0));
}

TEST_CASE("invalid settings") {
  const auto net = validate(support::figure3());
  SimConfig cfg;
  cfg.runs = 0;
  try {
    run_ensemble(net, cfg);
    FAIL("runs = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  cfg.runs = 10;
  cfg.trajectory_grid = 1;
  CHECK_THROWS_AS(run_ensemble(net, cfg), Error);
}
