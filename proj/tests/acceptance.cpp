// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <cfloat>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "schedrisk/cli.hpp"
#include "schedrisk/control.hpp"
#include "schedrisk/indices.hpp"
#include "schedrisk/project_file.hpp"
#include "schedrisk/reports.hpp"
#include "schedrisk/stats.hpp"
#include "support.hpp"

using namespace schedrisk;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what << " ("
            << detail << ")" << std::endl;
  failures += !ok;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Ensemble simulate(const ProjectSpec& s, std::size_t runs, std::uint64_t seed = 42,
                  std::size_t threads = 0) {
  SimConfig cfg;
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.threads = threads;
  return run_ensemble(validate(s), cfg);
}

const ActivitySensitivity& row(const SensitivityReport& r, const std::string& id) {
  for (const auto& a : r.rows)
    if (a.id == id) return a;
  throw std::runtime_error("no row " + id);
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& f : fs::directory_iterator(dir))
    files[f.path().filename().string()] = read_text_file(f.path());
  return files;
}

void determinism() {
  const auto project = support::fixture("figure3.project").string();
  const auto root = fs::temp_directory_path() / "schedrisk_acceptance";
  fs::remove_all(root);
  std::map<std::string, std::string> first;
  bool ok = true;
  int runs = 0;
  auto simulate_into = [&](const std::string& name, std::size_t threads) {
    std::ostringstream out, err;
    const auto dir = root / name;
    const int code = run_cli({"simulate", "--project", project, "--seed", "42", "--out",
                              dir.string(), "--threads", std::to_string(threads)},
                             out, err);
    ok = ok && code == 0;
    ++runs;
    return read_dir(dir);
  };
  first = simulate_into("a", 1);
  ok = ok && first.size() == 5 && simulate_into("b", 1) == first;
  for (std::size_t t = 2; t <= 8; ++t) ok = ok && simulate_into("t" + std::to_string(t), t) == first;
  fs::remove_all(root);
  report(1, ok, "simulate --seed 42 byte-identical across repeats and 1..8 workers",
         std::to_string(runs) + " invocations, " + std::to_string(first.size()) + " CSVs each");

  // 10 nodes: 6 activities + 2 dummies + 2 duration risks, full trajectories
  ProjectSpec s = support::figure3(2, 3, 4, 5, UniformDist{0.5, 1.5}, TriangularDist{0.5, 1, 2}, 0.3, 0.2);
  s.activities[1].duration = TriangularDist{1, 2, 3};
  s.activities[2].duration = UniformDist{2, 4};
  s.activities[3].duration = NormalDist{4, 0.5};
  s.activities[4].duration = PertDist{4, 5, 6};
  s.activities.insert(s.activities.end() - 1, support::act("A7", TriangularDist{1, 2, 5}));
  s.activities.insert(s.activities.end() - 1, support::act("A8", UniformDist{1, 3}));
  s.precedence.push_back({"A7", "A3"});
  s.precedence.push_back({"A8", "A4"});
  s.precedence.push_back({"Af", "A7"});
  s.precedence.push_back({"Af", "A8"});
  std::erase(s.precedence, Precedence{"Af", "A3"});
  std::erase(s.precedence, Precedence{"Af", "A4"});
  for (auto& a : s.activities)
    if (a.id != "A0" && a.id != "Af") a.fixed_cost = 100, a.variable_cost_rate = 10;
  const auto net = validate(s);
  SimConfig cfg;
  cfg.runs = 100'000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = run_ensemble(net, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, net.size() == 10 && e.has_trajectories() && secs <= 5.0,
         "10-node network, 1e5 runs with trajectories within 5 s",
         num(secs) + " s, " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads");
}

void oracle_equivalence() {
  std::mt19937_64 rng(2025);
  const std::size_t n = 100'000;
  const double dkw = support::dkw_bound99(n);
  double worst_ks = 0.0, worst_ci = 0.0;
  std::size_t max_nodes = 0;
  bool ok = true;
  for (int trial = 0; trial < 25; ++trial) {
    const ProjectSpec s = support::random_discrete_network(rng, 6, 2);
    const auto exact = support::exact_outcome(s);
    const auto g = support::oracle_graph(s);
    const auto e = simulate(s, n, 9000 + trial);
    max_nodes = std::max(max_nodes, e.node_count());
    const double ks_d = support::ks_distance({e.project_durations().begin(), e.project_durations().end()},
                                             exact.duration);
    const double ks_c = support::ks_distance({e.project_costs().begin(), e.project_costs().end()},
                                             exact.cost);
    worst_ks = std::max({worst_ks, ks_d, ks_c});
    const auto ci = criticality_index(e);
    for (std::size_t i = 0; i < e.node_count(); ++i)
      worst_ci = std::max(worst_ci, std::abs(ci[i] - exact.criticality[g.index(e.network().node(i).id)]));
  }
  ok = worst_ks < dkw && worst_ci <= 0.01 && max_nodes <= 10;
  report(2, ok, "25 random discrete networks match exhaustive enumeration",
         "max KS " + num(worst_ks) + " < DKW99 " + num(dkw) + ", max |CI - exact| " + num(worst_ci) +
             ", max nodes " + std::to_string(max_nodes));
}

void serial_normals() {
  const auto e = simulate(support::serial(std::vector<Distribution>(5, NormalDist{10, 2})), 100'000);
  const double m = sample_mean(e.project_durations()), sd = sample_sd(e.project_durations());
  const double sd_exact = std::sqrt(5 * 4.0);
  report(3, std::abs(m - 50) <= 0.06 && std::abs(sd - sd_exact) <= 0.02 * sd_exact,
         "serial 5 x normal(10,2) mean 50 +- 0.06, sd 4.472 +- 2%", "mean " + num(m) + ", sd " + num(sd));
}

void merge_bias() {
  const auto e = simulate(support::parallel({UniformDist{4, 6}, UniformDist{4, 6}}), 100'000);
  const double m = sample_mean(e.project_durations());
  const auto ci = criticality_index(e);
  const double c1 = ci[*e.network().find("X1")], c2 = ci[*e.network().find("X2")];
  report(4, std::abs(m - 16.0 / 3.0) <= 0.02 && std::abs(c1 - 0.5) <= 0.02 && std::abs(c2 - 0.5) <= 0.02,
         "two parallel uniform(4,6) mean 5.3333 +- 0.02, CI 0.5 +- 0.02",
         "mean " + num(m) + ", CI " + num(c1) + " / " + num(c2));
}

void index_identities() {
  const auto single = sensitivity_report(simulate(support::serial({TriangularDist{1, 2, 4}}), 100'000));
  const auto& x = row(single, "X1");
  const bool one = x.criticality == 1.0 && std::abs(x.cruciality - 1) <= 1e-12 &&
                   std::abs(x.sensitivity - 1) <= 1e-12;
  report(5, one, "single stochastic activity CI = CrI = SSI = 1",
         "CI " + num(x.criticality) + ", CrI - 1 = " + num(x.cruciality - 1) + ", SSI - 1 = " +
             num(x.sensitivity - 1));

  const auto pair = sensitivity_report(simulate(support::serial({UniformDist{2, 6}, UniformDist{2, 6}}), 100'000));
  bool ok = true;
  std::string detail;
  for (const char* id : {"X1", "X2"}) {
    const auto& r = row(pair, id);
    ok = ok && std::abs(r.cruciality - std::sqrt(0.5)) <= 0.02 && std::abs(r.sensitivity - std::sqrt(0.5)) <= 0.02;
    detail += std::string(detail.empty() ? "" : "; ") + id + " CrI " + num(r.cruciality) + " SSI " + num(r.sensitivity);
  }
  report(5, ok, "two serial iid CrI = SSI = 0.707 +- 0.02", detail);
}

void risk_arithmetic() {
  const ProjectSpec base = support::serial({UniformDist{1, 3}, TriangularDist{2, 3, 5}, NormalDist{4, 1}}, 10, 2);
  ProjectSpec certain = base;
  certain.risks.push_back(support::risk("R1", "X2", 1.0, PointDist{5}));
  const auto a = simulate(base, 100'000), b = simulate(certain, 100'000);
  double worst = 0.0, worst_rel = 0.0;
  for (std::size_t k = 0; k < a.runs(); ++k) {
    const double shift = b.project_durations()[k] - a.project_durations()[k];
    worst = std::max(worst, std::abs(shift - 5.0));
    worst_rel = std::max(worst_rel, std::abs(shift - 5.0) / b.project_durations()[k]);
  }
  // (x + 5) + y - (x + y) can differ from 5 by rounding of the sums: allow 4 ulps of PD
  report(6, worst_rel <= 4 * DBL_EPSILON, "certain point(5) risk on the critical path shifts every run by 5",
         "max |shift - 5| " + num(worst) + " (" + num(worst_rel) + " of PD)");

  ProjectSpec gated = base;
  gated.risks.push_back(support::risk("R1", "X2", 0.0, UniformDist{1, 9}));
  gated.risks.push_back(support::risk("C1", "X1", 0.0, PointDist{100}, RiskKind::cost));
  const auto c = simulate(gated, 100'000);
  const auto ra = sensitivity_report(a), rc = sensitivity_report(c);
  bool same = std::equal(a.project_durations().begin(), a.project_durations().end(), c.project_durations().begin()) &&
              std::equal(a.project_costs().begin(), a.project_costs().end(), c.project_costs().begin()) &&
              a.planned_duration() == c.planned_duration() && a.budget() == c.budget() &&
              ra.sigma_duration == rc.sigma_duration;
  for (const auto& r : ra.rows) {
    const auto& o = row(rc, r.id);
    same = same && r.criticality == o.criticality && r.cruciality == o.cruciality && r.sensitivity == o.sensitivity;
  }
  for (double p : report_percentiles())
    same = same && empirical_percentile(a.project_costs(), p) == empirical_percentile(c.project_costs(), p);
  report(6, same, "p = 0 risks leave every statistic identical", "durations, costs, indices, percentiles compared bitwise");
}

void baseline_identities() {
  const auto e = simulate(parse_project(support::fixture("figure3.project")), 100'000);
  const auto b = risk_baselines(e);
  bool monotone = true;
  for (std::size_t j = 1; j < b.srb.size(); ++j) monotone = monotone && b.srb[j] >= b.srb[j - 1];
  double ari = 0.0;
  for (const auto& a : activity_risk_index(b, e.network())) ari += a.percent;
  const double end_gap = std::abs(b.srb_at(e.planned_duration()) - b.sigma_duration);
  const bool ok = b.srb_at(0) == 0.0 && end_gap <= 1e-6 * b.sigma_duration &&
                  std::abs(ari - 100) <= 1e-9 && monotone &&
                  std::abs(b.sigma_duration - sample_sd(e.project_durations())) <= 1e-12 * b.sigma_duration;
  report(7, ok, "SRB(0) = 0, SRB(PD0) = sigma_PD, sum ARI = 100%, SRB monotone",
         "SRB(0) " + num(b.srb_at(0)) + ", |SRB(PD0) - sigma| " + num(end_gap) + ", sum ARI - 100 = " +
             num(ari - 100) + (monotone ? ", monotone" : ", not monotone"));
}

void control_sanity() {
  const ProjectSpec s = support::serial({UniformDist{2, 6}, UniformDist{2, 6}}, 10.0, 2.0);
  const auto e = simulate(s, 100'000);
  const auto b = risk_baselines(e);
  const auto pv = planned_value_curve(e.network(), e.planned());
  double worst_ds = 0.0, worst_dc = 0.0, worst_s = 0.0, worst_c = 0.0;
  for (double t : {0.5, 2.0, 4.0, 5.5, 7.9}) {
    ControlObservation obs;
    obs.time = t;
    obs.earned_value = obs.actual_cost = pv.value_at(t);
    const auto idx = control_indices(obs, b, pv);
    worst_ds = std::max(worst_ds, std::abs(idx.schedule_delay));
    worst_dc = std::max(worst_dc, std::abs(idx.cost_deviation));
    worst_s = std::max(worst_s, std::abs(idx.scoi - b.srb_at(t)));
    worst_c = std::max(worst_c, std::abs(idx.ccoi - b.crb_at(t)));
  }
  // earned schedule inverts the interpolated PV, so D_s is zero up to rounding
  const double tol = 1e-12 * e.planned_duration();
  report(8, worst_ds <= tol && worst_dc == 0.0 && worst_s <= tol && worst_c == 0.0,
         "on-plan observation gives D_s = D_c = 0, SCoI = SRB(t), CCoI = CRB(t)",
         "max |D_s| " + num(worst_ds) + ", max |D_c| " + num(worst_dc) + ", max |SCoI - SRB| " + num(worst_s));

  const double t = e.planned_duration() / 2;
  ControlObservation obs;
  obs.time = t;
  obs.earned_value = obs.actual_cost = pv.value_at(t);
  const auto r = triad(obs, e);
  report(8, std::abs(r.fraction - 0.5) <= 1e-12 && std::abs(r.schedule_percentile - 50) <= 3 &&
                std::abs(r.cost_percentile - 50) <= 3,
         "on-plan Triad percentiles of a symmetric serial project at x = 0.5 are 50 +- 3",
         "x " + num(r.fraction) + ", schedule " + num(r.schedule_percentile) + ", cost " + num(r.cost_percentile));
}

void sevm_limits() {
  ProjectSpec s = support::serial({UniformDist{2, 6}, TriangularDist{1, 3, 4}}, 10.0, 2.0);
  s.risks.push_back(support::risk("C1", "X2", 0.4, UniformDist{3, 9}, RiskKind::cost));
  const auto e = simulate(s, 100'000);
  const auto pv = planned_value_curve(e.network(), e.planned());
  ControlObservation obs;
  obs.time = 3;
  obs.earned_value = pv.value_at(2.5);
  obs.actual_cost = obs.earned_value * 1.2;
  SevmOptions all;
  all.neighbors = e.runs();
  const auto f = sevm_forecast(obs, e, all);
  const double md = sample_mean(e.project_durations()), mc = sample_mean(e.project_costs());
  const double rd = std::abs(f.duration_estimate - md) / md, rc = std::abs(f.cost_estimate - mc) / mc;
  report(9, rd <= 1e-12 && rc <= 1e-12, "k = n_runs reproduces mean PD and mean C",
         "relative gaps " + num(rd) + ", " + num(rc));

  const auto fixed = simulate(support::serial({PointDist{2}, PointDist{3}}, 4.0, 1.0), 1000);
  ControlObservation o2;
  o2.time = 2;
  o2.earned_value = o2.actual_cost = 6;
  const auto d = sevm_forecast(o2, fixed);
  bool degenerate = d.probability_late == 0.0;
  for (const auto& i : d.intervals)
    degenerate = degenerate && i.duration == fixed.planned_duration() && i.cost == fixed.budget();
  report(9, degenerate, "deterministic project gives P(late) = 0 and degenerate intervals",
         "P(late) " + num(d.probability_late) + ", " + std::to_string(d.intervals.size()) + " intervals at (" +
             num(fixed.planned_duration()) + ", " + num(fixed.budget()) + ")");

  const auto g = sevm_forecast(obs, e);
  std::size_t mismatches = 0, late = 0;
  for (const auto& n : g.neighbors) {
    mismatches += n.late != (e.project_durations()[n.run] > e.planned_duration());
    late += n.late;
  }
  report(9, mismatches == 0 && !g.neighbors.empty(), "late/early labels partition neighbours by PD^k vs PD0",
         std::to_string(late) + " late of " + std::to_string(g.neighbors.size()) + ", " +
             std::to_string(mismatches) + " mismatches");
}

void contingency() {
  // sum of four normal(10,2): median = mean, density at the median 1/(sigma sqrt(2 pi))
  const std::size_t n = 100'000;
  const auto e = simulate(support::serial(std::vector<Distribution>(4, NormalDist{10, 2}), 0.0, 1.0), n);
  const double sigma = std::sqrt(4 * 4.0);
  const double se_median = sigma * std::sqrt(std::acos(-1.0) / 2) / std::sqrt(static_cast<double>(n));
  bool ok = true;
  std::string detail;
  for (auto dim : {Dimension::duration, Dimension::cost}) {
    const double r50 = contingency_reserve(e, 50, dim);
    ok = ok && std::abs(r50) <= 3 * se_median;
    double prev = r50;
    for (double p : {75.0, 90.0, 95.0, 99.0}) {
      const double r = contingency_reserve(e, p, dim);
      ok = ok && r >= prev;
      prev = r;
    }
    detail += std::string(detail.empty() ? "" : "; ") + (dim == Dimension::cost ? "cost" : "duration") +
              " reserve(50) " + num(r50) + ", reserve(99) " + num(prev);
  }
  report(10, ok, "p = 50 reserve within 3 standard errors of the median, monotone over 50..99",
         detail + "; 3 SE " + num(3 * se_median));
}

}  // namespace

int main() {
  try {
    determinism();
    oracle_equivalence();
    serial_normals();
    merge_bias();
    index_identities();
    risk_arithmetic();
    baseline_identities();
    control_sanity();
    sevm_limits();
    contingency();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance run aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures << " failing checks" << std::endl;
  return failures;
}
