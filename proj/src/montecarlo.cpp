#include "schedrisk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "schedrisk/error.hpp"

namespace schedrisk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::size_t kBlock = 256;

double window_fraction(double t, double start, double dur) {
  if (t >= start + dur) return 1.0;
  if (!(dur > 0.0)) return 0.0;
  const double f = (t - start) / dur;
  return f > 0.0 ? (f < 1.0 ? f : 1.0) : 0.0;
}

template <class Fn>
void parallel_blocks(std::size_t blocks, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, blocks));
  if (threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) fn(b);
    });
}

}  // namespace

double sample(const Distribution& dist, Stream& stream) {
  return std::visit(
      Overloaded{
          [](const PointDist& d) { return d.value; },
          [&](const DiscreteDist& d) {
            const double u = stream.uniform();
            double cumulative = 0.0;
            for (const auto& [v, p] : d.atoms) {
              cumulative += p;
              if (u < cumulative) return v;
            }
            return d.atoms.back().first;
          },
          [&](const UniformDist& d) { return d.low + (d.high - d.low) * stream.uniform(); },
          [&](const TriangularDist& d) {
            const double span = d.high - d.low;
            if (span == 0.0) return d.low;
            const double u = stream.uniform();
            const double split = (d.mode - d.low) / span;
            if (u < split) return d.low + std::sqrt(u * span * (d.mode - d.low));
            return d.high - std::sqrt((1.0 - u) * span * (d.high - d.mode));
          },
          [&](const NormalDist& d) {
            if (d.sigma == 0.0) return d.mu;
            std::normal_distribution<double> normal(d.mu, d.sigma);
            double x;
            do {
              x = normal(stream);
            } while (x < 0.0);
            return x;
          },
          [&](const PertDist& d) {
            const double span = d.high - d.low;
            if (span == 0.0) return d.low;
            const double alpha = 1.0 + 4.0 * (d.mode - d.low) / span;
            const double beta = 1.0 + 4.0 * (d.high - d.mode) / span;
            std::gamma_distribution<double> ga(alpha, 1.0), gb(beta, 1.0);
            const double x = ga(stream);
            const double y = gb(stream);
            return d.low + span * (x / (x + y));
          },
      },
      dist);
}

double Ensemble::cost_at(std::size_t run, double t) const {
  double c = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i) {
    const std::size_t at = i * runs_ + run;
    c = c + node_costs_[at] * window_fraction(t, starts_[at], durations_[at]);
  }
  return c;
}

double Ensemble::earned_value_at(std::size_t run, double t) const {
  double ev = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i) {
    const std::size_t at = i * runs_ + run;
    ev = ev + planned_values_[i] * window_fraction(t, starts_[at], durations_[at]);
  }
  return ev;
}

Ensemble run_ensemble(const ValidatedNetwork& network, const SimConfig& cfg) {
  if (cfg.runs == 0) throw Error(ErrorCode::ConfigError, "number of runs must be >= 1");
  if (cfg.trajectory_grid < 2)
    throw Error(ErrorCode::ConfigError, "trajectory grid needs >= 2 points");
  if (cfg.horizon && !(*cfg.horizon > 0.0))
    throw Error(ErrorCode::ConfigError, "trajectory horizon must be > 0");

  const kernels::Table& k = cfg.isa ? kernels::table(*cfg.isa) : kernels::active();
  const std::size_t threads =
      cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());

  Ensemble e(network);
  const ValidatedNetwork& net = e.network_;
  const std::size_t n = net.size();
  const std::size_t runs = cfg.runs;
  e.runs_ = runs;
  e.planned_ = plan(net, cfg.criticality_tolerance);
  e.planned_values_ = net.planned_values();
  e.durations_.assign(n * runs, 0.0);
  e.starts_.assign(n * runs, 0.0);
  e.node_costs_.assign(n * runs, 0.0);
  e.critical_.assign(n * runs, 0);
  e.project_durations_.assign(runs, 0.0);
  e.project_costs_.assign(runs, 0.0);

  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = hash_id(net.node(i).id);
    if (net.node(i).kind == NodeKind::duration_risk)
      e.risks_.push_back({net.node(i).id, RiskKind::duration, i, std::vector<std::uint8_t>(runs),
                          std::vector<double>(runs)});
  }
  const std::size_t duration_risks = e.risks_.size();
  for (const auto& c : net.cost_risks())
    e.risks_.push_back(
        {c.id, RiskKind::cost, c.node, std::vector<std::uint8_t>(runs), std::vector<double>(runs)});

  const std::size_t blocks = (runs + kBlock - 1) / kBlock;
  const std::uint64_t seed = cfg.seed;

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    const std::size_t k0 = b * kBlock;
    const std::size_t width = std::min(kBlock, runs - k0);
    std::vector<double> ef(n * width), ls(n * width), lf(n * width);

    std::size_t risk_slot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const NetworkNode& node = net.node(i);
      double* d = e.durations_.data() + i * runs + k0;
      if (node.kind == NodeKind::activity) {
        for (std::size_t r = 0; r < width; ++r) {
          Stream s(seed, k0 + r, keys[i], static_cast<std::uint64_t>(Slot::duration));
          d[r] = sample(node.law, s);
        }
      } else {
        RiskTrace& trace = e.risks_[risk_slot++];
        for (std::size_t r = 0; r < width; ++r) {
          Stream gate(seed, k0 + r, keys[i], static_cast<std::uint64_t>(Slot::gate));
          const bool on = gate.uniform() < node.gate_probability;
          double x = 0.0;
          if (on) {
            Stream impact(seed, k0 + r, keys[i], static_cast<std::uint64_t>(Slot::impact));
            x = sample(node.law, impact);
          }
          d[r] = x;
          trace.active[k0 + r] = on;
          trace.amount[k0 + r] = x;
        }
      }
    }

    batch_forward_backward(
        net, k, NodeRows<const double>{e.durations_.data() + k0, runs, width},
        NodeRows<double>{e.starts_.data() + k0, runs, width}, NodeRows<double>{ef.data(), width, width},
        NodeRows<double>{ls.data(), width, width}, NodeRows<double>{lf.data(), width, width},
        NodeRows<std::uint8_t>{e.critical_.data() + k0, runs, width}, cfg.criticality_tolerance);
    std::copy_n(ef.data() + net.sink() * width, width, e.project_durations_.data() + k0);

    for (std::size_t i = 0; i < n; ++i) {
      const NetworkNode& node = net.node(i);
      std::span<double> cost(e.node_costs_.data() + i * runs + k0, width);
      k.affine(cost, node.fixed_cost, node.variable_cost_rate,
               std::span<const double>(e.durations_.data() + i * runs + k0, width));
    }
    for (std::size_t c = 0; c < net.cost_risks().size(); ++c) {
      const CostRiskAttachment& att = net.cost_risks()[c];
      RiskTrace& trace = e.risks_[duration_risks + c];
      const std::uint64_t key = hash_id(att.id);
      for (std::size_t r = 0; r < width; ++r) {
        Stream gate(seed, k0 + r, key, static_cast<std::uint64_t>(Slot::gate));
        const bool on = gate.uniform() < att.probability;
        double x = 0.0;
        if (on) {
          Stream impact(seed, k0 + r, key, static_cast<std::uint64_t>(Slot::impact));
          x = sample(att.impact, impact);
        }
        trace.active[k0 + r] = on;
        trace.amount[k0 + r] = x;
      }
      std::span<double> cost(e.node_costs_.data() + att.node * runs + k0, width);
      k.add(cost, cost, std::span<const double>(trace.amount.data() + k0, width));
    }
    std::span<double> total(e.project_costs_.data() + k0, width);
    for (std::size_t i = 0; i < n; ++i)
      k.add(total, total, std::span<const double>(e.node_costs_.data() + i * runs + k0, width));
  });

  if (!cfg.store_trajectories) return e;

  const double longest = *std::max_element(e.project_durations_.begin(), e.project_durations_.end());
  double horizon = cfg.horizon.value_or(1.5 * e.planned_.duration);
  if (!(horizon > 0.0)) horizon = longest > 0.0 ? longest : 1.0;
  const double step = horizon / static_cast<double>(cfg.trajectory_grid - 1);
  std::size_t points = cfg.trajectory_grid;
  while (static_cast<double>(points - 1) * step < longest) ++points;

  e.trajectory_times_.resize(points);
  for (std::size_t j = 0; j < points; ++j) e.trajectory_times_[j] = static_cast<double>(j) * step;
  e.cost_trajectory_.assign(points * runs, 0.0);
  e.ev_trajectory_.assign(points * runs, 0.0);

  parallel_blocks(blocks, threads, [&](std::size_t b) {
    const std::size_t k0 = b * kBlock;
    const std::size_t width = std::min(kBlock, runs - k0);
    std::vector<double> weight(width);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(weight.begin(), weight.end(), e.planned_values_[i]);
      const std::span<const double> start(e.starts_.data() + i * runs + k0, width);
      const std::span<const double> dur(e.durations_.data() + i * runs + k0, width);
      const std::span<const double> cost(e.node_costs_.data() + i * runs + k0, width);
      for (std::size_t j = 0; j < points; ++j) {
        const double t = e.trajectory_times_[j];
        k.accrue(std::span<double>(e.cost_trajectory_.data() + j * runs + k0, width), t, start, dur,
                 cost);
        k.accrue(std::span<double>(e.ev_trajectory_.data() + j * runs + k0, width), t, start, dur,
                 weight);
      }
    }
  });
  return e;
}

}  // namespace schedrisk
