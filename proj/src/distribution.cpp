#include "schedrisk/distribution.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace schedrisk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Hazard ratio phi(alpha) / (1 - Phi(alpha)) at alpha = -mu / sigma.
double truncation_ratio(const NormalDist& d) {
  const double alpha = -d.mu / d.sigma;
  const double pdf = std::exp(-0.5 * alpha * alpha) / std::sqrt(2.0 * std::numbers::pi);
  const double tail = 0.5 * std::erfc(alpha / std::numbers::sqrt2);
  return pdf / tail;
}

std::pair<double, double> pert_shape(const PertDist& d) {
  const double span = d.high - d.low;
  return {1.0 + 4.0 * (d.mode - d.low) / span, 1.0 + 4.0 * (d.high - d.mode) / span};
}

bool finite(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::string check_params(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const PointDist& d) -> std::string {
            if (!finite({d.value})) return "point value must be finite";
            if (d.value < 0) return "point value must be >= 0";
            return {};
          },
          [](const DiscreteDist& d) -> std::string {
            if (d.atoms.empty()) return "discrete law needs at least one atom";
            double total = 0.0;
            for (const auto& [v, p] : d.atoms) {
              if (!finite({v, p})) return "discrete atoms must be finite";
              if (v < 0) return "discrete values must be >= 0";
              if (!(p > 0)) return "discrete probabilities must be > 0";
              total += p;
            }
            if (std::abs(total - 1.0) > kDiscreteProbabilityTolerance)
              return "discrete probabilities must sum to 1";
            return {};
          },
          [](const UniformDist& d) -> std::string {
            if (!finite({d.low, d.high})) return "uniform bounds must be finite";
            if (d.low < 0) return "uniform lower bound must be >= 0";
            if (d.low > d.high) return "uniform requires low <= high";
            return {};
          },
          [](const TriangularDist& d) -> std::string {
            if (!finite({d.low, d.mode, d.high})) return "triangular parameters must be finite";
            if (d.low < 0) return "triangular lower bound must be >= 0";
            if (!(d.low <= d.mode && d.mode <= d.high))
              return "triangular requires low <= mode <= high";
            return {};
          },
          [](const NormalDist& d) -> std::string {
            if (!finite({d.mu, d.sigma})) return "normal parameters must be finite";
            if (d.sigma < 0) return "normal sigma must be >= 0";
            if (d.mu < 0) return "normal mu must be >= 0 (draws are truncated at 0)";
            return {};
          },
          [](const PertDist& d) -> std::string {
            if (!finite({d.low, d.mode, d.high})) return "pert parameters must be finite";
            if (d.low < 0) return "pert lower bound must be >= 0";
            if (!(d.low <= d.mode && d.mode <= d.high)) return "pert requires low <= mode <= high";
            return {};
          },
      },
      dist);
}

double mean(const Distribution& dist) {
  return std::visit(Overloaded{
                        [](const PointDist& d) { return d.value; },
                        [](const DiscreteDist& d) {
                          double m = 0.0;
                          for (const auto& [v, p] : d.atoms) m += v * p;
                          return m;
                        },
                        [](const UniformDist& d) { return 0.5 * (d.low + d.high); },
                        [](const TriangularDist& d) { return (d.low + d.mode + d.high) / 3.0; },
                        [](const NormalDist& d) {
                          if (d.sigma == 0.0) return d.mu;
                          return d.mu + d.sigma * truncation_ratio(d);
                        },
                        [](const PertDist& d) { return (d.low + 4.0 * d.mode + d.high) / 6.0; },
                    },
                    dist);
}

double variance(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const PointDist&) { return 0.0; },
          [](const DiscreteDist& d) {
            const double m = mean(d);
            double v = 0.0;
            for (const auto& [x, p] : d.atoms) v += p * (x - m) * (x - m);
            return v;
          },
          [](const UniformDist& d) { return (d.high - d.low) * (d.high - d.low) / 12.0; },
          [](const TriangularDist& d) {
            const double a = d.low, c = d.mode, b = d.high;
            return (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
          },
          [](const NormalDist& d) {
            if (d.sigma == 0.0) return 0.0;
            const double alpha = -d.mu / d.sigma;
            const double lambda = truncation_ratio(d);
            return d.sigma * d.sigma * (1.0 + alpha * lambda - lambda * lambda);
          },
          [](const PertDist& d) {
            if (d.high == d.low) return 0.0;
            const auto [a, b] = pert_shape(d);
            const double span = d.high - d.low;
            return span * span * a * b / ((a + b) * (a + b) * (a + b + 1.0));
          },
      },
      dist);
}

bool is_point(const Distribution& dist) {
  return std::visit(Overloaded{
                        [](const PointDist&) { return true; },
                        [](const DiscreteDist& d) { return d.atoms.size() == 1; },
                        [](const UniformDist& d) { return d.low == d.high; },
                        [](const TriangularDist& d) { return d.low == d.high; },
                        [](const NormalDist& d) { return d.sigma == 0.0; },
                        [](const PertDist& d) { return d.low == d.high; },
                    },
                    dist);
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string render(const Distribution& dist) {
  auto list = [](std::string_view name, std::initializer_list<double> xs) {
    std::string out(name);
    out += '(';
    bool first = true;
    for (double x : xs) {
      if (!first) out += ", ";
      out += format_number(x);
      first = false;
    }
    out += ')';
    return out;
  };
  return std::visit(Overloaded{
                        [&](const PointDist& d) { return list("point", {d.value}); },
                        [](const DiscreteDist& d) {
                          std::string out = "discrete(";
                          for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                            if (i) out += ", ";
                            out += format_number(d.atoms[i].first) + ":" +
                                   format_number(d.atoms[i].second);
                          }
                          return out + ")";
                        },
                        [&](const UniformDist& d) { return list("uniform", {d.low, d.high}); },
                        [&](const TriangularDist& d) {
                          return list("triangular", {d.low, d.mode, d.high});
                        },
                        [&](const NormalDist& d) { return list("normal", {d.mu, d.sigma}); },
                        [&](const PertDist& d) { return list("pert", {d.low, d.mode, d.high}); },
                    },
                    dist);
}

bool operator==(const PointDist& a, const PointDist& b) { return a.value == b.value; }
bool operator==(const DiscreteDist& a, const DiscreteDist& b) { return a.atoms == b.atoms; }
bool operator==(const UniformDist& a, const UniformDist& b) {
  return a.low == b.low && a.high == b.high;
}
bool operator==(const TriangularDist& a, const TriangularDist& b) {
  return a.low == b.low && a.mode == b.mode && a.high == b.high;
}
bool operator==(const NormalDist& a, const NormalDist& b) {
  return a.mu == b.mu && a.sigma == b.sigma;
}
bool operator==(const PertDist& a, const PertDist& b) {
  return a.low == b.low && a.mode == b.mode && a.high == b.high;
}

}  // namespace schedrisk
