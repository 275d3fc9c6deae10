#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace schedrisk {

struct PointDist {
  double value = 0.0;
};

/// Finite law given as (value, probability) atoms.
struct DiscreteDist {
  std::vector<std::pair<double, double>> atoms;
};

struct UniformDist {
  double low = 0.0;
  double high = 0.0;
};

struct TriangularDist {
  double low = 0.0;
  double mode = 0.0;
  double high = 0.0;
};

/// Normal law truncated at zero (negative draws are resampled).
struct NormalDist {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Beta-PERT on [low, high] with shape 4.
struct PertDist {
  double low = 0.0;
  double mode = 0.0;
  double high = 0.0;
};

using Distribution =
    std::variant<PointDist, DiscreteDist, UniformDist, TriangularDist, NormalDist, PertDist>;

inline constexpr double kDiscreteProbabilityTolerance = 1e-9;

/// Empty when the parameters are admissible for a non-negative quantity,
/// otherwise a short description of the violated constraint.
std::string check_params(const Distribution& dist);

/// Analytic mean of the law actually sampled.
double mean(const Distribution& dist);

/// Analytic variance; used by oracles and diagnostics.
double variance(const Distribution& dist);

bool is_point(const Distribution& dist);

/// Canonical text form, e.g. `triangular(1, 2, 4)`. Numbers use the shortest
/// representation that round-trips.
std::string render(const Distribution& dist);

bool operator==(const PointDist&, const PointDist&);
bool operator==(const DiscreteDist&, const DiscreteDist&);
bool operator==(const UniformDist&, const UniformDist&);
bool operator==(const TriangularDist&, const TriangularDist&);
bool operator==(const NormalDist&, const NormalDist&);
bool operator==(const PertDist&, const PertDist&);

std::string format_number(double value);

}  // namespace schedrisk
