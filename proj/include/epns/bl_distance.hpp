#pragma once

#include <array>
#include <vector>

#include "epns/errors.hpp"

namespace epns {

// Discrete measure on the torus: weighted points (weights >= 0).
struct DiscreteMeasure {
    std::vector<std::array<double, 2>> points;  // coordinates in [0, 2pi)^d
    std::vector<double> weights;
    int dim = 2;
};

// Geodesic distance on the torus of period 2pi per dimension.
double torus_distance(const std::array<double, 2>& a, const std::array<double, 2>& b, int dim);

// Bounded-Lipschitz (flat) distance between two small discrete measures,
// solved exactly as the dual linear program over test-function node values
// (|phi| <= 1, Lipschitz constraints from pairwise torus distances).
// Oracle scale only: at most 64 combined support points.
double bl_distance_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

} // namespace epns
