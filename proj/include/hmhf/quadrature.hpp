#pragma once

#include <Eigen/Core>

#include <vector>

namespace hmhf {

/// Gauss-Legendre rule on [0, 1] (weights sum to 1).
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
};

LineRule gauss_legendre(int n_points);

/// Symmetric rule on the reference triangle in barycentric coordinates;
/// weights sum to the reference area 1/2.
struct TriangleRule {
    std::vector<Eigen::Vector3d> points;
    std::vector<double> weights;
    int degree = 0;
};

/// Smallest tabulated rule exact for the requested degree (supports <= 6).
TriangleRule triangle_rule(int degree);

}  // namespace hmhf
