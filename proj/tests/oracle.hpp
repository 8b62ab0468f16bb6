#pragma once

// Brute-force dense reimplementation of the discretizations, written
// against textbook formulas only: own Lagrange bases, tensor Gauss rules
// from boost (collapsed onto triangles), dense LU. Dofs are matched to the
// library's numbering by coordinates. Polygonal disk meshes only.

#include "hmhf/fe_space.hpp"
#include "hmhf/hmhf2d.hpp"
#include "hmhf/rshmhf.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracle {

using Dense = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// One element with its global dofs in local order (vertices, then edge
/// midpoints 01, 12, 20 for p = 2).
struct Element1d {
    double a = 0.0;
    double b = 0.0;
    std::vector<int> dofs;
};

struct Element2d {
    Eigen::Vector2d v[3];
    std::vector<int> dofs;
};

std::vector<Element1d> elements_1d(const hmhf::FeSpace& V);
std::vector<Element2d> elements_2d(const hmhf::FeSpace& V);

/// Local basis values / derivatives at a point.
void basis_1d(int p, double a, double b, double x, std::vector<double>& phi, std::vector<double>& dphi);
void basis_2d(int p, const Element2d& e, const Eigen::Vector2d& x, std::vector<double>& phi,
              std::vector<Eigen::Vector2d>& grad);

struct QuadPoint {
    double x = 0.0;   // 1D
    Eigen::Vector2d y;  // 2D
    double w = 0.0;
};

std::vector<QuadPoint> rule_1d(double a, double b);
std::vector<QuadPoint> rule_2d(const Element2d& e);

/// Dense mass and stiffness on the scalar space of V.
Dense mass_1d(const hmhf::FeSpace& V, const std::function<double(double x, double uval)>& weight,
              const Vec* coeff = nullptr);
Dense stiffness_1d(const hmhf::FeSpace& V);
Dense convection_1d(const hmhf::FeSpace& V);  // int 1/r phi_j' phi_i
Dense mass_2d(const hmhf::FeSpace& V, const std::function<double(const Eigen::Vector2d&)>& weight);
Dense stiffness_2d(const hmhf::FeSpace& V);

/// Evaluation of a scalar coefficient vector (or one component of an
/// interleaved vector) with the oracle basis.
double eval_2d(const hmhf::FeSpace& V, const Vec& coeff, int comp, int ncomp, const Eigen::Vector2d& x,
               Eigen::Vector2d* grad = nullptr);

/// Boundary scalar dofs, identified geometrically.
std::vector<bool> boundary_1d(const hmhf::FeSpace& V);
std::vector<bool> boundary_2d(const hmhf::FeSpace& V);

/// Solve A x = b on the free dofs with x fixed to `fixed` on the others.
Vec dirichlet_solve(const Dense& a, const Vec& b, const std::vector<bool>& is_fixed, const Vec& fixed);

Vec rshmhf_step(const hmhf::Rshmhf1dProblem& pb, const std::vector<Vec>& history, int k);
Vec ppfem_step(const hmhf::Hmhf2dProblem& pb, const std::vector<Vec>& history, int k);

struct TfemResult {
    Vec u_next;
    Vec udot;
    Vec lambda;  // scalar, full length, zero on the boundary
};
TfemResult tfem_step(const hmhf::Hmhf2dProblem& pb, const std::vector<Vec>& history, int k);

/// Midpoint step solved by Newton's method (not by the fixed point).
Vec bfem_step(const hmhf::Hmhf2dProblem& pb, const Vec& u_prev);

/// beta_z = int phi_z, and the discrete Laplacian -K u / beta per component.
Vec lumped_weights(const hmhf::FeSpace& V);
Vec discrete_laplacian(const hmhf::FeSpace& V, const Vec& u);

/// L2 and full H1 norm of the difference of two interleaved fields.
std::pair<double, double> error_norms_2d(const hmhf::FeSpace& V, const Vec& a, const Vec& b);

}  // namespace oracle
