#pragma once

#include "hmhf/fe_space.hpp"

#include <functional>
#include <span>

namespace hmhf {

/// Quadrature point handed to weight callbacks during assembly.
struct QuadPoint {
    int element = 0;
    int q = 0;
    double jxw = 0.0;
    Point2 x;
    std::span<const int> dofs;
    std::span<const double> phi;
    std::span<const Point2> grad;

    /// Value / gradient of component `c` of `f` at this point; f must live on
    /// the same scalar space as the one being assembled.
    [[nodiscard]] double value(const FeFunction& f, int c = 0) const;
    [[nodiscard]] Point2 gradient(const FeFunction& f, int c = 0) const;
    /// Sum over components of |grad f_c|^2.
    [[nodiscard]] double gradient_norm2(const FeFunction& f) const;
};

using WeightFn = std::function<double(const QuadPoint&)>;

/// Scalar matrices act on the scalar basis of `space`; vector-valued
/// operators are componentwise copies.
SparseMatrix assemble_weighted_mass(const FeSpace& space, const WeightFn& weight);
SparseMatrix assemble_mass(const FeSpace& space);
SparseMatrix assemble_stiffness(const FeSpace& space);

/// Entries int 1/r phi_j' phi_i dr on a scalar interval space (row i, column j).
SparseMatrix assemble_convection_1d(const FeSpace& space);

/// Nodal weights beta_z = int phi_z of the linear space.
struct LumpedMass {
    Vector weights;
    [[nodiscard]] double inner(const FeFunction& a, const FeFunction& b) const;
    [[nodiscard]] double norm(const FeFunction& a) const;
};

LumpedMass lumped_mass(const FeSpace& space);

/// g(z) = -(K u)(z) / beta_z per component, at every node.
FeFunction discrete_laplacian(const FeSpace& space, const FeFunction& u, const LumpedMass& lumped);
FeFunction discrete_laplacian(const SparseMatrix& stiffness, const FeFunction& u, const LumpedMass& lumped);

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;       // full norm
    double h1_semi = 0.0;  // gradient part only
};

/// Norms of a - b, both on the same space.
ErrorNorms error_norms(const FeFunction& a, const FeFunction& b);

/// Norms of u minus an exact field with known gradient (scalar spaces).
ErrorNorms error_norms(const FeFunction& u, const std::function<double(const Point2&)>& exact,
                       const std::function<Point2(const Point2&)>& exact_gradient);

/// Half the Dirichlet energy, 1/2 int |grad u|^2, summed over components.
double dirichlet_energy(const SparseMatrix& stiffness, const FeFunction& u);

/// Copy of A restricted to the rows/columns whose map entry is >= 0; map
/// values give the new index.
SparseMatrix restrict_matrix(const SparseMatrix& a, std::span<const int> row_map, std::span<const int> col_map);

/// Full scalar index -> position in space.interior_dofs(), or -1.
std::vector<int> interior_index_map(const FeSpace& space);

/// Three copies of a scalar matrix acting on interleaved 3-vectors.
SparseMatrix expand_components(const SparseMatrix& scalar, int value_dim);

}  // namespace hmhf
