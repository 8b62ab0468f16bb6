#pragma once

#include "hmhf/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace hmhf {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

namespace detail {
struct Discretization;
}

/// Continuous Lagrange space of degree 1 or 2 on an interval or disk mesh,
/// scalar (value_dim 1) or with three components (value_dim 3).
///
/// Scalar dofs come first in a fixed order: for intervals, dof 2i is node i
/// and dof 2e + 1 the midpoint of element e when p = 2; for disks, vertices
/// first, then edges in order of first appearance. Vector coefficients are
/// interleaved, coefficient d * dof + c. On disks with p = 2 the geometry
/// is isoparametric whenever the mesh carries curved edges; p = 1 always
/// uses the polygonal (affine) geometry.
///
/// Copies share the underlying discretization data.
class FeSpace {
public:
    static FeSpace interval(std::shared_ptr<const IntervalMesh> mesh, int degree, int value_dim = 1);
    static FeSpace disk(std::shared_ptr<const DiskMesh> mesh, int degree, int value_dim = 1);

    [[nodiscard]] FeSpace with_value_dim(int value_dim) const;
    [[nodiscard]] FeSpace scalar() const { return with_value_dim(1); }

    [[nodiscard]] int degree() const;
    [[nodiscard]] int value_dim() const { return value_dim_; }
    [[nodiscard]] int spatial_dim() const;
    [[nodiscard]] int num_scalar_dofs() const;
    [[nodiscard]] int num_dofs() const { return num_scalar_dofs() * value_dim_; }

    [[nodiscard]] const std::vector<Point2>& dof_coords() const;
    [[nodiscard]] const std::vector<int>& boundary_dofs() const;
    [[nodiscard]] const std::vector<int>& interior_dofs() const;
    [[nodiscard]] bool is_boundary(int scalar_dof) const;

    [[nodiscard]] int num_elements() const;
    [[nodiscard]] int dofs_per_element() const;
    [[nodiscard]] std::span<const int> element_dofs(int element) const;

    // Quadrature cache, flattened over (element, point).
    [[nodiscard]] int points_per_element() const;
    [[nodiscard]] double jxw(int element, int q) const;
    [[nodiscard]] const Point2& point(int element, int q) const;
    [[nodiscard]] std::span<const double> shape_values(int q) const;
    [[nodiscard]] std::span<const Point2> shape_gradients(int element, int q) const;

    /// Zero-valued scalar matrix holding the element connectivity pattern.
    [[nodiscard]] const SparseMatrix& pattern() const;
    /// dofs_per_element^2 offsets into pattern().valuePtr(), row-major in local indices.
    [[nodiscard]] std::span<const int> element_value_positions(int element) const;

    [[nodiscard]] const IntervalMesh* interval_mesh() const;
    [[nodiscard]] const DiskMesh* disk_mesh() const;

    /// Same discretization object and value dimension.
    [[nodiscard]] bool operator==(const FeSpace& other) const;
    /// Same discretization object, value dimension ignored.
    [[nodiscard]] bool same_scalar_space(const FeSpace& other) const;

private:
    FeSpace(std::shared_ptr<const detail::Discretization> impl, int value_dim);

    std::shared_ptr<const detail::Discretization> impl_;
    int value_dim_ = 1;
};

/// Coefficient vector bound to a space.
class FeFunction {
public:
    explicit FeFunction(FeSpace space);
    FeFunction(FeSpace space, Vector coefficients);

    [[nodiscard]] const FeSpace& space() const { return space_; }
    [[nodiscard]] const Vector& coefficients() const { return coeffs_; }
    [[nodiscard]] Vector& coefficients() { return coeffs_; }

    [[nodiscard]] Vector component(int c) const;
    void set_component(int c, const Vector& values);

    /// Nodal value of a three-component function.
    [[nodiscard]] Eigen::Vector3d node_value(int scalar_dof) const;
    void set_node_value(int scalar_dof, const Eigen::Vector3d& value);

private:
    FeSpace space_;
    Vector coeffs_;
};

using ScalarField = std::function<double(const Point2&)>;
using VectorField = std::function<Eigen::Vector3d(const Point2&)>;

/// Nodal interpolation; for interval spaces the point is (r, 0).
FeFunction interpolate(const FeSpace& space, const ScalarField& f);
FeFunction interpolate_vector(const FeSpace& space, const VectorField& f);

/// Point evaluation of a scalar function on an interval space.
double evaluate_1d(const FeFunction& u, double r);
/// Value and d/dr.
std::pair<double, double> evaluate_1d_with_derivative(const FeFunction& u, double r);

}  // namespace hmhf
