#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

namespace hmhf {

using Point2 = Eigen::Vector2d;

/// Uniform partition of [0, 1].
struct IntervalMesh {
    int n_elems = 0;
    std::vector<double> nodes;
    double h = 0.0;
};

/// Requires n >= 2.
IntervalMesh build_interval_mesh(int n);

/// A triangle edge lying on the unit circle.
struct BoundaryEdge {
    int triangle = -1;
    int local_edge = -1;  // edge e joins local vertices e and (e + 1) % 3
    int v0 = -1;
    int v1 = -1;
    int geometry_degree = 1;  // 2 when the owning triangle is mapped quadratically
    Point2 midpoint;          // chord midpoint projected onto the circle
};

/// Concentric-ring triangulation of the closed unit disk.
///
/// Ring j = 1..2^level sits at radius j / 2^level and carries 6 j vertices
/// spaced uniformly in angle; vertex 0 is the center. All triangles are
/// counterclockwise. With `isoparametric` set, every triangle owning a
/// boundary edge gets a quadratic geometry map through the projected edge
/// midpoint, all other triangles stay affine.
struct DiskMesh {
    int level = 0;
    bool isoparametric = false;
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_vertices;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<int> triangle_boundary_edge;  // index into boundary_edges, or -1
    double h = 0.0;                           // max element diameter

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles.size()); }
    [[nodiscard]] bool is_curved(int tri) const;
};

DiskMesh build_disk_mesh(int level, bool isoparametric);

/// Closed-form vertex count 1 + 3 N (N + 1), N = 2^level.
long disk_mesh_vertex_count(int level);

struct MappedPoint {
    Point2 x;
    Eigen::Matrix2d jacobian;  // d x / d (xi, eta), with (xi, eta) = (lambda1, lambda2)
    double det = 0.0;
};

/// Maps barycentric coordinates of the reference triangle to the physical
/// element. Throws DegenerateElement on a non-positive Jacobian.
MappedPoint geometry_map(const DiskMesh& mesh, int tri, const Eigen::Vector3d& barycentric);

/// Physical position of the six P2 geometry nodes of a triangle: vertices
/// 0..2, then midpoints of local edges 0..2 (projected for a curved edge).
std::array<Point2, 6> geometry_nodes(const DiskMesh& mesh, int tri);

double triangle_inradius(const Point2& a, const Point2& b, const Point2& c);

/// ASCII dump, sections in order:
///   vertices <N>            then N lines "<id> <x> <y>"
///   triangles <M>           then M lines "<id> <v0> <v1> <v2>"
///   boundary_vertices <K>   then K lines "<v>"
///   curved_edges <L>        then L lines "<tri> <local_edge> <v0> <v1> <degree> <mx> <my>"
void write_mesh(std::ostream& os, const DiskMesh& mesh);

}  // namespace hmhf
