#include "hmhf/mesh.hpp"

#include "hmhf/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

namespace hmhf {

IntervalMesh build_interval_mesh(int n)
{
    if (n < 2) {
        throw InvalidArgument("build_interval_mesh: need at least 2 elements, got " + std::to_string(n));
    }
    IntervalMesh mesh;
    mesh.n_elems = n;
    mesh.h = 1.0 / n;
    mesh.nodes.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        mesh.nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    }
    return mesh;
}

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

void push_ccw(std::vector<std::array<int, 3>>& tris, const std::vector<Point2>& v, int a, int b, int c)
{
    if (signed_area(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)], v[static_cast<std::size_t>(c)]) < 0.0) {
        std::swap(b, c);
    }
    tris.push_back({a, b, c});
}

int ring_offset(int j) { return j == 0 ? 0 : 1 + 3 * j * (j - 1); }

}  // namespace

long disk_mesh_vertex_count(int level)
{
    const long n = 1L << level;
    return 1 + 3 * n * (n + 1);
}

bool DiskMesh::is_curved(int tri) const
{
    if (!isoparametric) {
        return false;
    }
    const int e = triangle_boundary_edge[static_cast<std::size_t>(tri)];
    return e >= 0 && boundary_edges[static_cast<std::size_t>(e)].geometry_degree == 2;
}

DiskMesh build_disk_mesh(int level, bool isoparametric)
{
    if (level < 0 || level > 12) {
        throw InvalidArgument("build_disk_mesh: level must be in [0, 12], got " + std::to_string(level));
    }
    const int rings = 1 << level;
    DiskMesh mesh;
    mesh.level = level;
    mesh.isoparametric = isoparametric;
    mesh.vertices.reserve(static_cast<std::size_t>(disk_mesh_vertex_count(level)));
    mesh.vertices.emplace_back(0.0, 0.0);
    for (int j = 1; j <= rings; ++j) {
        const double radius = (j == rings) ? 1.0 : static_cast<double>(j) / rings;
        const int count = 6 * j;
        for (int k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / count;
            mesh.vertices.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
        }
    }

    auto& tris = mesh.triangles;
    tris.reserve(6 * static_cast<std::size_t>(rings) * rings);
    for (int k = 0; k < 6; ++k) {
        push_ccw(tris, mesh.vertices, 0, ring_offset(1) + k, ring_offset(1) + (k + 1) % 6);
    }
    for (int j = 2; j <= rings; ++j) {
        const int outer0 = ring_offset(j);
        const int inner0 = ring_offset(j - 1);
        const int n_outer = 6 * j;
        const int n_inner = 6 * (j - 1);
        for (int s = 0; s < 6; ++s) {
            int io = 0;
            int ip = 0;
            const auto outer = [&](int i) { return outer0 + (s * j + i) % n_outer; };
            const auto inner = [&](int i) { return inner0 + (s * (j - 1) + i) % n_inner; };
            // Merge the two polylines of the sextant by angle.
            while (io < j || ip < j - 1) {
                const bool advance_outer =
                    ip == j - 1 || (io < j && static_cast<long>(io + 1) * (j - 1) <= static_cast<long>(ip + 1) * j);
                if (advance_outer) {
                    push_ccw(tris, mesh.vertices, inner(ip), outer(io), outer(io + 1));
                    ++io;
                } else {
                    push_ccw(tris, mesh.vertices, inner(ip), outer(io), inner(ip + 1));
                    ++ip;
                }
            }
        }
    }

    const int outer0 = ring_offset(rings);
    const int n_outer = 6 * rings;
    for (int k = 0; k < n_outer; ++k) {
        mesh.boundary_vertices.push_back(outer0 + k);
    }

    auto on_boundary = [&](int v) { return v >= outer0; };
    mesh.triangle_boundary_edge.assign(tris.size(), -1);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        for (int e = 0; e < 3; ++e) {
            const int a = tris[t][static_cast<std::size_t>(e)];
            const int b = tris[t][static_cast<std::size_t>((e + 1) % 3)];
            if (!on_boundary(a) || !on_boundary(b)) {
                continue;
            }
            BoundaryEdge edge;
            edge.triangle = static_cast<int>(t);
            edge.local_edge = e;
            edge.v0 = a;
            edge.v1 = b;
            edge.geometry_degree = isoparametric ? 2 : 1;
            const Point2 chord_mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(a)] + mesh.vertices[static_cast<std::size_t>(b)]);
            edge.midpoint = chord_mid / chord_mid.norm();
            mesh.triangle_boundary_edge[t] = static_cast<int>(mesh.boundary_edges.size());
            mesh.boundary_edges.push_back(edge);
        }
    }

    double h = 0.0;
    for (const auto& t : tris) {
        for (int e = 0; e < 3; ++e) {
            const Point2& a = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(e)])];
            const Point2& b = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((e + 1) % 3)])];
            h = std::max(h, (a - b).norm());
        }
    }
    mesh.h = h;
    return mesh;
}

std::array<Point2, 6> geometry_nodes(const DiskMesh& mesh, int tri)
{
    const auto& t = mesh.triangles.at(static_cast<std::size_t>(tri));
    std::array<Point2, 6> nodes;
    for (int i = 0; i < 3; ++i) {
        nodes[static_cast<std::size_t>(i)] = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
    }
    for (int e = 0; e < 3; ++e) {
        nodes[static_cast<std::size_t>(3 + e)] =
            0.5 * (nodes[static_cast<std::size_t>(e)] + nodes[static_cast<std::size_t>((e + 1) % 3)]);
    }
    if (mesh.is_curved(tri)) {
        const auto& edge = mesh.boundary_edges[static_cast<std::size_t>(mesh.triangle_boundary_edge[static_cast<std::size_t>(tri)])];
        nodes[static_cast<std::size_t>(3 + edge.local_edge)] = edge.midpoint;
    }
    return nodes;
}

MappedPoint geometry_map(const DiskMesh& mesh, int tri, const Eigen::Vector3d& lambda)
{
    if (tri < 0 || tri >= mesh.num_triangles()) {
        throw InvalidArgument("geometry_map: triangle id out of range: " + std::to_string(tri));
    }
    const auto nodes = geometry_nodes(mesh, tri);
    MappedPoint out;
    if (!mesh.is_curved(tri)) {
        out.x = lambda[0] * nodes[0] + lambda[1] * nodes[1] + lambda[2] * nodes[2];
        out.jacobian.col(0) = nodes[1] - nodes[0];
        out.jacobian.col(1) = nodes[2] - nodes[0];
    } else {
        // Quadratic Lagrange map; lambda0 = 1 - xi - eta.
        const double l0 = lambda[0];
        const double l1 = lambda[1];
        const double l2 = lambda[2];
        const std::array<double, 6> shape = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
                                             4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
        // d/dxi and d/deta with dl0 = (-1, -1), dl1 = (1, 0), dl2 = (0, 1).
        const std::array<double, 6> dxi = {-(4 * l0 - 1), 4 * l1 - 1, 0.0, 4 * (l0 - l1), 4 * l2, -4 * l2};
        const std::array<double, 6> deta = {-(4 * l0 - 1), 0.0, 4 * l2 - 1, -4 * l1, 4 * l1, 4 * (l0 - l2)};
        out.x.setZero();
        out.jacobian.setZero();
        for (std::size_t k = 0; k < 6; ++k) {
            out.x += shape[k] * nodes[k];
            out.jacobian.col(0) += dxi[k] * nodes[k];
            out.jacobian.col(1) += deta[k] * nodes[k];
        }
    }
    out.det = out.jacobian.determinant();
    if (!(out.det > 0.0)) {
        throw DegenerateElement("geometry_map: non-positive Jacobian on triangle " + std::to_string(tri));
    }
    return out;
}

double triangle_inradius(const Point2& a, const Point2& b, const Point2& c)
{
    const double perimeter = (a - b).norm() + (b - c).norm() + (c - a).norm();
    return 2.0 * std::abs(signed_area(a, b, c)) / perimeter;
}

void write_mesh(std::ostream& os, const DiskMesh& mesh)
{
    os << std::setprecision(17);
    os << "vertices " << mesh.vertices.size() << '\n';
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        os << i << ' ' << mesh.vertices[i].x() << ' ' << mesh.vertices[i].y() << '\n';
    }
    os << "triangles " << mesh.triangles.size() << '\n';
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        os << i << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    os << "boundary_vertices " << mesh.boundary_vertices.size() << '\n';
    for (int v : mesh.boundary_vertices) {
        os << v << '\n';
    }
    os << "curved_edges " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges) {
        os << e.triangle << ' ' << e.local_edge << ' ' << e.v0 << ' ' << e.v1 << ' ' << e.geometry_degree << ' '
           << e.midpoint.x() << ' ' << e.midpoint.y() << '\n';
    }
}

}  // namespace hmhf
