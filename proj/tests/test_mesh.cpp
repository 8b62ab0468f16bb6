#include "hmhf/errors.hpp"
#include "hmhf/mesh.hpp"

#include <doctest.h>

#include <map>
#include <numbers>
#include <sstream>

using namespace hmhf;

TEST_SUITE("mesh")
{
    TEST_CASE("interval mesh")
    {
        const IntervalMesh m2 = build_interval_mesh(2);
        CHECK(m2.nodes == std::vector<double>{0.0, 0.5, 1.0});
        CHECK(m2.h == 0.5);

        const IntervalMesh m4 = build_interval_mesh(4);
        CHECK(m4.nodes.size() == 5);
        CHECK(m4.h == 0.25);

        const IntervalMesh fine = build_interval_mesh(1 << 14);
        CHECK(fine.h == std::ldexp(1.0, -14));
        CHECK(fine.nodes.front() == 0.0);
        CHECK(fine.nodes.back() == 1.0);
        for (std::size_t i = 1; i < fine.nodes.size(); ++i) {
            REQUIRE(fine.nodes[i] > fine.nodes[i - 1]);
            REQUIRE(std::abs(fine.nodes[i] - fine.nodes[i - 1] - fine.h) <= 1e-14);
        }
        CHECK_THROWS_AS(build_interval_mesh(1), InvalidArgument);
    }

    TEST_CASE("level 0 is a single ring")
    {
        const DiskMesh m = build_disk_mesh(0, false);
        CHECK(m.num_vertices() == 7);
        CHECK(m.num_triangles() == 6);
        CHECK(m.boundary_vertices.size() == 6);
        CHECK(m.boundary_edges.size() == 6);
    }

    TEST_CASE("vertex counts")
    {
        CHECK(build_disk_mesh(6, false).num_vertices() == 12481);
        for (int l = 0; l <= 6; ++l) {
            long sum = 1;
            for (int j = 1; j <= (1 << l); ++j) {
                sum += 6 * j;
            }
            CHECK(disk_mesh_vertex_count(l) == sum);
            CHECK(build_disk_mesh(l, true).num_vertices() == sum);
        }
    }

    TEST_CASE("disk mesh invariants")
    {
        double previous_h = 0.0;
        for (int level = 1; level <= 5; ++level) {
            CAPTURE(level);
            const DiskMesh m = build_disk_mesh(level, true);
            for (int v : m.boundary_vertices) {
                CHECK(std::abs(m.vertices[v].norm() - 1.0) <= 1e-14);
            }
            for (const auto& e : m.boundary_edges) {
                CHECK(std::abs(e.midpoint.norm() - 1.0) <= 1e-14);
                CHECK(e.geometry_degree == 2);
            }
            std::map<std::pair<int, int>, int> edge_use;
            double min_inradius = 1e300;
            for (const auto& t : m.triangles) {
                const Point2& a = m.vertices[t[0]];
                const Point2& b = m.vertices[t[1]];
                const Point2& c = m.vertices[t[2]];
                const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
                CHECK(area2 > 0.0);
                min_inradius = std::min(min_inradius, triangle_inradius(a, b, c));
                for (int e = 0; e < 3; ++e) {
                    const int u = t[e];
                    const int v = t[(e + 1) % 3];
                    ++edge_use[{std::min(u, v), std::max(u, v)}];
                }
            }
            int boundary_edges = 0;
            for (const auto& [edge, n] : edge_use) {
                CHECK(n <= 2);
                boundary_edges += n == 1 ? 1 : 0;
            }
            CHECK(boundary_edges == static_cast<int>(m.boundary_edges.size()));
            CHECK(m.h / min_inradius <= 10.0);
            if (level == 2) {
                CHECK(m.h >= 0.125);
                CHECK(m.h <= 0.5);
            }
            if (previous_h > 0.0) {
                CHECK(m.h / previous_h == doctest::Approx(0.5).epsilon(0.2));
            }
            previous_h = m.h;
        }
    }

    TEST_CASE("deterministic")
    {
        std::ostringstream a;
        std::ostringstream b;
        write_mesh(a, build_disk_mesh(3, true));
        write_mesh(b, build_disk_mesh(3, true));
        CHECK(a.str() == b.str());
        CHECK(a.str().rfind("vertices 217", 0) == 0);
    }

    TEST_CASE("geometry map")
    {
        const DiskMesh m = build_disk_mesh(2, true);
        int interior = -1;
        int curved = -1;
        for (int t = 0; t < m.num_triangles(); ++t) {
            (m.is_curved(t) ? curved : interior) = t;
        }
        REQUIRE(interior >= 0);
        REQUIRE(curved >= 0);

        const auto& t = m.triangles[interior];
        const MappedPoint bary = geometry_map(m, interior, Eigen::Vector3d::Constant(1.0 / 3.0));
        const Point2 mean = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
        CHECK((bary.x - mean).norm() <= 1e-15);
        const MappedPoint other = geometry_map(m, interior, Eigen::Vector3d(0.6, 0.3, 0.1));
        CHECK((other.jacobian - bary.jacobian).norm() <= 1e-15);

        const BoundaryEdge& e = m.boundary_edges[m.triangle_boundary_edge[curved]];
        Eigen::Vector3d lam = Eigen::Vector3d::Zero();
        lam[e.local_edge] = 0.5;
        lam[(e.local_edge + 1) % 3] = 0.5;
        const MappedPoint mid = geometry_map(m, curved, lam);
        CHECK(std::abs(mid.x.norm() - 1.0) <= 1e-14);
        CHECK((mid.x - e.midpoint).norm() <= 1e-14);
        CHECK(mid.det > 0.0);
        CHECK_THROWS_AS(geometry_map(m, m.num_triangles(), lam), InvalidArgument);
    }

    TEST_CASE("polygonal meshes keep straight edges")
    {
        const DiskMesh m = build_disk_mesh(2, false);
        for (int t = 0; t < m.num_triangles(); ++t) {
            CHECK_FALSE(m.is_curved(t));
        }
        CHECK_THROWS_AS(build_disk_mesh(-1, false), InvalidArgument);
    }
}
