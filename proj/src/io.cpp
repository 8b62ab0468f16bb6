#include "hmhf/io.hpp"

#include "hmhf/errors.hpp"

#include <iomanip>
#include <ostream>

namespace hmhf {

void write_snapshot(std::ostream& os, const FeFunction& u, double t)
{
    const FeSpace& V = u.space();
    if (V.disk_mesh() == nullptr || V.value_dim() != 3) {
        throw InvalidArgument("write_snapshot: needs a three-component disk function");
    }
    os << std::setprecision(17);
    os << "# snapshot\n# t " << t << "\n# nodes " << V.num_scalar_dofs() << "\n# x y u1 u2 u3\n";
    for (int z = 0; z < V.num_scalar_dofs(); ++z) {
        const Eigen::Vector3d v = u.node_value(z);
        os << V.dof_coords()[z].x() << ' ' << V.dof_coords()[z].y() << ' ' << v.x() << ' ' << v.y() << ' ' << v.z()
           << '\n';
    }
}

void write_vtk(std::ostream& os, const FeFunction& u, const std::string& title)
{
    const FeSpace& V = u.space();
    const DiskMesh* mesh = V.disk_mesh();
    if (mesh == nullptr || V.value_dim() != 3) {
        throw InvalidArgument("write_vtk: needs a three-component disk function");
    }
    const int nv = mesh->num_vertices();
    const int nt = mesh->num_triangles();
    os << std::setprecision(17);
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << nv << " double\n";
    for (const Point2& p : mesh->vertices) {
        os << p.x() << ' ' << p.y() << " 0\n";
    }
    os << "CELLS " << nt << ' ' << 4 * nt << '\n';
    for (const auto& t : mesh->triangles) {
        os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    os << "CELL_TYPES " << nt << '\n';
    for (int i = 0; i < nt; ++i) {
        os << "5\n";
    }
    os << "POINT_DATA " << nv << "\nVECTORS u double\n";
    for (int z = 0; z < nv; ++z) {
        const Eigen::Vector3d v = u.node_value(z);
        os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
}

void write_profile(std::ostream& os, const FeFunction& u)
{
    const FeSpace& V = u.space();
    if (V.interval_mesh() == nullptr || V.value_dim() != 1) {
        throw InvalidArgument("write_profile: needs a scalar interval function");
    }
    os << std::setprecision(17) << "# r u\n";
    for (int i = 0; i < V.num_scalar_dofs(); ++i) {
        os << V.dof_coords()[i].x() << ' ' << u.coefficients()[i] << '\n';
    }
}

}  // namespace hmhf
