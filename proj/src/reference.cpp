#include "hmhf/reference.hpp"

#include "hmhf/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hmhf {

InitialCondition parse_initial_condition(const std::string& id)
{
    if (id == "halfpi_r2") {
        return InitialCondition::HalfPiR2;
    }
    if (id == "sin2pir_plus_r") {
        return InitialCondition::Sin2PiRPlusR;
    }
    throw ParseError("unknown initial condition '" + id + "'");
}

std::string to_string(InitialCondition ic)
{
    return ic == InitialCondition::HalfPiR2 ? "halfpi_r2" : "sin2pir_plus_r";
}

RadialProfile initial_profile(InitialCondition ic)
{
    using std::numbers::pi;
    if (ic == InitialCondition::HalfPiR2) {
        return [](double r) { return 0.5 * pi * r * r; };
    }
    return [](double r) { return 0.5 * pi * (std::sin(2.0 * pi * r) + r); };
}

Eigen::Vector3d lift_value(const Point2& x, double u_of_r)
{
    const double r = x.norm();
    if (r == 0.0) {
        return {0.0, 0.0, 1.0};
    }
    const double s = std::sin(u_of_r);
    return {x.x() / r * s, x.y() / r * s, std::cos(u_of_r)};
}

VectorField lift_profile(const RadialProfile& u)
{
    return [u](const Point2& x) { return lift_value(x, u(std::min(x.norm(), 1.0))); };
}

Reference1d compute_reference(InitialCondition ic, const ReferenceConfig& config)
{
    auto mesh = std::make_shared<const IntervalMesh>(build_interval_mesh(config.n_elems));
    const Rshmhf1dProblem problem{initial_profile(ic), config.T, config.tau, FeSpace::interval(mesh, config.degree)};
    return {config, ic, solve_rshmhf(problem, config.bdf, false).final_state};
}

void write_reference(std::ostream& os, const Reference1d& ref)
{
    const ReferenceConfig& c = ref.config;
    os << std::setprecision(17);
    os << "format hmhf-radial-reference-1\n";
    os << "ic " << to_string(ref.ic) << '\n';
    os << "p " << c.degree << '\n';
    os << "n " << c.n_elems << '\n';
    os << "h " << 1.0 / c.n_elems << '\n';
    os << "tau " << c.tau << '\n';
    os << "T " << c.T << '\n';
    os << "k " << c.bdf << '\n';
    const FeSpace& V = ref.u.space();
    os << "dofs " << V.num_scalar_dofs() << '\n';
    for (int i = 0; i < V.num_scalar_dofs(); ++i) {
        os << i << ' ' << V.dof_coords()[i].x() << ' ' << ref.u.coefficients()[i] << '\n';
    }
}

Reference1d read_reference(std::istream& is)
{
    std::map<std::string, std::string> header;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        std::string value;
        if (!(ls >> key >> value)) {
            throw ParseError("reference: malformed header line '" + line + "'");
        }
        header[key] = value;
        if (key == "dofs") {
            break;
        }
    }
    for (const char* key : {"format", "ic", "p", "n", "tau", "T", "k", "dofs"}) {
        if (!header.contains(key)) {
            throw ParseError(std::string("reference: missing header key '") + key + "'");
        }
    }
    if (header["format"] != "hmhf-radial-reference-1") {
        throw ParseError("reference: unknown format '" + header["format"] + "'");
    }
    Reference1d ref{{}, parse_initial_condition(header["ic"]), FeFunction(FeSpace::interval(
                                                                  std::make_shared<const IntervalMesh>(
                                                                      build_interval_mesh(std::stoi(header["n"]))),
                                                                  std::stoi(header["p"])))};
    ref.config.n_elems = std::stoi(header["n"]);
    ref.config.degree = std::stoi(header["p"]);
    ref.config.tau = std::stod(header["tau"]);
    ref.config.T = std::stod(header["T"]);
    ref.config.bdf = std::stoi(header["k"]);
    const int dofs = std::stoi(header["dofs"]);
    if (dofs != ref.u.space().num_scalar_dofs()) {
        throw ParseError("reference: dof count does not match p and n");
    }
    for (int i = 0; i < dofs; ++i) {
        int id = -1;
        double r = 0.0;
        double value = 0.0;
        if (!(is >> id >> r >> value) || id != i) {
            throw ParseError("reference: bad coefficient line " + std::to_string(i));
        }
        ref.u.coefficients()[i] = value;
    }
    return ref;
}

ErrorNorms error_norms_1d(const FeFunction& a, const FeFunction& b)
{
    const IntervalMesh* ma = a.space().interval_mesh();
    const IntervalMesh* mb = b.space().interval_mesh();
    if (ma == nullptr || mb == nullptr || a.space().value_dim() != 1 || b.space().value_dim() != 1) {
        throw InvalidArgument("error_norms_1d: needs scalar interval functions");
    }
    const bool a_fine = ma->n_elems >= mb->n_elems;
    const FeFunction& fine = a_fine ? a : b;
    const FeFunction& coarse = a_fine ? b : a;
    const int nf = fine.space().interval_mesh()->n_elems;
    const int nc = coarse.space().interval_mesh()->n_elems;
    if (nf % nc != 0) {
        throw InvalidArgument("error_norms_1d: meshes are not nested");
    }
    const FeSpace& V = fine.space();
    double l2 = 0.0;
    double semi = 0.0;
    for (int e = 0; e < V.num_elements(); ++e) {
        const auto dofs = V.element_dofs(e);
        for (int q = 0; q < V.points_per_element(); ++q) {
            const auto phi = V.shape_values(q);
            const auto grad = V.shape_gradients(e, q);
            double v = 0.0;
            double dv = 0.0;
            for (std::size_t k = 0; k < dofs.size(); ++k) {
                v += phi[k] * fine.coefficients()[dofs[k]];
                dv += grad[k].x() * fine.coefficients()[dofs[k]];
            }
            const auto [cv, cdv] = evaluate_1d_with_derivative(coarse, V.point(e, q).x());
            l2 += V.jxw(e, q) * (v - cv) * (v - cv);
            semi += V.jxw(e, q) * (dv - cdv) * (dv - cdv);
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(semi)};
}

FeFunction spherical_lift(const FeFunction& u1d, const FeSpace& target)
{
    if (target.disk_mesh() == nullptr || target.value_dim() != 3) {
        throw InvalidArgument("spherical_lift: target must be a three-component disk space");
    }
    if (std::abs(evaluate_1d(u1d, 0.0)) > 1e-12) {
        throw InvalidArgument("spherical_lift: profile must vanish at r = 0");
    }
    FeFunction out(target);
    const auto& coords = target.dof_coords();
    for (int z = 0; z < target.num_scalar_dofs(); ++z) {
        const double r = coords[z].norm();
        if (r > 1.0 + 1e-12) {
            throw OutOfDomain("spherical_lift: dof " + std::to_string(z) + " lies outside the unit disk");
        }
        out.set_node_value(z, lift_value(coords[z], evaluate_1d(u1d, std::min(r, 1.0))));
    }
    return out;
}

LiftedReference lift_reference(const Reference1d& ref, const FeSpace& target)
{
    return {ref.config, spherical_lift(ref.u, target)};
}

ErrorNorms evaluate_against_reference(const FeFunction& final_state, const LiftedReference& ref)
{
    return error_norms(final_state, ref.target);
}

}  // namespace hmhf
