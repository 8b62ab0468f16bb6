#pragma once

#include "hmhf/assembly.hpp"
#include "hmhf/fe_space.hpp"
#include "hmhf/rshmhf.hpp"

#include <iosfwd>
#include <string>

namespace hmhf {

enum class InitialCondition { HalfPiR2, Sin2PiRPlusR };

/// "halfpi_r2" or "sin2pir_plus_r"; anything else throws ParseError.
InitialCondition parse_initial_condition(const std::string& id);
std::string to_string(InitialCondition ic);

/// pi r^2 / 2, or pi (sin(2 pi r) + r) / 2.
RadialProfile initial_profile(InitialCondition ic);

/// (x/r sin u(r), y/r sin u(r), cos u(r)), (0, 0, 1) at the origin.
Eigen::Vector3d lift_value(const Point2& x, double u_of_r);
VectorField lift_profile(const RadialProfile& u);

struct ReferenceConfig {
    int n_elems = 4096;
    int degree = 2;
    double tau = 1e-5;
    int bdf = 2;
    double T = 0.1;
};

struct Reference1d {
    ReferenceConfig config;
    InitialCondition ic = InitialCondition::HalfPiR2;
    FeFunction u;
};

Reference1d compute_reference(InitialCondition ic, const ReferenceConfig& config);

/// Text format: a header of "key value" lines (format, ic, p, n, h, tau, T, k,
/// dofs) followed by one "<dof> <r> <coefficient>" line per dof.
void write_reference(std::ostream& os, const Reference1d& ref);
Reference1d read_reference(std::istream& is);

/// L2 / H1 distance of two interval functions on nested uniform meshes,
/// integrated with the quadrature of the finer one.
ErrorNorms error_norms_1d(const FeFunction& a, const FeFunction& b);

/// Nodal lift of a radial profile into a three-component disk space.
FeFunction spherical_lift(const FeFunction& u1d, const FeSpace& target);

struct LiftedReference {
    ReferenceConfig source;
    FeFunction target;
};

LiftedReference lift_reference(const Reference1d& ref, const FeSpace& target);

ErrorNorms evaluate_against_reference(const FeFunction& final_state, const LiftedReference& ref);

}  // namespace hmhf
