#pragma once

#include "hmhf/fe_space.hpp"

#include <iosfwd>
#include <string>

namespace hmhf {

/// Header lines "# snapshot", "# t <time>", "# nodes <N>", then one line
/// "x y u1 u2 u3" per scalar dof of a three-component disk function.
void write_snapshot(std::ostream& os, const FeFunction& u, double t);

/// Legacy VTK unstructured grid over the mesh vertices (linear cells) with
/// the field as point vectors.
void write_vtk(std::ostream& os, const FeFunction& u, const std::string& title = "hmhf");

/// Interval function, "r value" per dof in dof order.
void write_profile(std::ostream& os, const FeFunction& u);

}  // namespace hmhf
