#pragma once

#include "hmhf/assembly.hpp"
#include "hmhf/bdf.hpp"
#include "hmhf/fe_space.hpp"
#include "hmhf/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace hmhf {

enum class Method { Ppfem, Tfem, Bfem };

/// "ppfem", "tfem", "bfem"
Method parse_method(const std::string& id);
std::string to_string(Method m);

struct FixedPointConfig {
    double tolerance = 1e-10;
    int max_iterations = 100;
};

/// Flow on the disk into the sphere, Dirichlet data u0 on the boundary.
struct Hmhf2dProblem {
    VectorField u0;
    double T = 0.1;
    double tau = 1e-3;
    FeSpace space;  // three components
    Method method = Method::Ppfem;
    int bdf = 1;
    FixedPointConfig fixed_point;

    [[nodiscard]] int num_steps() const;
};

/// Nodal normalization of the extrapolated field. Throws
/// DegenerateExtrapolation if some nodal length drops below 1e-8.
FeFunction extrapolate_2d_normalized(std::span<const FeFunction> history, int k);

/// Rows: interior scalar dofs i; row i holds int uhat_c phi_j phi_i at
/// column 3 j + c for interior j.
SparseMatrix tangent_constraint_matrix(const FeFunction& uhat);
/// Inf-sup constant of that constraint against the interior mass matrices.
double tangent_inf_sup(const FeFunction& uhat);

struct TfemStepResult {
    FeFunction u_next;
    FeFunction udot;    // zero at boundary dofs
    FeFunction lambda;  // scalar, zero at boundary dofs
};

struct BfemStepResult {
    FeFunction u_next;
    int iterations = 0;
    double residual = 0.0;
};

/// Time-independent matrices and factorization caches of one problem.
class Hmhf2dStepper {
public:
    explicit Hmhf2dStepper(const Hmhf2dProblem& problem);

    [[nodiscard]] FeFunction initial_state() const;

    /// Solve (delta_0/tau) M + K - W(|grad u_hat|^2) componentwise with the
    /// raw extrapolation, then normalize every node.
    FeFunction ppfem_step(std::span<const FeFunction> history, int k);
    /// Tangent-space saddle point for the time derivative, then the update.
    TfemStepResult tfem_step(std::span<const FeFunction> history, int k);
    /// Lumped midpoint scheme, fixed-point iteration per step.
    BfemStepResult bfem_step(const FeFunction& u_prev, const FixedPointConfig& cfg);

    /// Dispatch on the problem's method; `iterations` receives the BFEM
    /// inner iteration count (1 for the other methods).
    FeFunction step(std::span<const FeFunction> history, int k, int* iterations = nullptr);

    [[nodiscard]] const SparseMatrix& mass() const { return mass_; }
    [[nodiscard]] const SparseMatrix& stiffness() const { return stiffness_; }
    [[nodiscard]] const Hmhf2dProblem& problem() const { return problem_; }

private:
    [[nodiscard]] Vector interior_values(const Vector& full) const;

    Hmhf2dProblem problem_;
    FeSpace scalar_;
    SparseMatrix mass_;
    SparseMatrix stiffness_;
    std::vector<int> interior_map_;
    FeFunction boundary_data_;  // u0 at boundary dofs, zero elsewhere
    DirectSolver solver_;
    LumpedMass lumped_;
};

FeFunction ppfem_step(const Hmhf2dProblem& problem, std::span<const FeFunction> history, int k);
TfemStepResult tfem_step(const Hmhf2dProblem& problem, std::span<const FeFunction> history, int k);
BfemStepResult bfem_step(const Hmhf2dProblem& problem, const FeFunction& u_prev, const FixedPointConfig& cfg);

struct Hmhf2dResult {
    FeFunction final_state;
    std::vector<double> energies;           // 1/2 int |grad u|^2 at t_0 .. t_J
    std::vector<double> length_deviation;   // max_z | |u(z)| - 1 | at t_0 .. t_J
    double max_length_change = 0.0;         // max_z,j | |u^{j+1}(z)|^2 - |u^j(z)|^2 |
    int steps = 0;
    long inner_iterations = 0;
    double wall_seconds = 0.0;

    [[nodiscard]] double average_inner_iterations() const
    {
        return steps > 0 ? static_cast<double>(inner_iterations) / steps : 0.0;
    }
};

/// J = T / tau steps; BDF2 starts with one BDF1 step of the same size.
/// BFEM requires p = 1 and k = 1.
Hmhf2dResult solve_hmhf(const Hmhf2dProblem& problem, bool record_energy = true);

double max_length_deviation(const FeFunction& u);

}  // namespace hmhf
