#pragma once

#include "hmhf/bdf.hpp"
#include "hmhf/fe_space.hpp"
#include "hmhf/linalg.hpp"

#include <functional>
#include <span>
#include <vector>

namespace hmhf {

/// sin(2u) / (2u), with the series 1 - (2u)^2/6 + (2u)^4/120 for |u| < 1e-4.
double sinc2(double u);

using RadialProfile = std::function<double(double)>;

/// Radial profile problem on [0, 1] with u(0) = 0 and u(1) = u0(1).
struct Rshmhf1dProblem {
    RadialProfile u0;
    double T = 0.1;
    double tau = 1e-3;
    FeSpace space;

    /// T / tau; throws InvalidArgument unless it is an integer within 1e-9.
    [[nodiscard]] int num_steps() const;
};

/// Holds the time-independent matrices and the factorization cache of one
/// problem. Each step assembles
///   (delta_0 / tau) M + K - C + S(u_hat)
/// with S the mass weighted by sinc2(u_hat) / r^2.
class Rshmhf1dStepper {
public:
    explicit Rshmhf1dStepper(const Rshmhf1dProblem& problem);

    [[nodiscard]] FeFunction initial_state() const;
    /// history newest first; needs at least k states.
    FeFunction step(std::span<const FeFunction> history, int k);

private:
    Rshmhf1dProblem problem_;
    SparseMatrix mass_;
    SparseMatrix base_;  // K - C
    std::vector<int> interior_map_;
    Vector boundary_values_;  // full-length, zero at interior dofs
    DirectSolver solver_;
};

FeFunction rshmhf_step(const Rshmhf1dProblem& problem, std::span<const FeFunction> history, int k);

struct Rshmhf1dResult {
    FeFunction final_state;
    std::vector<double> energies;  // E(u^0), ..., E(u^J)
    int steps = 0;
    double wall_seconds = 0.0;
};

/// J = T / tau steps; k = 2 starts with one k = 1 step of the same size.
/// Energies are left empty when `record_energy` is false.
Rshmhf1dResult solve_rshmhf(const Rshmhf1dProblem& problem, int k, bool record_energy = true);

/// pi * int_0^1 r u'^2 + sin^2(u) / r dr
double energy_1d(const FeFunction& u);

}  // namespace hmhf
