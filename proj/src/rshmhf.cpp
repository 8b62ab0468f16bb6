#include "hmhf/rshmhf.hpp"

#include "hmhf/assembly.hpp"
#include "hmhf/errors.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace hmhf {

double sinc2(double u)
{
    const double x = 2.0 * u;
    if (std::abs(u) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

int Rshmhf1dProblem::num_steps() const
{
    if (!(tau > 0.0) || !(T > 0.0)) {
        throw InvalidArgument("time step and final time must be positive");
    }
    const double ratio = T / tau;
    const double j = std::round(ratio);
    if (j < 1.0 || std::abs(ratio - j) > 1e-9 * ratio) {
        throw InvalidArgument("T / tau = " + std::to_string(ratio) + " is not an integer");
    }
    return static_cast<int>(j);
}

Rshmhf1dStepper::Rshmhf1dStepper(const Rshmhf1dProblem& problem) : problem_(problem)
{
    const FeSpace& V = problem_.space;
    if (V.interval_mesh() == nullptr || V.value_dim() != 1) {
        throw InvalidArgument("Rshmhf1dStepper: needs a scalar interval space");
    }
    if (!problem_.u0) {
        throw InvalidArgument("Rshmhf1dStepper: missing initial profile");
    }
    if (std::abs(problem_.u0(0.0)) > 1e-14) {
        throw InvalidArgument("Rshmhf1dStepper: initial profile must vanish at r = 0");
    }
    (void)problem_.num_steps();
    mass_ = assemble_mass(V);
    base_ = assemble_stiffness(V) - assemble_convection_1d(V);
    interior_map_ = interior_index_map(V);
    boundary_values_ = Vector::Zero(V.num_scalar_dofs());
    for (int d : V.boundary_dofs()) {
        const double r = V.dof_coords()[d].x();
        boundary_values_[d] = r == 0.0 ? 0.0 : problem_.u0(r);
    }
}

FeFunction Rshmhf1dStepper::initial_state() const
{
    FeFunction u = interpolate(problem_.space, [&](const Point2& x) { return problem_.u0(x.x()); });
    for (int d : problem_.space.boundary_dofs()) {
        u.coefficients()[d] = boundary_values_[d];
    }
    for (int i = 0; i < u.coefficients().size(); ++i) {
        if (!(std::abs(u.coefficients()[i]) <= std::numbers::pi + 1e-12)) {
            throw InvalidArgument("Rshmhf1dStepper: initial profile exceeds pi in magnitude");
        }
    }
    return u;
}

FeFunction Rshmhf1dStepper::step(std::span<const FeFunction> history, int k)
{
    const BdfScheme scheme = bdf_scheme(k);
    const FeFunction uhat = extrapolate_1d(history, k);
    const FeSpace& V = problem_.space;
    const double tau = problem_.tau;

    const SparseMatrix s = assemble_weighted_mass(V, [&](const QuadPoint& qp) {
        const double r = qp.x.x();
        return sinc2(qp.value(uhat)) / (r * r);
    });
    const SparseMatrix a = (scheme.delta[0] / tau) * mass_ + base_ + s;
    const Vector rhs = -(1.0 / tau) * (mass_ * bdf_history_sum(scheme, history)) - a * boundary_values_;

    const SparseMatrix a_ii = restrict_matrix(a, interior_map_, interior_map_);
    const auto& interior = V.interior_dofs();
    Vector rhs_i(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t n = 0; n < interior.size(); ++n) {
        rhs_i[static_cast<Eigen::Index>(n)] = rhs[interior[n]];
    }
    solver_.factorize(a_ii);
    const Vector x = solver_.solve(rhs_i);

    FeFunction next(V, boundary_values_);
    for (std::size_t n = 0; n < interior.size(); ++n) {
        next.coefficients()[interior[n]] = x[static_cast<Eigen::Index>(n)];
    }
    return next;
}

FeFunction rshmhf_step(const Rshmhf1dProblem& problem, std::span<const FeFunction> history, int k)
{
    return Rshmhf1dStepper(problem).step(history, k);
}

Rshmhf1dResult solve_rshmhf(const Rshmhf1dProblem& problem, int k, bool record_energy)
{
    const auto start = std::chrono::steady_clock::now();
    bdf_scheme(k);
    Rshmhf1dStepper stepper(problem);
    const int steps = problem.num_steps();
    std::deque<FeFunction> history{stepper.initial_state()};
    Rshmhf1dResult out{history.front(), {}, steps, 0.0};
    if (record_energy) {
        out.energies.push_back(energy_1d(history.front()));
    }
    std::vector<FeFunction> view;
    for (int j = 0; j < steps; ++j) {
        const int order = std::min<int>(k, static_cast<int>(history.size()));
        view.assign(history.begin(), history.end());
        history.push_front(stepper.step(view, order));
        if (static_cast<int>(history.size()) > k) {
            history.pop_back();
        }
        if (record_energy) {
            out.energies.push_back(energy_1d(history.front()));
        }
    }
    out.final_state = history.front();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

double energy_1d(const FeFunction& u)
{
    const FeSpace& V = u.space();
    if (V.interval_mesh() == nullptr || V.value_dim() != 1) {
        throw InvalidArgument("energy_1d: needs a scalar interval function");
    }
    double e = 0.0;
    for (int el = 0; el < V.num_elements(); ++el) {
        const auto dofs = V.element_dofs(el);
        for (int q = 0; q < V.points_per_element(); ++q) {
            const auto phi = V.shape_values(q);
            const auto grad = V.shape_gradients(el, q);
            double v = 0.0;
            double dv = 0.0;
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                v += phi[a] * u.coefficients()[dofs[a]];
                dv += grad[a].x() * u.coefficients()[dofs[a]];
            }
            const double r = V.point(el, q).x();
            const double sv = std::sin(v);
            e += V.jxw(el, q) * (r * dv * dv + sv * sv / r);
        }
    }
    return std::numbers::pi * e;
}

}  // namespace hmhf
