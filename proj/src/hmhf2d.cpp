#include "hmhf/hmhf2d.hpp"

#include "hmhf/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>

namespace hmhf {

Method parse_method(const std::string& id)
{
    if (id == "ppfem") {
        return Method::Ppfem;
    }
    if (id == "tfem") {
        return Method::Tfem;
    }
    if (id == "bfem") {
        return Method::Bfem;
    }
    throw ParseError("unknown method '" + id + "'");
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::Ppfem:
        return "ppfem";
    case Method::Tfem:
        return "tfem";
    case Method::Bfem:
        return "bfem";
    }
    return "?";
}

int Hmhf2dProblem::num_steps() const
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

FeFunction extrapolate_2d_normalized(std::span<const FeFunction> history, int k)
{
    if (history.size() < static_cast<std::size_t>(std::max(k, 1))) {
        throw InvalidArgument("extrapolate_2d_normalized: need " + std::to_string(k) + " past states");
    }
    std::vector<Vector> coeffs;
    for (const FeFunction& f : history) {
        coeffs.push_back(f.coefficients());
    }
    FeFunction out(history[0].space(), extrapolate(coeffs, k));
    if (out.space().value_dim() != 3) {
        throw InvalidArgument("extrapolate_2d_normalized: needs a three-component field");
    }
    for (int z = 0; z < out.space().num_scalar_dofs(); ++z) {
        const Eigen::Vector3d v = out.node_value(z);
        const double len = v.norm();
        if (!(len >= 1e-8)) {
            throw DegenerateExtrapolation("extrapolated field has length " + std::to_string(len) + " at node " +
                                          std::to_string(z));
        }
        out.set_node_value(z, v / len);
    }
    return out;
}

double max_length_deviation(const FeFunction& u)
{
    double m = 0.0;
    for (int z = 0; z < u.space().num_scalar_dofs(); ++z) {
        m = std::max(m, std::abs(u.node_value(z).norm() - 1.0));
    }
    return m;
}

namespace {

// Row i of the result holds B_c(i, j) at column 3 j + c; the three inputs
// share one sparsity pattern.
SparseMatrix interleave_columns(const std::array<SparseMatrix, 3>& b)
{
    SparseMatrix out(b[0].rows(), 3 * b[0].cols());
    out.reserve(3 * b[0].nonZeros());
    for (int i = 0; i < b[0].rows(); ++i) {
        out.startVec(i);
        SparseMatrix::InnerIterator i0(b[0], i);
        SparseMatrix::InnerIterator i1(b[1], i);
        SparseMatrix::InnerIterator i2(b[2], i);
        for (; i0; ++i0, ++i1, ++i2) {
            const int j = static_cast<int>(i0.col());
            out.insertBack(i, 3 * j) = i0.value();
            out.insertBack(i, 3 * j + 1) = i1.value();
            out.insertBack(i, 3 * j + 2) = i2.value();
        }
    }
    out.finalize();
    return out;
}

Eigen::Vector3d bfem_node_solve(double c, const Eigen::Vector3d& a, const Eigen::Vector3d& u)
{
    // (c I - [a]x) w = c u
    return (c * c * u + c * a.cross(u) + a.dot(u) * a) / (c * c + a.squaredNorm());
}

}  // namespace

SparseMatrix tangent_constraint_matrix(const FeFunction& uhat)
{
    const FeSpace& V = uhat.space();
    if (V.value_dim() != 3 || V.disk_mesh() == nullptr) {
        throw InvalidArgument("tangent_constraint_matrix: needs a three-component disk function");
    }
    const FeSpace scalar = V.scalar();
    const std::vector<int> map = interior_index_map(scalar);
    std::array<SparseMatrix, 3> bc;
    for (int c = 0; c < 3; ++c) {
        bc[c] = restrict_matrix(assemble_weighted_mass(scalar, [&](const QuadPoint& qp) { return qp.value(uhat, c); }),
                                map, map);
    }
    return interleave_columns(bc);
}

double tangent_inf_sup(const FeFunction& uhat)
{
    const FeSpace scalar = uhat.space().scalar();
    const std::vector<int> map = interior_index_map(scalar);
    const SparseMatrix mw = restrict_matrix(assemble_mass(scalar), map, map);
    return estimate_inf_sup(tangent_constraint_matrix(uhat), expand_components(mw, 3), mw);
}

Hmhf2dStepper::Hmhf2dStepper(const Hmhf2dProblem& problem)
    : problem_(problem), scalar_(problem.space.scalar()), boundary_data_(problem.space)
{
    const FeSpace& V = problem_.space;
    if (V.disk_mesh() == nullptr || V.value_dim() != 3) {
        throw InvalidArgument("Hmhf2dStepper: needs a three-component disk space");
    }
    if (!problem_.u0) {
        throw InvalidArgument("Hmhf2dStepper: missing initial field");
    }
    (void)problem_.num_steps();
    if (problem_.method == Method::Bfem) {
        if (V.degree() != 1 || problem_.bdf != 1) {
            throw InvalidArgument("BFEM is defined for p = 1 and first-order time stepping only");
        }
        if (!(problem_.fixed_point.tolerance > 0.0) || problem_.fixed_point.max_iterations < 1) {
            throw InvalidArgument("fixed-point tolerance and iteration limit must be positive");
        }
        lumped_ = lumped_mass(scalar_);
    }
    (void)bdf_scheme(problem_.bdf);
    mass_ = assemble_mass(scalar_);
    stiffness_ = assemble_stiffness(scalar_);
    interior_map_ = interior_index_map(scalar_);
    const FeFunction u0 = interpolate_vector(V, problem_.u0);
    for (int z = 0; z < V.num_scalar_dofs(); ++z) {
        if (std::abs(u0.node_value(z).norm() - 1.0) > 1e-12) {
            throw InvalidArgument("initial field is not unit length at dof " + std::to_string(z));
        }
    }
    for (int z : V.boundary_dofs()) {
        boundary_data_.set_node_value(z, u0.node_value(z));
    }
}

FeFunction Hmhf2dStepper::initial_state() const { return interpolate_vector(problem_.space, problem_.u0); }

Vector Hmhf2dStepper::interior_values(const Vector& full) const
{
    const auto& interior = scalar_.interior_dofs();
    Vector out(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t n = 0; n < interior.size(); ++n) {
        out[static_cast<Eigen::Index>(n)] = full[interior[n]];
    }
    return out;
}

FeFunction Hmhf2dStepper::ppfem_step(std::span<const FeFunction> history, int k)
{
    const BdfScheme scheme = bdf_scheme(k);
    std::vector<Vector> coeffs;
    for (const FeFunction& f : history) {
        coeffs.push_back(f.coefficients());
    }
    const FeFunction uhat(problem_.space, extrapolate(coeffs, k));
    const double tau = problem_.tau;

    const SparseMatrix w = assemble_weighted_mass(scalar_, [&](const QuadPoint& qp) { return qp.gradient_norm2(uhat); });
    const SparseMatrix a = (scheme.delta[0] / tau) * mass_ + stiffness_ - w;
    solver_.factorize(restrict_matrix(a, interior_map_, interior_map_));

    const FeFunction hist(problem_.space, bdf_history_sum(scheme, history));
    FeFunction next = boundary_data_;
    const auto& interior = scalar_.interior_dofs();
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(interior.size()), 3);
    for (int c = 0; c < 3; ++c) {
        const Vector full = -(1.0 / tau) * (mass_ * hist.component(c)) - a * boundary_data_.component(c);
        rhs.col(c) = interior_values(full);
    }
    const Eigen::MatrixXd x = solver_.solve(rhs);
    for (std::size_t n = 0; n < interior.size(); ++n) {
        next.set_node_value(interior[n], x.row(static_cast<Eigen::Index>(n)).transpose());
    }
    for (int z = 0; z < scalar_.num_scalar_dofs(); ++z) {
        const Eigen::Vector3d v = next.node_value(z);
        const double len = v.norm();
        if (!(len >= 1e-12)) {
            throw NormalizationFailure("projected field vanishes at node " + std::to_string(z));
        }
        next.set_node_value(z, v / len);
    }
    return next;
}

TfemStepResult Hmhf2dStepper::tfem_step(std::span<const FeFunction> history, int k)
{
    const BdfScheme scheme = bdf_scheme(k);
    const FeFunction uhat = extrapolate_2d_normalized(history, k);
    const double tau = problem_.tau;
    const double d0 = scheme.delta[0];

    const SparseMatrix a_scalar = restrict_matrix(SparseMatrix(mass_ + (tau / d0) * stiffness_), interior_map_, interior_map_);
    KktSystem sys;
    sys.a = expand_components(a_scalar, 3);
    sys.b = tangent_constraint_matrix(uhat);
    const auto& interior = scalar_.interior_dofs();
    const auto ni = static_cast<Eigen::Index>(interior.size());
    sys.rhs_primal.resize(3 * ni);
    Vector u_old = Vector::Zero(problem_.space.num_dofs());
    for (int i = 1; i <= k; ++i) {
        u_old += (scheme.delta[i] / d0) * history[i - 1].coefficients();
    }
    const FeFunction hist(problem_.space, u_old);
    for (int c = 0; c < 3; ++c) {
        const Vector kc = interior_values(stiffness_ * hist.component(c));
        for (Eigen::Index n = 0; n < ni; ++n) {
            sys.rhs_primal[3 * n + c] = kc[n];
        }
    }
    sys.rhs_dual = Vector::Zero(ni);
    const KktSolution sol = solve_kkt(sys, &solver_);

    TfemStepResult out{FeFunction(problem_.space), FeFunction(problem_.space), FeFunction(scalar_)};
    for (Eigen::Index n = 0; n < ni; ++n) {
        out.udot.set_node_value(interior[n], sol.primal.segment<3>(3 * n));
        out.lambda.coefficients()[interior[n]] = sol.dual[n];
    }
    out.u_next.coefficients() = (tau / d0) * out.udot.coefficients() - u_old;
    for (int z : scalar_.boundary_dofs()) {
        out.u_next.set_node_value(z, boundary_data_.node_value(z));
    }
    return out;
}

BfemStepResult Hmhf2dStepper::bfem_step(const FeFunction& u_prev, const FixedPointConfig& cfg)
{
    if (lumped_.weights.size() == 0) {
        lumped_ = lumped_mass(scalar_);
    }
    const double c = 2.0 / problem_.tau;
    const int nz = scalar_.num_scalar_dofs();
    const auto& interior = scalar_.interior_dofs();
    FeFunction w = u_prev;
    FeFunction lap_w = discrete_laplacian(stiffness_, w, lumped_);
    FeFunction next(problem_.space);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        next = boundary_data_;
        for (int z : interior) {
            const Eigen::Vector3d a = w.node_value(z).cross(lap_w.node_value(z));
            next.set_node_value(z, bfem_node_solve(c, a, u_prev.node_value(z)));
        }
        const FeFunction e(problem_.space, next.coefficients() - w.coefficients());
        const FeFunction lap_e = discrete_laplacian(stiffness_, e, lumped_);
        double r2 = 0.0;
        for (int z : interior) {
            const Eigen::Vector3d r = next.node_value(z).cross(lap_e.node_value(z)) + e.node_value(z).cross(lap_w.node_value(z));
            r2 += lumped_.weights[z] * r.squaredNorm();
        }
        const double residual = std::sqrt(r2);
        w = next;
        lap_w.coefficients() += lap_e.coefficients();
        if (residual < cfg.tolerance) {
            FeFunction u_next(problem_.space, 2.0 * w.coefficients() - u_prev.coefficients());
            for (int z = 0; z < nz; ++z) {
                if (scalar_.is_boundary(z)) {
                    u_next.set_node_value(z, boundary_data_.node_value(z));
                }
            }
            return {u_next, it, residual};
        }
        if (!std::isfinite(residual)) {
            break;
        }
    }
    throw FixedPointDivergence("fixed-point iteration did not reach tolerance in " + std::to_string(cfg.max_iterations) +
                               " iterations");
}

FeFunction Hmhf2dStepper::step(std::span<const FeFunction> history, int k, int* iterations)
{
    if (iterations != nullptr) {
        *iterations = 1;
    }
    switch (problem_.method) {
    case Method::Ppfem:
        return ppfem_step(history, k);
    case Method::Tfem:
        return tfem_step(history, k).u_next;
    case Method::Bfem: {
        BfemStepResult r = bfem_step(history[0], problem_.fixed_point);
        if (iterations != nullptr) {
            *iterations = r.iterations;
        }
        return r.u_next;
    }
    }
    throw InvalidArgument("unknown method");
}

FeFunction ppfem_step(const Hmhf2dProblem& problem, std::span<const FeFunction> history, int k)
{
    return Hmhf2dStepper(problem).ppfem_step(history, k);
}

TfemStepResult tfem_step(const Hmhf2dProblem& problem, std::span<const FeFunction> history, int k)
{
    return Hmhf2dStepper(problem).tfem_step(history, k);
}

BfemStepResult bfem_step(const Hmhf2dProblem& problem, const FeFunction& u_prev, const FixedPointConfig& cfg)
{
    return Hmhf2dStepper(problem).bfem_step(u_prev, cfg);
}

Hmhf2dResult solve_hmhf(const Hmhf2dProblem& problem, bool record_energy)
{
    const auto start = std::chrono::steady_clock::now();
    Hmhf2dStepper stepper(problem);
    const int steps = problem.num_steps();
    const int k = problem.bdf;
    std::deque<FeFunction> history{stepper.initial_state()};
    Hmhf2dResult out{history.front(), {}, {}, 0.0, steps, 0, 0.0};
    auto record = [&](const FeFunction& u) {
        if (record_energy) {
            out.energies.push_back(dirichlet_energy(stepper.stiffness(), u));
        }
        out.length_deviation.push_back(max_length_deviation(u));
    };
    record(history.front());
    std::vector<FeFunction> view;
    for (int j = 0; j < steps; ++j) {
        const int order = std::min<int>(k, static_cast<int>(history.size()));
        view.assign(history.begin(), history.end());
        int iterations = 1;
        FeFunction next = stepper.step(view, order, &iterations);
        out.inner_iterations += iterations;
        for (int z = 0; z < next.space().num_scalar_dofs(); ++z) {
            out.max_length_change = std::max(
                out.max_length_change, std::abs(next.node_value(z).squaredNorm() - history.front().node_value(z).squaredNorm()));
        }
        history.push_front(std::move(next));
        if (static_cast<int>(history.size()) > k) {
            history.pop_back();
        }
        record(history.front());
    }
    out.final_state = history.front();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace hmhf
