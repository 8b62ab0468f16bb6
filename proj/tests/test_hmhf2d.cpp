#include "hmhf/errors.hpp"
#include "hmhf/hmhf2d.hpp"
#include "hmhf/reference.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace hmhf;

namespace {

Hmhf2dProblem problem(int level, int p, bool iso, Method m, int bdf, double tau, double T,
                      InitialCondition ic = InitialCondition::HalfPiR2)
{
    auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(level, iso));
    return {lift_profile(initial_profile(ic)), T, tau, FeSpace::disk(mesh, p, 3), m, bdf, {1e-13, 200}};
}

Hmhf2dProblem constant_problem(int level, int p, Method m, int bdf)
{
    Hmhf2dProblem pb = problem(level, p, true, m, bdf, 1e-2, 0.05);
    pb.u0 = [](const Point2&) { return Eigen::Vector3d(0.0, 0.6, 0.8); };
    return pb;
}

// Two genuinely different states, newest first.
std::vector<FeFunction> two_states(const Hmhf2dProblem& pb)
{
    Hmhf2dStepper s(pb);
    std::vector<FeFunction> h{s.initial_state()};
    h.insert(h.begin(), s.ppfem_step(h, 1));
    return h;
}

std::vector<oracle::Vec> coefficients(const std::vector<FeFunction>& h)
{
    std::vector<oracle::Vec> out;
    for (const auto& f : h) {
        out.push_back(f.coefficients());
    }
    return out;
}

double max_abs(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

TEST_SUITE("hmhf2d")
{
    TEST_CASE("normalized extrapolation")
    {
        const auto pb = problem(1, 1, false, Method::Tfem, 2, 1e-2, 0.1);
        FeFunction u = interpolate_vector(pb.space, [](const Point2&) { return Eigen::Vector3d(0.6, 0.8, 0.0); });
        const std::vector<FeFunction> one{u};
        CHECK((extrapolate_2d_normalized(one, 1).coefficients() - u.coefficients()).norm() <= 1e-15);
        const std::vector<FeFunction> same{u, u};
        CHECK((extrapolate_2d_normalized(same, 2).coefficients() - u.coefficients()).norm() <= 1e-15);

        FeFunction a = interpolate_vector(pb.space, [](const Point2&) -> Eigen::Vector3d { return Eigen::Vector3d(0.6, 0.8, 0.0) * 0.75; });
        FeFunction b = interpolate_vector(pb.space, [](const Point2&) -> Eigen::Vector3d { return Eigen::Vector3d(0.6, 0.8, 0.0) * 0.25; });
        const std::vector<FeFunction> ab{a, b};  // 2a - b = 1.25 (0.6, 0.8, 0)
        CHECK((extrapolate_2d_normalized(ab, 2).node_value(0) - Eigen::Vector3d(0.6, 0.8, 0.0)).norm() <= 1e-15);

        const FeFunction twice(pb.space, 2.0 * u.coefficients());
        const std::vector<FeFunction> degenerate{u, twice};
        CHECK_THROWS_AS(extrapolate_2d_normalized(degenerate, 2), DegenerateExtrapolation);
    }

    TEST_CASE("constant fields are stationary")
    {
        for (Method m : {Method::Ppfem, Method::Tfem, Method::Bfem}) {
            for (int p : {1, 2}) {
                if (m == Method::Bfem && p == 2) {
                    continue;
                }
                CAPTURE(to_string(m));
                CAPTURE(p);
                const Hmhf2dProblem pb = constant_problem(2, p, m, m == Method::Bfem ? 1 : 2);
                Hmhf2dStepper s(pb);
                const FeFunction u0 = s.initial_state();
                if (m == Method::Tfem) {
                    const std::vector<FeFunction> h{u0};
                    const TfemStepResult r = s.tfem_step(h, 1);
                    // roundoff of K applied to a constant, amplified by the saddle-point solve
                    CHECK(max_abs(r.udot.coefficients()) <= 1e-12);
                    CHECK(max_abs(r.lambda.coefficients()) <= 1e-12);
                }
                if (m == Method::Bfem) {
                    const BfemStepResult r = s.bfem_step(u0, pb.fixed_point);
                    CHECK(r.iterations == 1);
                    CHECK(r.residual <= 1e-14);
                }
                const Hmhf2dResult r = solve_hmhf(pb);
                CHECK(max_abs(r.final_state.coefficients() - u0.coefficients()) <= 1e-14);
            }
        }
    }

    TEST_CASE("PPFEM step matches the dense oracle")
    {
        for (int p : {1, 2}) {
            for (int k : {1, 2}) {
                CAPTURE(p);
                CAPTURE(k);
                const auto pb = problem(1, p, false, Method::Ppfem, k, 1e-2, 0.1);
                const auto h = two_states(pb);
                const FeFunction next = ppfem_step(pb, h, k);
                const oracle::Vec o = oracle::ppfem_step(pb, coefficients(h), k);
                CHECK(max_abs(next.coefficients() - o) <= 1e-12);
                CHECK(max_length_deviation(next) <= 1e-14);
            }
        }
    }

    TEST_CASE("TFEM step matches the dense KKT oracle")
    {
        for (int p : {1, 2}) {
            for (int k : {1, 2}) {
                CAPTURE(p);
                CAPTURE(k);
                const auto pb = problem(1, p, false, Method::Tfem, k, 1e-2, 0.1);
                const auto h = two_states(pb);
                const TfemStepResult r = tfem_step(pb, h, k);
                const oracle::TfemResult o = oracle::tfem_step(pb, coefficients(h), k);
                CHECK(max_abs(r.udot.coefficients() - o.udot) <= 1e-10);
                CHECK(max_abs(r.lambda.coefficients() - o.lambda) <= 1e-10);
                CHECK(max_abs(r.u_next.coefficients() - o.u_next) <= 1e-10);

                // discrete orthogonality of the update against every multiplier
                const SparseMatrix B = tangent_constraint_matrix(extrapolate_2d_normalized(h, k));
                Vector udot(3 * pb.space.scalar().interior_dofs().size());
                for (std::size_t i = 0; i < pb.space.scalar().interior_dofs().size(); ++i) {
                    udot.segment<3>(3 * i) = r.udot.node_value(pb.space.scalar().interior_dofs()[i]);
                }
                const double scale = Eigen::MatrixXd(B).norm() * udot.norm();
                CHECK((B * udot).norm() <= 1e-9 * scale);
            }
        }
    }

    TEST_CASE("BFEM step matches a Newton solve")
    {
        const auto pb = problem(1, 1, false, Method::Bfem, 1, 1e-3, 0.1);
        const auto h = two_states(pb);
        const BfemStepResult r = bfem_step(pb, h[0], {1e-13, 200});
        const oracle::Vec o = oracle::bfem_step(pb, h[0].coefficients());
        CHECK(max_abs(r.u_next.coefficients() - o) <= 1e-10);
        for (int z = 0; z < pb.space.num_scalar_dofs(); ++z) {
            CHECK(std::abs(r.u_next.node_value(z).squaredNorm() - h[0].node_value(z).squaredNorm()) <= 1e-10);
        }
    }

    TEST_CASE("tangent constraint matrix")
    {
        const auto pb = problem(1, 2, false, Method::Tfem, 1, 1e-2, 0.1);
        Hmhf2dStepper s(pb);
        const FeFunction u = s.initial_state();
        const Eigen::MatrixXd B = tangent_constraint_matrix(u);
        const auto& in = pb.space.scalar().interior_dofs();
        REQUIRE(B.rows() == static_cast<Eigen::Index>(in.size()));
        REQUIRE(B.cols() == 3 * B.rows());
        for (int c = 0; c < 3; ++c) {
            const oracle::Dense W = oracle::mass_2d(pb.space, [&](const Eigen::Vector2d& x) {
                return oracle::eval_2d(pb.space, u.coefficients(), c, 3, x);
            });
            for (std::size_t i = 0; i < in.size(); ++i) {
                for (std::size_t j = 0; j < in.size(); ++j) {
                    REQUIRE(std::abs(B(i, 3 * j + c) - W(in[i], in[j])) <= 1e-13);
                }
            }
        }
    }

    TEST_CASE("a one step run equals the single step")
    {
        for (Method m : {Method::Ppfem, Method::Tfem, Method::Bfem}) {
            CAPTURE(to_string(m));
            const auto pb = problem(2, 1, true, m, m == Method::Bfem ? 1 : 2, 1e-3, 1e-3);
            const Hmhf2dResult r = solve_hmhf(pb);
            Hmhf2dStepper s(pb);
            const std::vector<FeFunction> h{s.initial_state()};
            CHECK(r.steps == 1);
            CHECK(max_abs(r.final_state.coefficients() - s.step(h, 1).coefficients()) == 0.0);
        }
    }

    TEST_CASE("energy decreases and lengths behave")
    {
        for (InitialCondition ic : {InitialCondition::HalfPiR2, InitialCondition::Sin2PiRPlusR}) {
            CAPTURE(to_string(ic));
            const auto pb = problem(4, 1, true, Method::Ppfem, 1, 1e-3, 0.1, ic);
            const Hmhf2dResult r = solve_hmhf(pb);
            REQUIRE(r.energies.size() == 101);
            for (std::size_t j = 1; j < r.energies.size(); ++j) {
                CHECK(r.energies[j] <= r.energies[j - 1] + 1e-8);
            }
            for (double d : r.length_deviation) {
                CHECK(d <= 1e-14);
            }
        }
        const Hmhf2dResult t = solve_hmhf(problem(4, 1, true, Method::Tfem, 1, 1e-3, 0.1));
        CHECK(*std::max_element(t.length_deviation.begin(), t.length_deviation.end()) <= 0.05);
    }

    TEST_CASE("BFEM preserves nodal lengths")
    {
        // nominal h = 2^-3, the contraction is slow here but holds
        const double tau = 0.25 * 0.125 * 0.125;
        auto pb = problem(3, 1, true, Method::Bfem, 1, tau, 50 * tau);
        pb.fixed_point = {1e-10, 200};
        const Hmhf2dResult r = solve_hmhf(pb);
        CHECK(r.steps == 50);
        CHECK(r.length_deviation.back() <= 1e-9);
        CHECK(r.max_length_change <= 1e-10);
        CHECK(r.average_inner_iterations() <= 200.0);
    }

    TEST_CASE("BFEM fixed point fails with tau proportional to h")
    {
        const DiskMesh m = build_disk_mesh(3, true);
        const double tau = 0.1 / std::ceil(0.1 / m.h);
        auto pb = problem(3, 1, true, Method::Bfem, 1, tau, 0.1);
        pb.fixed_point = {1e-10, 100};
        CHECK_THROWS_AS(solve_hmhf(pb), FixedPointDivergence);
    }

    TEST_CASE("argument checks")
    {
        CHECK_THROWS_AS(Hmhf2dStepper(problem(1, 2, true, Method::Bfem, 1, 1e-2, 0.1)), InvalidArgument);
        CHECK_THROWS_AS(Hmhf2dStepper(problem(1, 1, true, Method::Bfem, 2, 1e-2, 0.1)), InvalidArgument);
        CHECK_THROWS_AS((void)problem(1, 1, true, Method::Ppfem, 1, 0.03, 0.1).num_steps(), InvalidArgument);
        CHECK_THROWS_AS(parse_method("euler"), ParseError);
        CHECK(parse_method("tfem") == Method::Tfem);
    }
}
