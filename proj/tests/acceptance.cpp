// Acceptance suite: one PASS/FAIL line per criterion.
//
//   hmhf_acceptance [--cache DIR] [--known-failures 5,4] [criterion ...]
//
// Exit status is 1 when a criterion fails that is not listed in
// --known-failures. Listed criteria are still run and reported.

#include "hmhf/assembly.hpp"
#include "hmhf/errors.hpp"
#include "hmhf/hmhf2d.hpp"
#include "hmhf/reference.hpp"
#include "hmhf/rshmhf.hpp"
#include "hmhf/study.hpp"

#include "oracle.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hmhf;

namespace {

// Criterion 1
constexpr double bdf1_1d_lo = 0.85, bdf1_1d_hi = 1.1;
constexpr double bdf2_1d_lo = 1.8, bdf2_1d_hi = 2.5;
constexpr double budget_1 = 120.0;
// Criterion 2
constexpr double p1_l2 = 2.0, p1_l2_tol = 0.25, p1_h1 = 1.0, p1_h1_tol = 0.15;
constexpr double p2_l2 = 3.0, p2_l2_tol = 0.2, p2_h1 = 2.0, p2_h1_tol = 0.15;
constexpr double budget_2 = 300.0;
// Criterion 3
constexpr double pp_bdf1_tol = 0.15, pp_bdf2_tol = 0.3, pp_p1_tol = 0.25;
constexpr double pp_p2_min = 2.8, pp_p2_anomaly = 3.5;
// Criterion 4
constexpr double tf_bdf1_tol = 0.15, tf_bdf2_l2_tol = 0.3, tf_bdf2_h1_lo = 1.6, tf_bdf2_h1_hi = 2.2;
constexpr double tf_p1_tol = 0.25, tf_p2_l2_tol = 0.25, tf_p2_h1_lo = 2.2, tf_p2_h1_hi = 3.0;
// Criterion 5
constexpr double bf_l2_tol = 0.25, bf_h1_lo = 1.3, bf_h1_hi = 1.7, bf_max_iter = 5.0;
// Criterion 6
constexpr double pp_length_tol = 1e-14, bf_length_tol = 1e-10, tf_orth_tol = 1e-9;
constexpr double stationary_tol = 1e-12, laplacian_tol = 1e-12, closed_form_tol = 1e-14;
// Criterion 7
constexpr double beta_const_tol = 1e-6, beta_variation = 0.10, budget_7 = 60.0;
// Criterion 8
constexpr double oracle_tol = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string cache_dir = "acceptance-cache";
ReferenceCache* references = nullptr;

struct Check {
    bool ok = true;
    void expect(bool cond, const char* what, double value)
    {
        std::printf("    %-58s %12.5g  %s\n", what, value, cond ? "ok" : "FAIL");
        ok = ok && cond;
    }
};

bool within(double v, double centre, double tol) { return std::abs(v - centre) <= tol; }
bool between(double v, double lo, double hi) { return v >= lo && v <= hi; }

ErrorReport study(const std::string& preset)
{
    const auto t0 = Clock::now();
    const ErrorReport r = run_study(study_preset(preset), *references);
    std::printf("  %s (%s p=%d BDF%d): %.1f s\n", preset.c_str(), r.method.c_str(), r.p, r.bdf, seconds_since(t0));
    for (const ReportRow& row : r.rows) {
        std::printf("    %-10g L2 %.4e eoc %5s  H1 %.4e eoc %5s  it %.2f  %.2f s  %s\n", row.ladder_value, row.l2,
                    row.eoc_l2 ? std::to_string(*row.eoc_l2).substr(0, 5).c_str() : "-", row.h1,
                    row.eoc_h1 ? std::to_string(*row.eoc_h1).substr(0, 5).c_str() : "-", row.inner_iterations,
                    row.wall_seconds, row.status.c_str());
    }
    return r;
}

bool all_ok(const ErrorReport& r)
{
    for (const ReportRow& row : r.rows) {
        if (!row.ok()) {
            return false;
        }
    }
    return true;
}

double final_l2(const ErrorReport& r) { return r.rows.back().eoc_l2.value_or(std::nan("")); }
double final_h1(const ErrorReport& r) { return r.rows.back().eoc_h1.value_or(std::nan("")); }

Hmhf2dProblem disk_problem(int level, int p, bool iso, Method m, int bdf, double tau, double T)
{
    auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(level, iso));
    return {lift_profile(initial_profile(InitialCondition::HalfPiR2)), T, tau, FeSpace::disk(mesh, p, 3), m, bdf,
            {1e-10, 100}};
}

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

double max_abs(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

bool criterion1()
{
    Check c;
    // the shared reference is built once and not charged to the ladders
    references->get(InitialCondition::HalfPiR2, study_preset("table1").reference);
    const auto t0 = Clock::now();
    const ErrorReport b1 = study("table1");
    const ErrorReport b2 = study("table2");
    const double wall = seconds_since(t0);
    c.expect(all_ok(b1) && all_ok(b2), "all cells solved", 1.0);
    c.expect(between(final_l2(b1), bdf1_1d_lo, bdf1_1d_hi), "BDF1 final L2 EOC in [0.85, 1.1]", final_l2(b1));
    c.expect(between(final_l2(b2), bdf2_1d_lo, bdf2_1d_hi), "BDF2 final L2 EOC in [1.8, 2.5]", final_l2(b2));
    c.expect(wall <= budget_1, "runtime [s] <= 120", wall);
    return c.ok;
}

bool criterion2()
{
    Check c;
    const auto t0 = Clock::now();
    const ErrorReport p1 = study("table3");
    const ErrorReport p2 = study("table4");
    const double wall = seconds_since(t0);
    c.expect(all_ok(p1) && all_ok(p2), "all cells solved", 1.0);
    for (std::size_t i = 1; i < p1.rows.size(); ++i) {
        c.expect(within(*p1.rows[i].eoc_l2, p1_l2, p1_l2_tol), "p=1 L2 EOC 2 +- 0.25", *p1.rows[i].eoc_l2);
        c.expect(within(*p1.rows[i].eoc_h1, p1_h1, p1_h1_tol), "p=1 H1 EOC 1 +- 0.15", *p1.rows[i].eoc_h1);
    }
    for (std::size_t i = 1; i < p2.rows.size(); ++i) {
        c.expect(within(*p2.rows[i].eoc_l2, p2_l2, p2_l2_tol), "p=2 L2 EOC 3 +- 0.2", *p2.rows[i].eoc_l2);
        c.expect(within(*p2.rows[i].eoc_h1, p2_h1, p2_h1_tol), "p=2 H1 EOC 2 +- 0.15", *p2.rows[i].eoc_h1);
    }
    c.expect(wall <= budget_2, "runtime [s] <= 300", wall);
    return c.ok;
}

bool criterion3()
{
    Check c;
    const ErrorReport b1 = study("table5");
    const ErrorReport b2 = study("table6");
    const ErrorReport s1 = study("table7");
    const ErrorReport s2 = study("table8");
    c.expect(all_ok(b1) && all_ok(b2) && all_ok(s1) && all_ok(s2), "all cells solved", 1.0);
    c.expect(within(final_l2(b1), 1.0, pp_bdf1_tol), "BDF1 temporal final L2 EOC 1 +- 0.15", final_l2(b1));
    c.expect(within(final_l2(b2), 2.0, pp_bdf2_tol), "BDF2 temporal final L2 EOC 2 +- 0.3", final_l2(b2));
    c.expect(within(final_l2(s1), 2.0, pp_p1_tol), "p=1 spatial final L2 EOC 2 +- 0.25", final_l2(s1));
    c.expect(final_l2(s2) >= pp_p2_min, "p=2 spatial final L2 EOC >= 2.8", final_l2(s2));
    std::printf("    note: p=2 spatial L2 EOC %.2f %s the anomalous rate (>= %.1f)\n", final_l2(s2),
                final_l2(s2) >= pp_p2_anomaly ? "reproduces" : "does not reproduce", pp_p2_anomaly);
    return c.ok;
}

bool criterion4()
{
    Check c;
    const ErrorReport b1 = study("table9");
    const ErrorReport b2 = study("table10");
    const ErrorReport s1 = study("table11");
    const ErrorReport s2 = study("table12");
    c.expect(all_ok(b1) && all_ok(b2) && all_ok(s1) && all_ok(s2), "all cells solved", 1.0);
    c.expect(within(final_l2(b1), 1.0, tf_bdf1_tol), "BDF1 temporal final L2 EOC 1 +- 0.15", final_l2(b1));
    c.expect(within(final_l2(b2), 2.0, tf_bdf2_l2_tol), "BDF2 temporal final L2 EOC 2 +- 0.3", final_l2(b2));
    c.expect(between(final_h1(b2), tf_bdf2_h1_lo, tf_bdf2_h1_hi), "BDF2 temporal final H1 EOC in [1.6, 2.2]",
             final_h1(b2));
    c.expect(within(final_l2(s1), 2.0, tf_p1_tol), "p=1 spatial final L2 EOC 2 +- 0.25", final_l2(s1));
    c.expect(within(final_l2(s2), 3.0, tf_p2_l2_tol), "p=2 spatial final L2 EOC 3 +- 0.25", final_l2(s2));
    c.expect(between(final_h1(s2), tf_p2_h1_lo, tf_p2_h1_hi), "p=2 spatial final H1 EOC in [2.2, 3.0]", final_h1(s2));
    return c.ok;
}

bool criterion5()
{
    Check c;
    const ErrorReport r = study("table13");
    c.expect(all_ok(r), "all cells solved", 1.0);
    c.expect(within(final_l2(r), 2.0, bf_l2_tol), "final L2 EOC 2 +- 0.25", final_l2(r));
    c.expect(between(final_h1(r), bf_h1_lo, bf_h1_hi), "final H1 EOC in [1.3, 1.7]", final_h1(r));
    double worst = 0.0;
    for (const ReportRow& row : r.rows) {
        worst = std::max(worst, row.inner_iterations);
    }
    c.expect(worst <= bf_max_iter, "max average inner iterations <= 5", worst);

    // tau = h / 4 diverges, tau = h^2 / 8 does not, on the same meshes (h = 2^-level)
    for (int level : {3, 4, 5}) {
        const double h = std::ldexp(1.0, -level);
        bool raised = false;
        try {
            solve_hmhf(disk_problem(level, 1, true, Method::Bfem, 1, h / 4, h), false);
        } catch (const FixedPointDivergence&) {
            raised = true;
        }
        c.expect(raised, ("divergence raised, tau = h/4, level " + std::to_string(level)).c_str(), h / 4);
        const Hmhf2dResult ok = solve_hmhf(disk_problem(level, 1, true, Method::Bfem, 1, h * h / 8, h * h / 2), false);
        c.expect(ok.steps == 4, ("converges, tau = h^2/8, level " + std::to_string(level)).c_str(),
                 ok.average_inner_iterations());
    }
    return c.ok;
}

bool criterion6()
{
    Check c;
    {
        const auto pb = disk_problem(3, 2, true, Method::Ppfem, 2, 1e-3, 2e-2);
        const Hmhf2dResult r = solve_hmhf(pb);
        double dev = 0.0;
        for (double d : r.length_deviation) {
            dev = std::max(dev, d);
        }
        c.expect(dev <= pp_length_tol, "PPFEM max | |u(z)| - 1 | over 20 steps", dev);
    }
    {
        const auto pb = disk_problem(4, 1, true, Method::Bfem, 1, 1e-5, 1e-3);
        const Hmhf2dResult r = solve_hmhf(pb);
        c.expect(r.max_length_change <= bf_length_tol, "BFEM max | |u^{j+1}|^2 - |u^j|^2 | over 100 steps",
                 r.max_length_change);
    }
    {
        double worst = 0.0;
        for (int p : {1, 2}) {
            const auto pb = disk_problem(3, p, true, Method::Tfem, 2, 1e-3, 1e-2);
            Hmhf2dStepper s(pb);
            std::vector<FeFunction> h{s.initial_state()};
            h.insert(h.begin(), s.tfem_step(h, 1).u_next);
            for (int j = 0; j < 5; ++j) {
                const TfemStepResult r = s.tfem_step(h, 2);
                const SparseMatrix B = tangent_constraint_matrix(extrapolate_2d_normalized(h, 2));
                const auto& in = pb.space.scalar().interior_dofs();
                Eigen::VectorXd v(3 * in.size());
                for (std::size_t i = 0; i < in.size(); ++i) {
                    v.segment<3>(3 * i) = r.udot.node_value(in[i]);
                }
                worst = std::max(worst, (B * v).norm() / (B.norm() * v.norm()));
                h = {r.u_next, h[0]};
            }
        }
        c.expect(worst <= tf_orth_tol, "TFEM scaled |B udot| / (|B| |udot|)", worst);
    }
    {
        double worst = 0.0;
        for (Method m : {Method::Ppfem, Method::Tfem, Method::Bfem}) {
            for (int p : {1, 2}) {
                if (m == Method::Bfem && p == 2) {
                    continue;
                }
                auto pb = disk_problem(3, p, true, m, m == Method::Bfem ? 1 : 2, 1e-2, 0.05);
                pb.u0 = [](const Point2&) { return Eigen::Vector3d(0.48, 0.6, 0.64); };
                const Hmhf2dResult r = solve_hmhf(pb);
                const FeFunction u0 = interpolate_vector(pb.space, pb.u0);
                worst = std::max(worst, max_abs(r.final_state.coefficients() - u0.coefficients()));
            }
        }
        c.expect(worst <= stationary_tol, "constant unit field drift, all methods", worst);
    }
    {
        auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(3, true));
        const FeSpace V = FeSpace::disk(mesh, 1, 3);
        const LumpedMass L = lumped_mass(V.scalar());
        const SparseMatrix K = expand_components(assemble_stiffness(V.scalar()), 3);
        std::mt19937 gen(1);
        std::uniform_real_distribution<double> dist(-1, 1);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            Eigen::VectorXd a(V.num_dofs());
            Eigen::VectorXd b(V.num_dofs());
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                a[i] = dist(gen);
                b[i] = dist(gen);
            }
            const FeFunction u(V, a);
            const FeFunction w(V, b);
            const double lhs = -L.inner(discrete_laplacian(V, u, L), w);
            const double rhs = a.dot(K * b);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        c.expect(worst <= laplacian_tol, "discrete Laplacian identity, 20 random pairs", worst);
    }
    {
        const double h = 0.25;
        const FeSpace V = FeSpace::interval(std::make_shared<const IntervalMesh>(build_interval_mesh(4)), 1);
        const Eigen::MatrixXd M = assemble_mass(V);
        const Eigen::MatrixXd K = assemble_stiffness(V);
        Eigen::Matrix2d me;
        me << 2, 1, 1, 2;
        me *= h / 6;
        Eigen::Matrix2d ke;
        ke << 1, -1, -1, 1;
        ke /= h;
        // node 0 only touches the first element
        double dev = std::max(std::abs(M(0, 0) - me(0, 0)), std::abs(M(0, 1) - me(0, 1)));
        dev = std::max(dev, std::max(std::abs(K(0, 0) - ke(0, 0)), std::abs(K(0, 1) - ke(0, 1))));
        dev = std::max(dev, std::max(std::abs(M(1, 1) - 2 * me(1, 1)), std::abs(K(1, 1) - 2 * ke(1, 1))));
        c.expect(dev <= closed_form_tol, "P1 element mass/stiffness closed forms", dev);
    }
    return c.ok;
}

bool criterion7()
{
    Check c;
    const auto t0 = Clock::now();
    for (int p : {1, 2}) {
        double lo = 1e300;
        double hi = 0.0;
        double const_dev = 0.0;
        for (int level = 2; level <= 4; ++level) {
            auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(level, true));
            const FeSpace V = FeSpace::disk(mesh, p, 3);
            const double b1 = tangent_inf_sup(interpolate_vector(V, [](const Point2&) {
                return Eigen::Vector3d(0, 0, 1);
            }));
            const double be = tangent_inf_sup(
                interpolate_vector(V, lift_profile(initial_profile(InitialCondition::HalfPiR2))));
            std::printf("    p=%d level %d: beta(const) %.12f  beta(exact) %.6f\n", p, level, b1, be);
            const_dev = std::max(const_dev, std::abs(b1 - 1.0));
            lo = std::min(lo, be);
            hi = std::max(hi, be);
        }
        c.expect(const_dev <= beta_const_tol, ("p=" + std::to_string(p) + " |beta - 1|, constant field").c_str(),
                 const_dev);
        c.expect((hi - lo) / hi < beta_variation,
                 ("p=" + std::to_string(p) + " relative beta variation, levels 2-4").c_str(), (hi - lo) / hi);
    }
    const double wall = seconds_since(t0);
    c.expect(wall <= budget_7, "runtime [s] <= 60", wall);
    return c.ok;
}

bool criterion8()
{
    Check c;
    double worst = 0.0;
    for (int p : {1, 2}) {
        const FeSpace I = FeSpace::interval(std::make_shared<const IntervalMesh>(build_interval_mesh(8)), p);
        worst = std::max(worst, (Eigen::MatrixXd(assemble_mass(I)) - oracle::mass_1d(I, [](double, double) {
                                     return 1.0;
                                 })).cwiseAbs().maxCoeff());
        worst = std::max(worst, (Eigen::MatrixXd(assemble_stiffness(I)) - oracle::stiffness_1d(I)).cwiseAbs().maxCoeff());
        worst = std::max(worst,
                         (Eigen::MatrixXd(assemble_convection_1d(I)) - oracle::convection_1d(I)).cwiseAbs().maxCoeff());
        auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(1, false));
        const FeSpace D = FeSpace::disk(mesh, p);
        worst = std::max(worst, (Eigen::MatrixXd(assemble_mass(D)) - oracle::mass_2d(D, [](const Eigen::Vector2d&) {
                                     return 1.0;
                                 })).cwiseAbs().maxCoeff());
        worst = std::max(worst, (Eigen::MatrixXd(assemble_stiffness(D)) - oracle::stiffness_2d(D)).cwiseAbs().maxCoeff());
    }
    c.expect(worst <= oracle_tol, "mass / stiffness / convection assembly", worst);

    worst = 0.0;
    for (int p : {1, 2}) {
        for (int k : {1, 2}) {
            const Rshmhf1dProblem pb{initial_profile(InitialCondition::Sin2PiRPlusR), 0.1, 1e-2,
                                     FeSpace::interval(std::make_shared<const IntervalMesh>(build_interval_mesh(8)), p)};
            Rshmhf1dStepper s(pb);
            std::vector<FeFunction> h{s.initial_state()};
            h.insert(h.begin(), s.step(h, 1));
            const FeFunction next = s.step(h, k);
            worst = std::max(worst, max_abs(next.coefficients() - oracle::rshmhf_step(pb, coefficients(h), k)));
        }
    }
    c.expect(worst <= oracle_tol, "radial step, n = 8, p = 1, 2, BDF1/2", worst);

    double pp = 0.0;
    double tf = 0.0;
    for (int p : {1, 2}) {
        for (int k : {1, 2}) {
            const auto ppb = disk_problem(1, p, false, Method::Ppfem, k, 1e-2, 0.1);
            const auto h = two_states(ppb);
            pp = std::max(pp, max_abs(ppfem_step(ppb, h, k).coefficients() - oracle::ppfem_step(ppb, coefficients(h), k)));
            const auto tpb = disk_problem(1, p, false, Method::Tfem, k, 1e-2, 0.1);
            const TfemStepResult r = tfem_step(tpb, h, k);
            const oracle::TfemResult o = oracle::tfem_step(tpb, coefficients(h), k);
            tf = std::max({tf, max_abs(r.udot.coefficients() - o.udot), max_abs(r.lambda.coefficients() - o.lambda),
                           max_abs(r.u_next.coefficients() - o.u_next)});
        }
    }
    c.expect(pp <= oracle_tol, "PPFEM step, level 1, p = 1, 2, BDF1/2", pp);
    c.expect(tf <= oracle_tol, "TFEM step (udot, lambda, u), level 1, p = 1, 2", tf);

    const auto bpb = disk_problem(1, 1, false, Method::Bfem, 1, 1e-3, 0.1);
    const auto h = two_states(bpb);
    const BfemStepResult r = bfem_step(bpb, h[0], {1e-13, 200});
    const double bf = max_abs(r.u_next.coefficients() - oracle::bfem_step(bpb, h[0].coefficients()));
    c.expect(bf <= oracle_tol, "BFEM step against Newton, level 1", bf);

    const FeSpace& L1 = bpb.space;
    const Eigen::VectorXd lo = oracle::discrete_laplacian(L1, h[0].coefficients());
    const double lap =
        max_abs(discrete_laplacian(L1, h[0], lumped_mass(L1.scalar())).coefficients() - lo) / std::max(1.0, max_abs(lo));
    c.expect(lap <= oracle_tol, "discrete Laplacian (relative), level 1", lap);
    return c.ok;
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    std::set<int> known;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cache" && i + 1 < argc) {
            cache_dir = argv[++i];
        } else if (a == "--known-failures" && i + 1 < argc) {
            std::string list = argv[++i];
            for (char& ch : list) {
                ch = ch == ',' ? ' ' : ch;
            }
            std::istringstream is(list);
            for (int id = 0; is >> id;) {
                known.insert(id);
            }
        } else if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0]))) {
            only.insert(std::stoi(a));
        } else {
            std::fprintf(stderr, "unknown argument %s\n", a.c_str());
            return 2;
        }
    }
    ReferenceCache cache(cache_dir);
    references = &cache;

    const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
        {"1D temporal orders", criterion1},
        {"1D spatial orders", criterion2},
        {"PPFEM orders", criterion3},
        {"TFEM orders", criterion4},
        {"BFEM orders, iterations, divergence", criterion5},
        {"structural invariants", criterion6},
        {"inf-sup constant", criterion7},
        {"oracle equivalence", criterion8},
    };
    std::vector<std::string> summary;
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && only.count(id) == 0) {
            continue;
        }
        std::printf("criterion %d: %s\n", id, criteria[i].first);
        std::fflush(stdout);
        const auto t0 = Clock::now();
        bool ok = false;
        try {
            ok = criteria[i].second();
        } catch (const std::exception& e) {
            std::printf("    exception: %s\n", e.what());
        }
        const bool expected = known.count(id) != 0;
        char line[200];
        std::snprintf(line, sizeof line, "[%s] criterion %d: %s (%.1f s)%s", ok ? "PASS" : "FAIL", id,
                      criteria[i].first, seconds_since(t0),
                      ok ? (expected ? "  listed as known failure but passed" : "")
                         : (expected ? "  known failure, see README" : ""));
        std::printf("%s\n\n", line);
        std::fflush(stdout);
        summary.emplace_back(line);
        failed += ok || expected ? 0 : 1;
    }
    std::printf("summary\n");
    for (const auto& s : summary) {
        std::printf("  %s\n", s.c_str());
    }
    return failed == 0 ? 0 : 1;
}
