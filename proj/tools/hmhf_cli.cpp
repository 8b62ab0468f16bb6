#include "hmhf/errors.hpp"
#include "hmhf/hmhf2d.hpp"
#include "hmhf/io.hpp"
#include "hmhf/mesh.hpp"
#include "hmhf/reference.hpp"
#include "hmhf/rshmhf.hpp"
#include "hmhf/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

using namespace hmhf;

namespace {

struct Common {
    std::string method = "ppfem";
    int p = 1;
    int bdf = 1;
    double tau = 0.0;  // unset
    int level = 3;
    double T = 0.1;
    std::string ic = "halfpi_r2";
    double eps = 1e-10;
    int max_iter = 100;
    std::string out;
    std::string format = "csv";
    std::string dump_mesh;
    std::string dump_fields;
    std::string ref;
    std::string ref_dir = "hmhf-cache";
    int jobs = 1;
};

void add_discretization(CLI::App* app, Common& o, bool with_method)
{
    if (with_method) {
        app->add_option("--method", o.method, "ppfem, tfem or bfem")->check(CLI::IsMember({"ppfem", "tfem", "bfem"}));
    }
    app->add_option("--p", o.p, "polynomial degree")->check(CLI::IsMember({1, 2}));
    app->add_option("--bdf", o.bdf, "BDF order")->check(CLI::IsMember({1, 2}));
    app->add_option("--tau", o.tau, "time step (default 1e-3, bfem: largest T/n <= h^2/8 with h = 2^-level)");
    app->add_option("--level", o.level, "refinement level (1D: 2^level intervals)");
    app->add_option("--T", o.T, "final time");
    app->add_option("--ic", o.ic, "initial condition")->check(CLI::IsMember({"halfpi_r2", "sin2pir_plus_r"}));
}

double resolved_tau(const Common& o, bool bfem)
{
    if (o.tau > 0.0) {
        return o.tau;
    }
    if (!bfem) {
        return 1e-3;
    }
    const double h = std::ldexp(1.0, -o.level);
    return o.T / std::ceil(o.T / (h * h / 8));
}

// Writes to --out when given, otherwise to stdout.
template <class F>
void emit(const std::string& path, F&& write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) {
        throw InvalidArgument("cannot open " + path);
    }
    write(os);
}

Reference1d load_or_compute_reference(const Common& o, ReferenceCache& cache)
{
    if (!o.ref.empty()) {
        std::ifstream in(o.ref);
        if (!in) {
            throw InvalidArgument("cannot open reference " + o.ref);
        }
        return read_reference(in);
    }
    ReferenceConfig rc;
    rc.T = o.T;
    return cache.get(parse_initial_condition(o.ic), rc);
}

StudySpec load_spec(const std::string& name)
{
    if (std::filesystem::exists(name)) {
        std::ifstream in(name);
        return parse_study_spec(in);
    }
    return study_preset(name);
}

int run_solve1d(const Common& o)
{
    auto mesh = std::make_shared<const IntervalMesh>(build_interval_mesh(1 << o.level));
    const InitialCondition ic = parse_initial_condition(o.ic);
    Rshmhf1dProblem problem{initial_profile(ic), o.T, resolved_tau(o, false), FeSpace::interval(mesh, o.p)};
    const Rshmhf1dResult r = solve_rshmhf(problem, o.bdf);
    std::printf("steps %d  wall %.3f s  energy %.10e -> %.10e\n", r.steps, r.wall_seconds, r.energies.front(),
                r.energies.back());
    if (!o.ref.empty()) {
        ReferenceCache cache;
        const Reference1d ref = load_or_compute_reference(o, cache);
        const ErrorNorms e = error_norms_1d(r.final_state, ref.u);
        std::printf("L2 %.4e  H1 %.4e\n", e.l2, e.h1);
    }
    if (!o.out.empty()) {
        emit(o.out, [&](std::ostream& os) { write_profile(os, r.final_state); });
    }
    return 0;
}

int run_solve2d(const Common& o)
{
    auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(o.level, true));
    if (!o.dump_mesh.empty()) {
        emit(o.dump_mesh, [&](std::ostream& os) { write_mesh(os, *mesh); });
    }
    const InitialCondition ic = parse_initial_condition(o.ic);
    Hmhf2dProblem problem{lift_profile(initial_profile(ic)),
                          o.T,
                          resolved_tau(o, o.method == "bfem"),
                          FeSpace::disk(mesh, o.p, 3),
                          parse_method(o.method),
                          o.bdf,
                          {o.eps, o.max_iter}};
    const Hmhf2dResult r = solve_hmhf(problem);
    std::printf("%s p=%d bdf=%d level=%d tau=%g: steps %d  wall %.3f s (%.3e s/step)  inner it %.2f\n",
                o.method.c_str(), o.p, o.bdf, o.level, problem.tau, r.steps, r.wall_seconds, r.wall_seconds / r.steps,
                r.average_inner_iterations());
    std::printf("energy %.10e -> %.10e  max | |u|-1 | %.3e\n", r.energies.front(), r.energies.back(),
                r.length_deviation.back());
    if (!o.ref.empty()) {
        ReferenceCache cache(o.ref_dir);
        Common oo = o;
        if (oo.ref == "auto") {
            oo.ref.clear();
        }
        const Reference1d ref = load_or_compute_reference(oo, cache);
        const ErrorNorms e = evaluate_against_reference(r.final_state, lift_reference(ref, problem.space));
        std::printf("L2 %.4e  H1 %.4e\n", e.l2, e.h1);
    }
    if (!o.dump_fields.empty()) {
        std::ofstream snap(o.dump_fields + ".txt");
        write_snapshot(snap, r.final_state, o.T);
        std::ofstream vtk(o.dump_fields + ".vtk");
        write_vtk(vtk, r.final_state);
    }
    return 0;
}

int run_study_cmd(const Common& o, const std::string& name, bool print_spec)
{
    StudySpec spec = load_spec(name);
    if (print_spec) {
        write_study_spec(std::cout, spec);
        return 0;
    }
    if (o.jobs > 1) {
        spec.jobs = o.jobs;
    }
    ReferenceCache cache(o.ref_dir);
    const ErrorReport rep = run_study(spec, cache);
    emit(o.out, [&](std::ostream& os) {
        if (o.format == "md") {
            write_markdown(os, rep);
        } else {
            write_csv(os, rep);
        }
    });
    for (const ReportRow& r : rep.rows) {
        if (!r.ok()) {
            std::fprintf(stderr, "cell %g failed: %s\n", r.ladder_value, r.status.c_str());
        }
    }
    return 0;
}

int run_compare(const Common& o, const std::vector<std::string>& names)
{
    std::vector<StudySpec> specs;
    for (const auto& n : names) {
        specs.push_back(load_spec(n));
        if (o.jobs > 1) {
            specs.back().jobs = o.jobs;
        }
    }
    ReferenceCache cache(o.ref_dir);
    const Comparison cmp = compare_methods(specs, cache);
    emit(o.out, [&](std::ostream& os) { write_comparison(os, cmp, o.format == "md"); });
    return 0;
}

int run_infsup(const Common& o, const std::string& field, int level_to)
{
    std::printf("level  h          beta\n");
    const InitialCondition ic = parse_initial_condition(o.ic);
    for (int l = o.level; l <= std::max(o.level, level_to); ++l) {
        auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(l, true));
        const FeSpace V = FeSpace::disk(mesh, o.p, 3);
        FeFunction uhat = field == "constant"
                              ? interpolate_vector(V, [](const Point2&) { return Eigen::Vector3d(0, 0, 1); })
                              : interpolate_vector(V, lift_profile(initial_profile(ic)));
        std::printf("%-6d %.4e %.10f\n", l, mesh->h, tangent_inf_sup(uhat));
    }
    return 0;
}

int run_lift(const Common& o, bool compute)
{
    ReferenceCache cache(o.ref_dir);
    const Reference1d ref = load_or_compute_reference(o, cache);
    if (compute) {
        emit(o.out, [&](std::ostream& os) { write_reference(os, ref); });
        return 0;
    }
    auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(o.level, true));
    const LiftedReference lifted = lift_reference(ref, FeSpace::disk(mesh, o.p, 3));
    std::fprintf(stderr, "lifted onto level %d, p=%d: %d nodes, max | |u|-1 | %.2e\n", o.level, o.p,
                 lifted.target.space().num_scalar_dofs(), max_length_deviation(lifted.target));
    emit(o.out, [&](std::ostream& os) {
        if (o.format == "vtk") {
            write_vtk(os, lifted.target, "lifted reference");
        } else {
            write_snapshot(os, lifted.target, ref.config.T);
        }
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Harmonic map heat flow solvers and convergence studies"};
    app.require_subcommand(1);
    Common o;
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "csv or md (lift: snapshot or vtk)")
        ->check(CLI::IsMember({"csv", "md", "snapshot", "vtk"}));
    app.add_option("--ref-dir", o.ref_dir, "directory caching 1D reference solutions");

    auto* s1 = app.add_subcommand("solve1d", "radial profile solve");
    add_discretization(s1, o, false);
    s1->add_option("--ref", o.ref, "reference file to measure errors against");

    auto* s2 = app.add_subcommand("solve2d", "solve on the disk");
    add_discretization(s2, o, true);
    s2->add_option("--eps", o.eps, "fixed-point tolerance (bfem)");
    s2->add_option("--max-iter", o.max_iter, "fixed-point iteration cap (bfem)");
    s2->add_option("--dump-mesh", o.dump_mesh, "write the mesh to this file");
    s2->add_option("--dump-fields", o.dump_fields, "write <prefix>.txt snapshot and <prefix>.vtk");
    s2->add_option("--ref", o.ref, "reference file, or 'auto' for the cached default");

    std::string study_name;
    bool print_spec = false;
    auto* st = app.add_subcommand("study", "run a convergence ladder");
    st->add_option("spec", study_name, "preset (table1..table13) or spec file")->required();
    st->add_option("--jobs", o.jobs, "parallel ladder cells");
    st->add_flag("--print-spec", print_spec, "print the resolved spec and exit");

    std::vector<std::string> compare_names;
    auto* cm = app.add_subcommand("compare", "run several studies, rank by time to equal L2 error");
    cm->add_option("specs", compare_names, "presets or spec files")->required();
    cm->add_option("--jobs", o.jobs, "parallel ladder cells");

    std::string field = "exact";
    int level_to = 0;
    auto* is = app.add_subcommand("infsup", "inf-sup constant of the tangent constraint");
    add_discretization(is, o, false);
    is->add_option("--field", field, "constant or exact")->check(CLI::IsMember({"constant", "exact"}));
    is->add_option("--level-to", level_to, "last level of a sweep starting at --level");

    bool compute = false;
    auto* lf = app.add_subcommand("lift", "lift a 1D reference onto a disk space");
    add_discretization(lf, o, false);
    lf->add_option("--ref", o.ref, "reference file (default: cached standard reference)");
    lf->add_flag("--compute", compute, "write the 1D reference itself instead");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s1) {
            return run_solve1d(o);
        }
        if (*s2) {
            return run_solve2d(o);
        }
        if (*st) {
            return run_study_cmd(o, study_name, print_spec);
        }
        if (*cm) {
            return run_compare(o, compare_names);
        }
        if (*is) {
            return run_infsup(o, field, level_to);
        }
        if (*lf) {
            return run_lift(o, compute);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
