#pragma once

#include "hmhf/hmhf2d.hpp"
#include "hmhf/reference.hpp"

#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hmhf {

enum class LadderAxis { Tau, Level };

/// One convergence ladder. `method` is "rshmhf" for the radial solver or a
/// 2D method id. Along a tau ladder `level` is fixed; along a level ladder
/// `tau` is. For the radial solver level L means 2^L intervals.
struct StudySpec {
    std::string name = "custom";
    std::string method = "rshmhf";
    int p = 2;
    int bdf = 2;
    LadderAxis axis = LadderAxis::Tau;
    std::vector<double> ladder;
    double tau = 1e-4;
    int level = 4;
    double T = 0.1;
    InitialCondition ic = InitialCondition::HalfPiR2;
    ReferenceConfig reference;
    FixedPointConfig fixed_point;
    int jobs = 1;

    /// Throws InvalidArgument on non-monotone ladders, non-integral T/tau,
    /// unknown methods or BFEM outside p = 1, k = 1.
    void validate() const;
};

/// Flat "key = value" text, '#' starts a comment. Keys: name, method, p,
/// bdf, axis (tau|level), ladder (whitespace or comma separated), tau,
/// level, T, ic, ref_n, ref_p, ref_tau, ref_bdf, eps, max_iter, jobs.
StudySpec parse_study_spec(std::istream& is);
void write_study_spec(std::ostream& os, const StudySpec& spec);

/// Desk-scale replicas "table1" .. "table13".
StudySpec study_preset(const std::string& name);
std::vector<std::string> study_preset_names();

/// log2(e_{i-1} / e_i); the first entry is empty. Throws InvalidArgument on
/// a non-positive error.
std::vector<std::optional<double>> compute_eoc(const std::vector<double>& errors);

struct ReportRow {
    double ladder_value = 0.0;
    double h = 0.0;
    double tau = 0.0;
    double l2 = 0.0;
    std::optional<double> eoc_l2;
    double h1 = 0.0;
    std::optional<double> eoc_h1;
    double wall_seconds = 0.0;
    double inner_iterations = 0.0;  // average per step
    std::string status = "ok";     // or the error tag of a failed cell

    [[nodiscard]] bool ok() const { return status == "ok"; }
    bool operator==(const ReportRow&) const = default;
};

struct ErrorReport {
    std::string name;
    std::string method;
    int p = 0;
    int bdf = 0;
    LadderAxis axis = LadderAxis::Tau;
    std::vector<ReportRow> rows;

    bool operator==(const ErrorReport&) const = default;
};

/// EOC pairs are filled between consecutive successful rows.
void fill_eoc(ErrorReport& report);

void write_csv(std::ostream& os, const ErrorReport& report);
ErrorReport read_csv(std::istream& is);
void write_markdown(std::ostream& os, const ErrorReport& report);

/// Computes each reference configuration once, optionally backed by files
/// in `directory`. Thread safe.
class ReferenceCache {
public:
    explicit ReferenceCache(std::string directory = {});
    const Reference1d& get(InitialCondition ic, const ReferenceConfig& config);

private:
    std::string directory_;
    std::mutex mutex_;
    std::map<std::string, Reference1d> entries_;
};

/// Runs every ladder cell (up to spec.jobs threads, rows stay in ladder
/// order). A failing cell is reported with its error tag; the study goes on.
ErrorReport run_study(const StudySpec& spec, ReferenceCache& references);

struct Comparison {
    std::vector<ErrorReport> reports;
    double T = 0.1;
    double target_l2 = 0.0;                      // error level every method reached
    std::vector<std::optional<double>> time_to_target;  // per report
    std::vector<int> ranking;                    // report indices, fastest first
};

/// Specs must share T and the initial condition.
Comparison compare_methods(const std::vector<StudySpec>& specs, ReferenceCache& references);
void write_comparison(std::ostream& os, const Comparison& cmp, bool markdown);

}  // namespace hmhf
