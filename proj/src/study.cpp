#include "hmhf/study.hpp"

#include "hmhf/errors.hpp"
#include "hmhf/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <typeinfo>

namespace hmhf {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) {
            throw ParseError("");
        }
        return d;
    } catch (const std::exception&) {
        throw ParseError("study spec: bad number for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v)
{
    const double d = parse_double(key, v);
    if (d != std::floor(d)) {
        throw ParseError("study spec: '" + key + "' must be an integer");
    }
    return static_cast<int>(d);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v, const char* f = "%.4e")
{
    char buf[40];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string axis_name(LadderAxis a) { return a == LadderAxis::Tau ? "tau" : "level"; }

LadderAxis parse_axis(const std::string& s)
{
    if (s == "tau") {
        return LadderAxis::Tau;
    }
    if (s == "level" || s == "h") {
        return LadderAxis::Level;
    }
    throw ParseError("unknown ladder axis: " + s);
}

std::vector<double> halving(double first, int count)
{
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
        v.push_back(first / std::pow(2.0, i));
    }
    return v;
}

std::vector<double> levels(int from, int to)
{
    std::vector<double> v;
    for (int l = from; l <= to; ++l) {
        v.push_back(l);
    }
    return v;
}

std::string error_tag(const std::exception& e)
{
#define HMHF_TAG(T)                                  \
    if (dynamic_cast<const T*>(&e) != nullptr) { \
        return #T;                                   \
    }
    HMHF_TAG(FixedPointDivergence)
    HMHF_TAG(InfSupFailure)
    HMHF_TAG(DegenerateExtrapolation)
    HMHF_TAG(NormalizationFailure)
    HMHF_TAG(FactorizationError)
    HMHF_TAG(AssemblyError)
    HMHF_TAG(DegenerateElement)
    HMHF_TAG(OutOfDomain)
    HMHF_TAG(UnsupportedDegree)
    HMHF_TAG(InvalidArgument)
    HMHF_TAG(ParseError)
#undef HMHF_TAG
    return "Error";
}

struct Cell {
    double h = 0.0;
    double tau = 0.0;
    int level = 0;
};

Cell cell_of(const StudySpec& spec, double value)
{
    Cell c;
    c.level = spec.axis == LadderAxis::Level ? static_cast<int>(value) : spec.level;
    c.tau = spec.axis == LadderAxis::Tau ? value : spec.tau;
    c.h = std::ldexp(1.0, -c.level);
    return c;
}

ReportRow run_cell(const StudySpec& spec, const Reference1d& ref, double value)
{
    ReportRow row;
    const Cell c = cell_of(spec, value);
    row.ladder_value = value;
    row.h = c.h;
    row.tau = c.tau;
    try {
        if (spec.method == "rshmhf") {
            auto mesh = std::make_shared<const IntervalMesh>(build_interval_mesh(1 << c.level));
            Rshmhf1dProblem problem{initial_profile(spec.ic), spec.T, c.tau, FeSpace::interval(mesh, spec.p)};
            const Rshmhf1dResult r = solve_rshmhf(problem, spec.bdf, false);
            const ErrorNorms e = error_norms_1d(r.final_state, ref.u);
            row.l2 = e.l2;
            row.h1 = e.h1;
            row.wall_seconds = r.wall_seconds;
            row.inner_iterations = 1.0;
        } else {
            auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(c.level, true));
            Hmhf2dProblem problem{lift_profile(initial_profile(spec.ic)),
                                  spec.T,
                                  c.tau,
                                  FeSpace::disk(mesh, spec.p, 3),
                                  parse_method(spec.method),
                                  spec.bdf,
                                  spec.fixed_point};
            const Hmhf2dResult r = solve_hmhf(problem, false);
            const ErrorNorms e = evaluate_against_reference(r.final_state, lift_reference(ref, problem.space));
            row.l2 = e.l2;
            row.h1 = e.h1;
            row.wall_seconds = r.wall_seconds;
            row.inner_iterations = r.average_inner_iterations();
        }
        if (!std::isfinite(row.l2) || !std::isfinite(row.h1)) {
            throw InvalidArgument("non-finite error norm");
        }
    } catch (const std::exception& e) {
        row.status = error_tag(e);
        row.l2 = row.h1 = 0.0;
    }
    return row;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_optional(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    return parse_double("csv", s);
}

std::string reference_key(InitialCondition ic, const ReferenceConfig& c)
{
    std::ostringstream os;
    os << "ref_" << to_string(ic) << "_n" << c.n_elems << "_p" << c.degree << "_k" << c.bdf << "_tau"
       << fmt_short(c.tau, "%g") << "_T" << fmt_short(c.T, "%g");
    return os.str();
}

bool same_config(const ReferenceConfig& a, const ReferenceConfig& b)
{
    return a.n_elems == b.n_elems && a.degree == b.degree && a.bdf == b.bdf &&
           std::abs(a.tau - b.tau) <= 1e-15 * std::abs(b.tau) && std::abs(a.T - b.T) <= 1e-15 * std::abs(b.T);
}

}  // namespace

void StudySpec::validate() const
{
    if (ladder.empty()) {
        throw InvalidArgument("study: empty ladder");
    }
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        const bool ok = axis == LadderAxis::Tau ? ladder[i] < ladder[i - 1] : ladder[i] > ladder[i - 1];
        if (!ok) {
            throw InvalidArgument("study: ladder must be strictly monotone (tau decreasing, level increasing)");
        }
    }
    if (method != "rshmhf") {
        (void)parse_method(method);
    }
    if (p != 1 && p != 2) {
        throw InvalidArgument("study: p must be 1 or 2");
    }
    if (bdf != 1 && bdf != 2) {
        throw InvalidArgument("study: bdf must be 1 or 2");
    }
    if (method == "bfem" && (p != 1 || bdf != 1)) {
        throw InvalidArgument("study: bfem needs p = 1 and bdf = 1");
    }
    if (!(T > 0.0)) {
        throw InvalidArgument("study: T must be positive");
    }
    auto check_tau = [&](double t) {
        if (!(t > 0.0)) {
            throw InvalidArgument("study: tau must be positive");
        }
        const double j = T / t;
        if (std::abs(j - std::round(j)) > 1e-9 * std::max(1.0, j)) {
            throw InvalidArgument("study: T / tau is not an integer for tau = " + fmt(t));
        }
    };
    auto check_level = [&](double l) {
        const int max_level = method == "rshmhf" ? 16 : 9;
        if (l != std::floor(l) || l < 1 || l > max_level) {
            throw InvalidArgument("study: bad level " + fmt(l));
        }
    };
    if (axis == LadderAxis::Tau) {
        std::for_each(ladder.begin(), ladder.end(), check_tau);
        check_level(level);
    } else {
        std::for_each(ladder.begin(), ladder.end(), check_level);
        check_tau(tau);
    }
    if (jobs < 1) {
        throw InvalidArgument("study: jobs must be at least 1");
    }
}

StudySpec parse_study_spec(std::istream& is)
{
    StudySpec s;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("study spec line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "name") {
            s.name = val;
        } else if (key == "method") {
            s.method = val;
        } else if (key == "p") {
            s.p = parse_int(key, val);
        } else if (key == "bdf" || key == "k") {
            s.bdf = parse_int(key, val);
        } else if (key == "axis") {
            s.axis = parse_axis(val);
        } else if (key == "ladder") {
            s.ladder.clear();
            std::string v = val;
            std::replace(v.begin(), v.end(), ',', ' ');
            std::istringstream ls(v);
            std::string tok;
            while (ls >> tok) {
                s.ladder.push_back(parse_double(key, tok));
            }
        } else if (key == "tau") {
            s.tau = parse_double(key, val);
        } else if (key == "level") {
            s.level = parse_int(key, val);
        } else if (key == "T") {
            s.T = parse_double(key, val);
            s.reference.T = s.T;
        } else if (key == "ic") {
            s.ic = parse_initial_condition(val);
        } else if (key == "ref_n") {
            s.reference.n_elems = parse_int(key, val);
        } else if (key == "ref_p") {
            s.reference.degree = parse_int(key, val);
        } else if (key == "ref_tau") {
            s.reference.tau = parse_double(key, val);
        } else if (key == "ref_bdf") {
            s.reference.bdf = parse_int(key, val);
        } else if (key == "eps") {
            s.fixed_point.tolerance = parse_double(key, val);
        } else if (key == "max_iter") {
            s.fixed_point.max_iterations = parse_int(key, val);
        } else if (key == "jobs") {
            s.jobs = parse_int(key, val);
        } else {
            throw ParseError("study spec line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    s.validate();
    return s;
}

void write_study_spec(std::ostream& os, const StudySpec& s)
{
    os << "name = " << s.name << "\nmethod = " << s.method << "\np = " << s.p << "\nbdf = " << s.bdf
       << "\naxis = " << axis_name(s.axis) << "\nladder =";
    for (double v : s.ladder) {
        os << ' ' << fmt(v);
    }
    os << "\ntau = " << fmt(s.tau) << "\nlevel = " << s.level << "\nT = " << fmt(s.T) << "\nic = " << to_string(s.ic)
       << "\nref_n = " << s.reference.n_elems << "\nref_p = " << s.reference.degree
       << "\nref_tau = " << fmt(s.reference.tau) << "\nref_bdf = " << s.reference.bdf
       << "\neps = " << fmt(s.fixed_point.tolerance) << "\nmax_iter = " << s.fixed_point.max_iterations
       << "\njobs = " << s.jobs << '\n';
}

std::vector<std::string> study_preset_names()
{
    std::vector<std::string> names;
    for (int i = 1; i <= 13; ++i) {
        names.push_back("table" + std::to_string(i));
    }
    return names;
}

StudySpec study_preset(const std::string& name)
{
    StudySpec s;
    s.name = name;
    auto temporal = [&](const std::string& method, int bdf, int rungs, int level) {
        s.method = method;
        s.p = 2;
        s.bdf = bdf;
        s.axis = LadderAxis::Tau;
        s.ladder = halving(5e-2, rungs);
        s.level = level;
    };
    auto spatial = [&](const std::string& method, int p, int bdf, int from, int to, double tau) {
        s.method = method;
        s.p = p;
        s.bdf = bdf;
        s.axis = LadderAxis::Level;
        s.ladder = levels(from, to);
        s.tau = tau;
    };
    if (name == "table1") {
        temporal("rshmhf", 1, 5, 10);
    } else if (name == "table2") {
        temporal("rshmhf", 2, 5, 10);
    } else if (name == "table3") {
        spatial("rshmhf", 1, 2, 3, 6, 1e-5);
    } else if (name == "table4") {
        spatial("rshmhf", 2, 2, 3, 6, 1e-5);
    } else if (name == "table5") {
        temporal("ppfem", 1, 6, 4);
    } else if (name == "table6") {
        temporal("ppfem", 2, 5, 4);
    } else if (name == "table7") {
        spatial("ppfem", 1, 2, 2, 4, 1e-4);
    } else if (name == "table8") {
        spatial("ppfem", 2, 2, 2, 4, 1e-4);
    } else if (name == "table9") {
        temporal("tfem", 1, 6, 4);
    } else if (name == "table10") {
        temporal("tfem", 2, 5, 5);
    } else if (name == "table11") {
        spatial("tfem", 1, 2, 2, 4, 1e-4);
    } else if (name == "table12") {
        spatial("tfem", 2, 2, 2, 4, 2.5e-4);
    } else if (name == "table13") {
        spatial("bfem", 1, 1, 2, 4, 1e-5);
    } else {
        throw InvalidArgument("unknown preset: " + name);
    }
    s.validate();
    return s;
}

std::vector<std::optional<double>> compute_eoc(const std::vector<double>& errors)
{
    std::vector<std::optional<double>> eoc(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0)) {
            throw InvalidArgument("compute_eoc: errors must be positive");
        }
        if (i > 0) {
            eoc[i] = std::log2(errors[i - 1] / errors[i]);
        }
    }
    return eoc;
}

void fill_eoc(ErrorReport& report)
{
    const ReportRow* prev = nullptr;
    for (ReportRow& r : report.rows) {
        r.eoc_l2.reset();
        r.eoc_h1.reset();
        if (!r.ok()) {
            prev = nullptr;
            continue;
        }
        if (prev != nullptr) {
            r.eoc_l2 = compute_eoc({prev->l2, r.l2})[1];
            r.eoc_h1 = compute_eoc({prev->h1, r.h1})[1];
        }
        prev = &r;
    }
}

void write_csv(std::ostream& os, const ErrorReport& rep)
{
    os << "# name " << rep.name << "\n# method " << rep.method << "\n# p " << rep.p << "\n# bdf " << rep.bdf
       << "\n# axis " << axis_name(rep.axis) << '\n';
    os << "ladder,h,tau,l2,eoc_l2,h1,eoc_h1,wall_s,inner_iter,status\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    for (const ReportRow& r : rep.rows) {
        os << fmt(r.ladder_value) << ',' << fmt(r.h) << ',' << fmt(r.tau) << ',' << fmt(r.l2) << ',' << opt(r.eoc_l2)
           << ',' << fmt(r.h1) << ',' << opt(r.eoc_h1) << ',' << fmt(r.wall_seconds) << ','
           << fmt(r.inner_iterations) << ',' << r.status << '\n';
    }
}

ErrorReport read_csv(std::istream& is)
{
    ErrorReport rep;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            std::string val;
            ls >> key;
            std::getline(ls >> std::ws, val);
            if (key == "name") {
                rep.name = val;
            } else if (key == "method") {
                rep.method = val;
            } else if (key == "p") {
                rep.p = parse_int(key, val);
            } else if (key == "bdf") {
                rep.bdf = parse_int(key, val);
            } else if (key == "axis") {
                rep.axis = parse_axis(val);
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("ladder,", 0) != 0) {
                throw ParseError("csv: missing column header");
            }
            header_seen = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 10) {
            throw ParseError("csv: expected 10 fields, got " + std::to_string(f.size()));
        }
        ReportRow r;
        r.ladder_value = parse_double("ladder", f[0]);
        r.h = parse_double("h", f[1]);
        r.tau = parse_double("tau", f[2]);
        r.l2 = parse_double("l2", f[3]);
        r.eoc_l2 = parse_optional(f[4]);
        r.h1 = parse_double("h1", f[5]);
        r.eoc_h1 = parse_optional(f[6]);
        r.wall_seconds = parse_double("wall", f[7]);
        r.inner_iterations = parse_double("inner", f[8]);
        r.status = f[9];
        rep.rows.push_back(r);
    }
    if (!header_seen) {
        throw ParseError("csv: missing column header");
    }
    return rep;
}

void write_markdown(std::ostream& os, const ErrorReport& rep)
{
    os << "### " << rep.name << ": " << rep.method << ", p=" << rep.p << ", BDF" << rep.bdf << ", "
       << (rep.axis == LadderAxis::Tau ? "h fixed" : "tau fixed") << "\n\n";
    const std::vector<std::string> head = {rep.axis == LadderAxis::Tau ? "tau" : "h", "L2", "EOC", "H1",
                                           "EOC", "wall [s]", "inner it", "status"};
    std::vector<std::vector<std::string>> cells;
    auto eoc = [](const std::optional<double>& v) { return v ? fmt_short(*v, "%.2f") : std::string("-"); };
    for (const ReportRow& r : rep.rows) {
        const std::string lv = rep.axis == LadderAxis::Tau ? fmt_short(r.tau, "%.4e")
                                                           : "2^-" + std::to_string(static_cast<int>(r.ladder_value));
        if (r.ok()) {
            cells.push_back({lv, fmt_short(r.l2), eoc(r.eoc_l2), fmt_short(r.h1), eoc(r.eoc_h1),
                             fmt_short(r.wall_seconds, "%.3f"), fmt_short(r.inner_iterations, "%.2f"), r.status});
        } else {
            cells.push_back({lv, "-", "-", "-", "-", "-", "-", r.status});
        }
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) {
        width[c] = head[c].size();
        for (const auto& row : cells) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    auto emit = [&](const std::vector<std::string>& row) {
        os << '|';
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << ' ' << std::setw(static_cast<int>(width[c])) << row[c] << " |";
        }
        os << '\n';
    };
    emit(head);
    os << '|';
    for (std::size_t w : width) {
        os << std::string(w + 1, '-') << ":|";
    }
    os << '\n';
    for (const auto& row : cells) {
        emit(row);
    }
}

ReferenceCache::ReferenceCache(std::string directory) : directory_(std::move(directory)) {}

const Reference1d& ReferenceCache::get(InitialCondition ic, const ReferenceConfig& config)
{
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string key = reference_key(ic, config);
    if (auto it = entries_.find(key); it != entries_.end()) {
        return it->second;
    }
    std::filesystem::path file;
    if (!directory_.empty()) {
        file = std::filesystem::path(directory_) / (key + ".txt");
        if (std::ifstream in(file); in) {
            try {
                Reference1d ref = read_reference(in);
                if (ref.ic == ic && same_config(ref.config, config)) {
                    return entries_.emplace(key, std::move(ref)).first->second;
                }
            } catch (const ParseError&) {
                // stale or truncated file, recompute below
            }
        }
    }
    Reference1d ref = compute_reference(ic, config);
    if (!file.empty()) {
        std::filesystem::create_directories(file.parent_path());
        const auto tmp = file.string() + ".tmp";
        {
            std::ofstream out(tmp);
            write_reference(out, ref);
        }
        std::filesystem::rename(tmp, file);
    }
    return entries_.emplace(key, std::move(ref)).first->second;
}

ErrorReport run_study(const StudySpec& spec, ReferenceCache& references)
{
    spec.validate();
    ErrorReport rep;
    rep.name = spec.name;
    rep.method = spec.method;
    rep.p = spec.p;
    rep.bdf = spec.bdf;
    rep.axis = spec.axis;
    rep.rows.resize(spec.ladder.size());

    ReferenceConfig rc = spec.reference;
    rc.T = spec.T;
    const Reference1d& ref = references.get(spec.ic, rc);

    const int n = static_cast<int>(spec.ladder.size());
    const int workers = std::min(spec.jobs, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) {
            rep.rows[i] = run_cell(spec, ref, spec.ladder[i]);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++) {
                    rep.rows[i] = run_cell(spec, ref, spec.ladder[i]);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    fill_eoc(rep);
    return rep;
}

Comparison compare_methods(const std::vector<StudySpec>& specs, ReferenceCache& references)
{
    if (specs.empty()) {
        throw InvalidArgument("compare: no specs");
    }
    for (const StudySpec& s : specs) {
        if (s.ic != specs[0].ic || std::abs(s.T - specs[0].T) > 1e-15) {
            throw InvalidArgument("compare: specs must share T and the initial condition");
        }
    }
    Comparison cmp;
    cmp.T = specs[0].T;
    for (const StudySpec& s : specs) {
        cmp.reports.push_back(run_study(s, references));
    }

    // Coarsest error level that every report reached.
    double target = 0.0;
    for (const ErrorReport& r : cmp.reports) {
        double best = std::numeric_limits<double>::infinity();
        for (const ReportRow& row : r.rows) {
            if (row.ok()) {
                best = std::min(best, row.l2);
            }
        }
        target = std::max(target, best);
    }
    cmp.target_l2 = target;

    for (const ErrorReport& r : cmp.reports) {
        std::optional<double> t;
        std::vector<const ReportRow*> ok;
        for (const ReportRow& row : r.rows) {
            if (row.ok()) {
                ok.push_back(&row);
            }
        }
        for (std::size_t i = 0; i < ok.size() && !t; ++i) {
            if (ok[i]->l2 <= target) {
                if (i == 0 || ok[i]->l2 == target) {
                    t = ok[i]->wall_seconds;
                } else {
                    // log-log interpolation between the bracketing rows
                    const double e0 = std::log(ok[i - 1]->l2);
                    const double e1 = std::log(ok[i]->l2);
                    const double w0 = std::log(std::max(ok[i - 1]->wall_seconds, 1e-9));
                    const double w1 = std::log(std::max(ok[i]->wall_seconds, 1e-9));
                    const double s = e1 == e0 ? 1.0 : (std::log(target) - e0) / (e1 - e0);
                    t = std::exp(w0 + s * (w1 - w0));
                }
            }
        }
        cmp.time_to_target.push_back(t);
    }
    for (int i = 0; i < static_cast<int>(cmp.reports.size()); ++i) {
        cmp.ranking.push_back(i);
    }
    std::stable_sort(cmp.ranking.begin(), cmp.ranking.end(), [&](int a, int b) {
        const auto& ta = cmp.time_to_target[a];
        const auto& tb = cmp.time_to_target[b];
        if (ta && tb) {
            return *ta < *tb;
        }
        return ta.has_value() && !tb.has_value();
    });
    return cmp;
}

void write_comparison(std::ostream& os, const Comparison& cmp, bool markdown)
{
    if (markdown) {
        for (const ErrorReport& r : cmp.reports) {
            write_markdown(os, r);
            os << '\n';
        }
        os << "### ranking by time to L2 error " << fmt_short(cmp.target_l2) << "\n\n| rank | study | method | time [s] |\n|---:|---:|---:|---:|\n";
        for (std::size_t i = 0; i < cmp.ranking.size(); ++i) {
            const int r = cmp.ranking[i];
            const auto& t = cmp.time_to_target[r];
            os << "| " << i + 1 << " | " << cmp.reports[r].name << " | " << cmp.reports[r].method << " | "
               << (t ? fmt_short(*t, "%.3f") : std::string("-")) << " |\n";
        }
        return;
    }
    os << "# target_l2 " << fmt(cmp.target_l2) << '\n';
    os << "study,method,p,bdf,ladder,h,tau,l2,h1,wall_s,wall_per_step_s,inner_iter,status\n";
    for (const ErrorReport& r : cmp.reports) {
        for (const ReportRow& row : r.rows) {
            const double steps = std::round(cmp.T / row.tau);
            os << r.name << ',' << r.method << ',' << r.p << ',' << r.bdf << ',' << fmt(row.ladder_value) << ','
               << fmt(row.h) << ',' << fmt(row.tau) << ',' << fmt(row.l2) << ',' << fmt(row.h1) << ','
               << fmt(row.wall_seconds) << ',' << fmt(row.wall_seconds / steps) << ','
               << fmt(row.inner_iterations) << ',' << row.status << '\n';
        }
    }
    os << "rank,study,method,time_to_target_s\n";
    for (std::size_t i = 0; i < cmp.ranking.size(); ++i) {
        const int r = cmp.ranking[i];
        const auto& t = cmp.time_to_target[r];
        os << i + 1 << ',' << cmp.reports[r].name << ',' << cmp.reports[r].method << ','
           << (t ? fmt(*t) : std::string()) << '\n';
    }
}

}  // namespace hmhf
