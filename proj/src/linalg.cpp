#include "hmhf/linalg.hpp"

#include "hmhf/errors.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>
#include <umfpack.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hmhf {

namespace {

double norm_inf(const SparseMatrix& m)
{
    double best = 0.0;
    for (int i = 0; i < m.outerSize(); ++i) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            row += std::abs(it.value());
        }
        best = std::max(best, row);
    }
    return best;
}

std::pair<int, int> bandwidths(const SparseMatrix& m)
{
    int kl = 0;
    int ku = 0;
    for (int i = 0; i < m.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            kl = std::max(kl, i - static_cast<int>(it.col()));
            ku = std::max(ku, static_cast<int>(it.col()) - i);
        }
    }
    return {kl, ku};
}

constexpr int kMaxBandwidth = 4;

}  // namespace

// Narrow-band matrices (the interval problems) go to LAPACK's banded LU,
// everything else to UMFPACK. UMFPACK reads compressed columns; our
// row-major arrays are the columns of the transpose, so solves use
// UMFPACK_At.
struct DirectSolver::Impl {
    SparseMatrix m;
    int kl = -1;
    int ku = -1;
    std::vector<double> band;
    std::vector<lapack_int> pivots;
    std::vector<int> outer;
    std::vector<int> inner;
    void* symbolic = nullptr;
    void* numeric = nullptr;
    double mnorm = 0.0;
    int analyses = 0;
    bool ready = false;

    ~Impl() { release(); }

    void release_numeric()
    {
        ready = false;
        if (numeric != nullptr) {
            umfpack_di_free_numeric(&numeric);
        }
    }

    void release()
    {
        release_numeric();
        if (symbolic != nullptr) {
            umfpack_di_free_symbolic(&symbolic);
        }
    }

    [[nodiscard]] bool same_pattern(const SparseMatrix& a) const
    {
        if (symbolic == nullptr || a.rows() != m.rows() || a.nonZeros() != static_cast<Eigen::Index>(inner.size())) {
            return false;
        }
        return std::equal(outer.begin(), outer.end(), a.outerIndexPtr())
            && std::equal(inner.begin(), inner.end(), a.innerIndexPtr());
    }
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}

DirectSolver::DirectSolver(const SparseMatrix& m) : DirectSolver() { factorize(m); }

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

void DirectSolver::factorize(const SparseMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw InvalidArgument("DirectSolver: matrix is not square");
    }
    SparseMatrix a = m;
    a.makeCompressed();
    for (Eigen::Index k = 0; k < a.nonZeros(); ++k) {
        if (!std::isfinite(a.valuePtr()[k])) {
            throw FactorizationError("DirectSolver: non-finite matrix entry");
        }
    }
    Impl& s = *impl_;
    s.release_numeric();
    const int n = static_cast<int>(a.rows());
    const auto [kl, ku] = bandwidths(a);
    if (kl <= kMaxBandwidth && ku <= kMaxBandwidth) {
        s.release();
        s.kl = kl;
        s.ku = ku;
        const int ldab = 2 * kl + ku + 1;
        s.band.assign(static_cast<std::size_t>(ldab) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
                const int j = static_cast<int>(it.col());
                s.band[static_cast<std::size_t>(j) * ldab + kl + ku + i - j] = it.value();
            }
        }
        s.pivots.resize(n);
        const lapack_int info = n == 0 ? 0 : LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, s.band.data(), ldab, s.pivots.data());
        if (info != 0) {
            s.band.clear();
            throw FactorizationError("DirectSolver: banded LU breakdown (info " + std::to_string(info) + ")");
        }
        s.m = std::move(a);
        s.mnorm = norm_inf(s.m);
        s.ready = true;
        return;
    }
    s.kl = -1;
    s.band.clear();
    if (!s.same_pattern(a)) {
        s.release();
        s.outer.assign(a.outerIndexPtr(), a.outerIndexPtr() + n + 1);
        s.inner.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
        double control[UMFPACK_CONTROL];
        umfpack_di_defaults(control);
        const int status = umfpack_di_symbolic(n, n, a.outerIndexPtr(), a.innerIndexPtr(), a.valuePtr(), &s.symbolic,
                                               control, nullptr);
        if (status != UMFPACK_OK) {
            s.symbolic = nullptr;
            throw FactorizationError("DirectSolver: symbolic analysis failed, status " + std::to_string(status));
        }
        ++s.analyses;
    }
    const int status =
        umfpack_di_numeric(a.outerIndexPtr(), a.innerIndexPtr(), a.valuePtr(), s.symbolic, &s.numeric, nullptr, nullptr);
    if (status != UMFPACK_OK) {
        s.release_numeric();
        throw FactorizationError("DirectSolver: matrix is singular to working precision (status " +
                                 std::to_string(status) + ")");
    }
    s.m = std::move(a);
    s.mnorm = norm_inf(s.m);
    s.ready = true;
}

Vector DirectSolver::solve(const Vector& b) const
{
    const Impl& s = *impl_;
    if (!factorized()) {
        throw InvalidArgument("DirectSolver: solve before factorize");
    }
    if (b.size() != s.m.rows()) {
        throw InvalidArgument("DirectSolver: right-hand side has wrong length");
    }
    if (b.size() == 0) {
        return b;
    }
    Vector x(b.size());
    if (s.kl >= 0) {
        x = b;
        const int n = static_cast<int>(b.size());
        LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, s.kl, s.ku, 1, s.band.data(), 2 * s.kl + s.ku + 1, s.pivots.data(),
                       x.data(), n);
    } else {
        const int status = umfpack_di_solve(UMFPACK_At, s.m.outerIndexPtr(), s.m.innerIndexPtr(), s.m.valuePtr(),
                                            x.data(), b.data(), s.numeric, nullptr, nullptr);
        if (status != UMFPACK_OK) {
            throw FactorizationError("DirectSolver: solve failed, status " + std::to_string(status));
        }
    }
    const double res = (s.m * x - b).lpNorm<Eigen::Infinity>();
    const double scale = s.mnorm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
    if (!(res <= 1e-10 * scale)) {
        throw FactorizationError("DirectSolver: residual " + std::to_string(res) + " exceeds tolerance");
    }
    return x;
}

Eigen::MatrixXd DirectSolver::solve(const Eigen::MatrixXd& b) const
{
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
        x.col(c) = solve(Vector(b.col(c)));
    }
    return x;
}

int DirectSolver::size() const { return static_cast<int>(impl_->m.rows()); }
bool DirectSolver::factorized() const { return impl_->ready; }
int DirectSolver::analyses() const { return impl_->analyses; }

Vector solve_direct(const SparseMatrix& m, const Vector& b)
{
    if (m.rows() != b.size()) {
        throw InvalidArgument("solve_direct: dimension mismatch");
    }
    return DirectSolver(m).solve(b);
}

SparseMatrix kkt_matrix(const SparseMatrix& a, const SparseMatrix& b)
{
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(b.rows());
    const SparseMatrix bt = b.transpose();
    SparseMatrix k(n + m, n + m);
    k.reserve(a.nonZeros() + 2 * b.nonZeros());
    for (int i = 0; i < n; ++i) {
        k.startVec(i);
        for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
            k.insertBack(i, static_cast<int>(it.col())) = it.value();
        }
        for (SparseMatrix::InnerIterator it(bt, i); it; ++it) {
            k.insertBack(i, n + static_cast<int>(it.col())) = it.value();
        }
    }
    for (int i = 0; i < m; ++i) {
        k.startVec(n + i);
        for (SparseMatrix::InnerIterator it(b, i); it; ++it) {
            k.insertBack(n + i, static_cast<int>(it.col())) = it.value();
        }
    }
    k.finalize();
    return k;
}

KktSolution solve_kkt(const KktSystem& sys, DirectSolver* cache)
{
    const Eigen::Index n = sys.a.rows();
    const Eigen::Index m = sys.b.rows();
    if (sys.a.cols() != n || sys.rhs_primal.size() != n || sys.rhs_dual.size() != m || (m > 0 && sys.b.cols() != n)) {
        throw InvalidArgument("solve_kkt: block dimensions are inconsistent");
    }
    if (m == 0) {
        return {solve_direct(sys.a, sys.rhs_primal), Vector()};
    }
    if (m >= n) {
        throw InvalidArgument("solve_kkt: more constraints than unknowns");
    }
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(sys.b, i); it; ++it) {
            row = std::max(row, std::abs(it.value()));
        }
        if (!(row > 0.0)) {
            throw InfSupFailure("solve_kkt: constraint row " + std::to_string(i) + " is empty");
        }
    }
    DirectSolver local;
    DirectSolver& solver = cache != nullptr ? *cache : local;
    Vector rhs(n + m);
    rhs << sys.rhs_primal, sys.rhs_dual;
    Vector x;
    try {
        solver.factorize(kkt_matrix(sys.a, sys.b));
        x = solver.solve(rhs);
    } catch (const FactorizationError& e) {
        throw InfSupFailure(std::string("solve_kkt: saddle-point matrix is singular: ") + e.what());
    }
    KktSolution out{x.head(n), x.tail(m)};
    const double res = (sys.b * out.primal - sys.rhs_dual).lpNorm<Eigen::Infinity>();
    const double scale = norm_inf(sys.b) * out.primal.lpNorm<Eigen::Infinity>() + sys.rhs_dual.lpNorm<Eigen::Infinity>();
    if (!(res <= 1e-10 * scale)) {
        throw InfSupFailure("solve_kkt: constraint residual " + std::to_string(res) + " exceeds tolerance");
    }
    return out;
}

double estimate_inf_sup(const SparseMatrix& b, const SparseMatrix& mv, const SparseMatrix& mw)
{
    if (mv.rows() != b.cols() || mw.rows() != b.rows()) {
        throw InvalidArgument("estimate_inf_sup: dimension mismatch");
    }
    if (b.rows() == 0) {
        return 0.0;
    }
    const DirectSolver mv_solver(mv);
    const Eigen::MatrixXd bt = Eigen::MatrixXd(b.transpose());
    const Eigen::MatrixXd x = mv_solver.solve(bt);
    Eigen::MatrixXd s = b * x;
    s = 0.5 * (s + s.transpose()).eval();
    const Eigen::MatrixXd w = Eigen::MatrixXd(mw);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, w, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw FactorizationError("estimate_inf_sup: eigensolver failed");
    }
    const double lmin = eig.eigenvalues()(0);
    const double lmax = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    if (!(lmin > 1e-12 * std::max(1.0, std::abs(lmax)))) {
        return 0.0;
    }
    return std::sqrt(lmin);
}

}  // namespace hmhf
