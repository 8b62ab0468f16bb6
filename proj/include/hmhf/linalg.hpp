#pragma once

#include "hmhf/fe_space.hpp"

#include <Eigen/Core>

#include <memory>

namespace hmhf {

/// Sparse LU (UMFPACK). The symbolic analysis is kept and reused when a
/// later matrix has the same sparsity pattern. Every solve checks
///   |M x - b|_inf <= 1e-10 (|M|_inf |x|_inf + |b|_inf)
/// and throws FactorizationError otherwise.
class DirectSolver {
public:
    DirectSolver();
    explicit DirectSolver(const SparseMatrix& m);
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;
    DirectSolver(const DirectSolver&) = delete;
    DirectSolver& operator=(const DirectSolver&) = delete;

    void factorize(const SparseMatrix& m);
    [[nodiscard]] Vector solve(const Vector& b) const;
    /// Column-by-column solve with one factorization.
    [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

    [[nodiscard]] int size() const;
    [[nodiscard]] bool factorized() const;
    /// Number of symbolic analyses performed so far.
    [[nodiscard]] int analyses() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Vector solve_direct(const SparseMatrix& m, const Vector& b);

/// [[A, B^T], [B, 0]] (primal; dual) = (rhs_primal; rhs_dual)
struct KktSystem {
    SparseMatrix a;
    SparseMatrix b;
    Vector rhs_primal;
    Vector rhs_dual;
};

struct KktSolution {
    Vector primal;
    Vector dual;
};

SparseMatrix kkt_matrix(const SparseMatrix& a, const SparseMatrix& b);

/// Throws InfSupFailure when B has an empty row or the block matrix turns
/// out singular. `cache` may carry a factorization object across calls with
/// identical sparsity.
KktSolution solve_kkt(const KktSystem& sys, DirectSolver* cache = nullptr);

/// sqrt of the smallest eigenvalue of (B Mv^-1 B^T) y = lambda Mw y, dense
/// symmetric-definite solve. Returns 0 when that eigenvalue is not positive.
double estimate_inf_sup(const SparseMatrix& b, const SparseMatrix& mv, const SparseMatrix& mw);

}  // namespace hmhf
