#include "hmhf/assembly.hpp"

#include "hmhf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace hmhf {

double QuadPoint::value(const FeFunction& f, int c) const
{
    const int d = f.space().value_dim();
    const double* coef = f.coefficients().data();
    double s = 0.0;
    for (std::size_t a = 0; a < dofs.size(); ++a) {
        s += phi[a] * coef[d * dofs[a] + c];
    }
    return s;
}

Point2 QuadPoint::gradient(const FeFunction& f, int c) const
{
    const int d = f.space().value_dim();
    const double* coef = f.coefficients().data();
    Point2 g = Point2::Zero();
    for (std::size_t a = 0; a < dofs.size(); ++a) {
        g += coef[d * dofs[a] + c] * grad[a];
    }
    return g;
}

double QuadPoint::gradient_norm2(const FeFunction& f) const
{
    double s = 0.0;
    for (int c = 0; c < f.space().value_dim(); ++c) {
        s += gradient(f, c).squaredNorm();
    }
    return s;
}

namespace {

QuadPoint make_point(const FeSpace& space, int e, int q)
{
    QuadPoint qp;
    qp.element = e;
    qp.q = q;
    qp.jxw = space.jxw(e, q);
    qp.x = space.point(e, q);
    qp.dofs = space.element_dofs(e);
    qp.phi = space.shape_values(q);
    qp.grad = space.shape_gradients(e, q);
    return qp;
}

template <class Kernel>
SparseMatrix assemble(const FeSpace& space, Kernel&& kernel)
{
    SparseMatrix a = space.pattern();
    double* values = a.valuePtr();
    const int npe = space.dofs_per_element();
    const int nq = space.points_per_element();
    std::vector<double> local(static_cast<std::size_t>(npe) * npe);
    for (int e = 0; e < space.num_elements(); ++e) {
        std::fill(local.begin(), local.end(), 0.0);
        for (int q = 0; q < nq; ++q) {
            kernel(make_point(space, e, q), local.data(), npe);
        }
        const auto pos = space.element_value_positions(e);
        for (std::size_t k = 0; k < local.size(); ++k) {
            values[pos[k]] += local[k];
        }
    }
    return a;
}

}  // namespace

SparseMatrix assemble_weighted_mass(const FeSpace& space, const WeightFn& weight)
{
    return assemble(space, [&](const QuadPoint& qp, double* local, int npe) {
        const double w = weight(qp);
        if (!std::isfinite(w)) {
            throw AssemblyError("assemble_weighted_mass: non-finite weight on element " + std::to_string(qp.element));
        }
        const double s = w * qp.jxw;
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) {
                local[a * npe + b] += s * qp.phi[a] * qp.phi[b];
            }
        }
    });
}

SparseMatrix assemble_mass(const FeSpace& space)
{
    return assemble_weighted_mass(space, [](const QuadPoint&) { return 1.0; });
}

SparseMatrix assemble_stiffness(const FeSpace& space)
{
    return assemble(space, [](const QuadPoint& qp, double* local, int npe) {
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) {
                local[a * npe + b] += qp.jxw * qp.grad[a].dot(qp.grad[b]);
            }
        }
    });
}

SparseMatrix assemble_convection_1d(const FeSpace& space)
{
    if (space.interval_mesh() == nullptr) {
        throw InvalidArgument("assemble_convection_1d: needs an interval space");
    }
    return assemble(space, [](const QuadPoint& qp, double* local, int npe) {
        const double s = qp.jxw / qp.x.x();
        for (int a = 0; a < npe; ++a) {
            for (int b = 0; b < npe; ++b) {
                local[a * npe + b] += s * qp.grad[b].x() * qp.phi[a];
            }
        }
    });
}

double LumpedMass::inner(const FeFunction& a, const FeFunction& b) const
{
    const int d = a.space().value_dim();
    double s = 0.0;
    for (int z = 0; z < weights.size(); ++z) {
        double dot = 0.0;
        for (int c = 0; c < d; ++c) {
            dot += a.coefficients()[d * z + c] * b.coefficients()[d * z + c];
        }
        s += weights[z] * dot;
    }
    return s;
}

double LumpedMass::norm(const FeFunction& a) const { return std::sqrt(inner(a, a)); }

LumpedMass lumped_mass(const FeSpace& space)
{
    if (space.degree() != 1) {
        throw UnsupportedDegree("lumped_mass: defined for linear elements only");
    }
    LumpedMass out;
    out.weights = Vector::Zero(space.num_scalar_dofs());
    for (int e = 0; e < space.num_elements(); ++e) {
        const auto dofs = space.element_dofs(e);
        for (int q = 0; q < space.points_per_element(); ++q) {
            const auto phi = space.shape_values(q);
            const double w = space.jxw(e, q);
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                out.weights[dofs[a]] += w * phi[a];
            }
        }
    }
    return out;
}

FeFunction discrete_laplacian(const SparseMatrix& stiffness, const FeFunction& u, const LumpedMass& lumped)
{
    FeFunction g(u.space());
    for (int c = 0; c < u.space().value_dim(); ++c) {
        g.set_component(c, -(stiffness * u.component(c)).cwiseQuotient(lumped.weights));
    }
    return g;
}

FeFunction discrete_laplacian(const FeSpace& space, const FeFunction& u, const LumpedMass& lumped)
{
    if (!space.same_scalar_space(u.space())) {
        throw InvalidArgument("discrete_laplacian: function lives on a different space");
    }
    return discrete_laplacian(assemble_stiffness(space), u, lumped);
}

ErrorNorms error_norms(const FeFunction& a, const FeFunction& b)
{
    if (!(a.space() == b.space())) {
        throw InvalidArgument("error_norms: functions live on different spaces");
    }
    const FeSpace& space = a.space();
    const FeFunction diff(space, a.coefficients() - b.coefficients());
    double l2 = 0.0;
    double semi = 0.0;
    for (int e = 0; e < space.num_elements(); ++e) {
        for (int q = 0; q < space.points_per_element(); ++q) {
            const QuadPoint qp = make_point(space, e, q);
            for (int c = 0; c < space.value_dim(); ++c) {
                const double v = qp.value(diff, c);
                l2 += qp.jxw * v * v;
                semi += qp.jxw * qp.gradient(diff, c).squaredNorm();
            }
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(semi)};
}

ErrorNorms error_norms(const FeFunction& u, const std::function<double(const Point2&)>& exact,
                       const std::function<Point2(const Point2&)>& exact_gradient)
{
    const FeSpace& space = u.space();
    if (space.value_dim() != 1) {
        throw InvalidArgument("error_norms: exact-field variant needs a scalar space");
    }
    double l2 = 0.0;
    double semi = 0.0;
    for (int e = 0; e < space.num_elements(); ++e) {
        for (int q = 0; q < space.points_per_element(); ++q) {
            const QuadPoint qp = make_point(space, e, q);
            const double v = qp.value(u) - exact(qp.x);
            Point2 g = qp.gradient(u) - exact_gradient(qp.x);
            if (space.spatial_dim() == 1) {
                g.y() = 0.0;
            }
            l2 += qp.jxw * v * v;
            semi += qp.jxw * g.squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(semi)};
}

double dirichlet_energy(const SparseMatrix& stiffness, const FeFunction& u)
{
    double s = 0.0;
    for (int c = 0; c < u.space().value_dim(); ++c) {
        const Vector uc = u.component(c);
        s += uc.dot(stiffness * uc);
    }
    return 0.5 * s;
}

SparseMatrix restrict_matrix(const SparseMatrix& a, std::span<const int> row_map, std::span<const int> col_map)
{
    const int rows = static_cast<int>(std::count_if(row_map.begin(), row_map.end(), [](int i) { return i >= 0; }));
    const int cols = static_cast<int>(std::count_if(col_map.begin(), col_map.end(), [](int i) { return i >= 0; }));
    std::vector<std::pair<int, double>> row_entries;
    std::vector<int> row_of_new(rows, -1);
    for (int r = 0; r < a.rows(); ++r) {
        if (row_map[r] >= 0) {
            row_of_new[row_map[r]] = r;
        }
    }
    SparseMatrix out(rows, cols);
    out.reserve(a.nonZeros());
    for (int nr = 0; nr < rows; ++nr) {
        out.startVec(nr);
        const int r = row_of_new[nr];
        row_entries.clear();
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
            const int nc = col_map[it.col()];
            if (nc >= 0) {
                row_entries.emplace_back(nc, it.value());
            }
        }
        std::sort(row_entries.begin(), row_entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [c, v] : row_entries) {
            out.insertBack(nr, c) = v;
        }
    }
    out.finalize();
    return out;
}

std::vector<int> interior_index_map(const FeSpace& space)
{
    std::vector<int> map(space.num_scalar_dofs(), -1);
    const auto& interior = space.interior_dofs();
    for (std::size_t k = 0; k < interior.size(); ++k) {
        map[interior[k]] = static_cast<int>(k);
    }
    return map;
}

SparseMatrix expand_components(const SparseMatrix& scalar, int d)
{
    SparseMatrix out(scalar.rows() * d, scalar.cols() * d);
    out.reserve(scalar.nonZeros() * d);
    for (int i = 0; i < scalar.rows(); ++i) {
        for (int c = 0; c < d; ++c) {
            out.startVec(d * i + c);
            for (SparseMatrix::InnerIterator it(scalar, i); it; ++it) {
                out.insertBack(d * i + c, d * static_cast<int>(it.col()) + c) = it.value();
            }
        }
    }
    out.finalize();
    return out;
}

}  // namespace hmhf
