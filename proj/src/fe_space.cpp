#include "hmhf/fe_space.hpp"

#include "hmhf/errors.hpp"
#include "hmhf/quadrature.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace hmhf {

namespace detail {

struct Discretization {
    std::shared_ptr<const IntervalMesh> interval;
    std::shared_ptr<const DiskMesh> disk;
    int degree = 1;
    int spatial_dim = 1;
    int n_scalar = 0;
    std::vector<Point2> dof_coords;
    std::vector<int> boundary;
    std::vector<int> interior;
    std::vector<char> boundary_flag;

    int n_elem = 0;
    int npe = 0;
    std::vector<int> elem_dofs;

    int nq = 0;
    std::vector<double> ref_values;  // nq * npe
    std::vector<double> jxw;         // n_elem * nq
    std::vector<Point2> points;      // n_elem * nq
    std::vector<Point2> grads;       // n_elem * nq * npe

    SparseMatrix pattern;
    std::vector<int> positions;  // n_elem * npe * npe

    void finish_boundary()
    {
        for (int i = 0; i < n_scalar; ++i) {
            (boundary_flag[i] ? boundary : interior).push_back(i);
        }
    }

    void build_pattern()
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(n_elem) * npe * npe);
        for (int e = 0; e < n_elem; ++e) {
            const int* d = elem_dofs.data() + e * npe;
            for (int a = 0; a < npe; ++a) {
                for (int b = 0; b < npe; ++b) {
                    trips.emplace_back(d[a], d[b], 0.0);
                }
            }
        }
        pattern.resize(n_scalar, n_scalar);
        pattern.setFromTriplets(trips.begin(), trips.end());
        pattern.makeCompressed();

        positions.resize(static_cast<std::size_t>(n_elem) * npe * npe);
        const int* outer = pattern.outerIndexPtr();
        const int* inner = pattern.innerIndexPtr();
        for (int e = 0; e < n_elem; ++e) {
            const int* d = elem_dofs.data() + e * npe;
            for (int a = 0; a < npe; ++a) {
                const int* begin = inner + outer[d[a]];
                const int* end = inner + outer[d[a] + 1];
                for (int b = 0; b < npe; ++b) {
                    const int* it = std::lower_bound(begin, end, d[b]);
                    positions[(static_cast<std::size_t>(e) * npe + a) * npe + b] = static_cast<int>(it - inner);
                }
            }
        }
    }
};

}  // namespace detail

namespace {

constexpr int kLineQuadraturePoints = 10;

void line_shapes(int degree, double xi, double* v, double* dv)
{
    if (degree == 1) {
        v[0] = 1.0 - xi;
        v[1] = xi;
        dv[0] = -1.0;
        dv[1] = 1.0;
    } else {
        v[0] = (1.0 - xi) * (1.0 - 2.0 * xi);
        v[1] = xi * (2.0 * xi - 1.0);
        v[2] = 4.0 * xi * (1.0 - xi);
        dv[0] = 4.0 * xi - 3.0;
        dv[1] = 4.0 * xi - 1.0;
        dv[2] = 4.0 - 8.0 * xi;
    }
}

void triangle_shapes(int degree, const Eigen::Vector3d& l, double* v, Eigen::Vector2d* dref)
{
    if (degree == 1) {
        v[0] = l[0];
        v[1] = l[1];
        v[2] = l[2];
        dref[0] = {-1.0, -1.0};
        dref[1] = {1.0, 0.0};
        dref[2] = {0.0, 1.0};
        return;
    }
    v[0] = l[0] * (2 * l[0] - 1);
    v[1] = l[1] * (2 * l[1] - 1);
    v[2] = l[2] * (2 * l[2] - 1);
    v[3] = 4 * l[0] * l[1];
    v[4] = 4 * l[1] * l[2];
    v[5] = 4 * l[2] * l[0];
    dref[0] = {-(4 * l[0] - 1), -(4 * l[0] - 1)};
    dref[1] = {4 * l[1] - 1, 0.0};
    dref[2] = {0.0, 4 * l[2] - 1};
    dref[3] = {4 * (l[0] - l[1]), -4 * l[1]};
    dref[4] = {4 * l[2], 4 * l[1]};
    dref[5] = {-4 * l[2], 4 * (l[0] - l[2])};
}

void check_degree(int degree, int value_dim)
{
    if (degree != 1 && degree != 2) {
        throw UnsupportedDegree("FeSpace: degree must be 1 or 2, got " + std::to_string(degree));
    }
    if (value_dim != 1 && value_dim != 3) {
        throw InvalidArgument("FeSpace: value dimension must be 1 or 3, got " + std::to_string(value_dim));
    }
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const detail::Discretization> impl, int value_dim)
    : impl_(std::move(impl)), value_dim_(value_dim)
{
}

FeSpace FeSpace::interval(std::shared_ptr<const IntervalMesh> mesh, int degree, int value_dim)
{
    check_degree(degree, value_dim);
    auto d = std::make_shared<detail::Discretization>();
    const int n = mesh->n_elems;
    d->interval = mesh;
    d->degree = degree;
    d->spatial_dim = 1;
    d->n_scalar = degree * n + 1;
    d->dof_coords.resize(d->n_scalar);
    for (int i = 0; i <= n; ++i) {
        d->dof_coords[degree * i] = {mesh->nodes[i], 0.0};
    }
    if (degree == 2) {
        for (int e = 0; e < n; ++e) {
            d->dof_coords[2 * e + 1] = {0.5 * (mesh->nodes[e] + mesh->nodes[e + 1]), 0.0};
        }
    }
    d->boundary_flag.assign(d->n_scalar, 0);
    d->boundary_flag.front() = 1;
    d->boundary_flag.back() = 1;
    d->finish_boundary();

    d->n_elem = n;
    d->npe = degree + 1;
    d->elem_dofs.resize(static_cast<std::size_t>(n) * d->npe);
    for (int e = 0; e < n; ++e) {
        int* ed = d->elem_dofs.data() + e * d->npe;
        ed[0] = degree * e;
        ed[1] = degree * (e + 1);
        if (degree == 2) {
            ed[2] = 2 * e + 1;
        }
    }

    const LineRule rule = gauss_legendre(kLineQuadraturePoints);
    d->nq = kLineQuadraturePoints;
    d->ref_values.resize(static_cast<std::size_t>(d->nq) * d->npe);
    std::vector<double> ref_derivs(d->ref_values.size());
    for (int q = 0; q < d->nq; ++q) {
        line_shapes(degree, rule.points[q], d->ref_values.data() + q * d->npe, ref_derivs.data() + q * d->npe);
    }
    d->jxw.resize(static_cast<std::size_t>(n) * d->nq);
    d->points.resize(d->jxw.size());
    d->grads.resize(d->jxw.size() * d->npe);
    for (int e = 0; e < n; ++e) {
        const double x0 = mesh->nodes[e];
        const double len = mesh->nodes[e + 1] - x0;
        for (int q = 0; q < d->nq; ++q) {
            const std::size_t k = static_cast<std::size_t>(e) * d->nq + q;
            d->jxw[k] = rule.weights[q] * len;
            d->points[k] = {x0 + rule.points[q] * len, 0.0};
            for (int a = 0; a < d->npe; ++a) {
                d->grads[k * d->npe + a] = {ref_derivs[q * d->npe + a] / len, 0.0};
            }
        }
    }
    d->build_pattern();
    return FeSpace(std::move(d), value_dim);
}

FeSpace FeSpace::disk(std::shared_ptr<const DiskMesh> mesh, int degree, int value_dim)
{
    check_degree(degree, value_dim);
    auto d = std::make_shared<detail::Discretization>();
    d->disk = mesh;
    d->degree = degree;
    d->spatial_dim = 2;
    const int nv = mesh->num_vertices();
    const int nt = mesh->num_triangles();
    const bool curved_geometry = degree == 2 && mesh->isoparametric;

    d->n_elem = nt;
    d->npe = degree == 1 ? 3 : 6;
    d->elem_dofs.resize(static_cast<std::size_t>(nt) * d->npe);
    d->dof_coords.assign(mesh->vertices.begin(), mesh->vertices.end());
    d->boundary_flag.assign(nv, 0);
    for (int v : mesh->boundary_vertices) {
        d->boundary_flag[v] = 1;
    }

    std::unordered_map<long, int> edge_ids;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh->triangles[t];
        int* ed = d->elem_dofs.data() + t * d->npe;
        for (int i = 0; i < 3; ++i) {
            ed[i] = tri[i];
        }
        if (degree == 1) {
            continue;
        }
        const int bedge = mesh->triangle_boundary_edge[t];
        const int blocal = bedge >= 0 ? mesh->boundary_edges[bedge].local_edge : -1;
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            const long key = static_cast<long>(std::min(a, b)) * nv + std::max(a, b);
            auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(d->dof_coords.size()));
            if (inserted) {
                const bool on_boundary = e == blocal;
                Point2 x = 0.5 * (mesh->vertices[a] + mesh->vertices[b]);
                if (on_boundary && curved_geometry) {
                    x = mesh->boundary_edges[bedge].midpoint;
                }
                d->dof_coords.push_back(x);
                d->boundary_flag.push_back(on_boundary ? 1 : 0);
            }
            ed[3 + e] = it->second;
        }
    }
    d->n_scalar = static_cast<int>(d->dof_coords.size());
    d->finish_boundary();

    const TriangleRule rule = triangle_rule(2 * degree + 2);
    d->nq = static_cast<int>(rule.points.size());
    d->ref_values.resize(static_cast<std::size_t>(d->nq) * d->npe);
    std::vector<Eigen::Vector2d> ref_grads(d->ref_values.size());
    for (int q = 0; q < d->nq; ++q) {
        triangle_shapes(degree, rule.points[q], d->ref_values.data() + q * d->npe, ref_grads.data() + q * d->npe);
    }
    d->jxw.resize(static_cast<std::size_t>(nt) * d->nq);
    d->points.resize(d->jxw.size());
    d->grads.resize(d->jxw.size() * d->npe);
    for (int t = 0; t < nt; ++t) {
        const bool curved = curved_geometry && mesh->is_curved(t);
        const auto& tri = mesh->triangles[t];
        const Point2& p0 = mesh->vertices[tri[0]];
        Eigen::Matrix2d affine_jac;
        affine_jac.col(0) = mesh->vertices[tri[1]] - p0;
        affine_jac.col(1) = mesh->vertices[tri[2]] - p0;
        for (int q = 0; q < d->nq; ++q) {
            const Eigen::Vector3d& l = rule.points[q];
            Point2 x;
            Eigen::Matrix2d jac;
            if (curved) {
                const MappedPoint mp = geometry_map(*mesh, t, l);
                x = mp.x;
                jac = mp.jacobian;
            } else {
                x = p0 + affine_jac * Eigen::Vector2d(l[1], l[2]);
                jac = affine_jac;
            }
            const double det = jac.determinant();
            if (!(det > 0.0)) {
                throw DegenerateElement("FeSpace: non-positive Jacobian on triangle " + std::to_string(t));
            }
            const Eigen::Matrix2d jinv_t = jac.inverse().transpose();
            const std::size_t k = static_cast<std::size_t>(t) * d->nq + q;
            d->jxw[k] = rule.weights[q] * det;
            d->points[k] = x;
            for (int a = 0; a < d->npe; ++a) {
                d->grads[k * d->npe + a] = jinv_t * ref_grads[q * d->npe + a];
            }
        }
    }
    d->build_pattern();
    return FeSpace(std::move(d), value_dim);
}

FeSpace FeSpace::with_value_dim(int value_dim) const
{
    check_degree(impl_->degree, value_dim);
    return FeSpace(impl_, value_dim);
}

int FeSpace::degree() const { return impl_->degree; }
int FeSpace::spatial_dim() const { return impl_->spatial_dim; }
int FeSpace::num_scalar_dofs() const { return impl_->n_scalar; }
const std::vector<Point2>& FeSpace::dof_coords() const { return impl_->dof_coords; }
const std::vector<int>& FeSpace::boundary_dofs() const { return impl_->boundary; }
const std::vector<int>& FeSpace::interior_dofs() const { return impl_->interior; }
bool FeSpace::is_boundary(int scalar_dof) const { return impl_->boundary_flag[scalar_dof] != 0; }
int FeSpace::num_elements() const { return impl_->n_elem; }
int FeSpace::dofs_per_element() const { return impl_->npe; }

std::span<const int> FeSpace::element_dofs(int element) const
{
    return {impl_->elem_dofs.data() + static_cast<std::size_t>(element) * impl_->npe,
            static_cast<std::size_t>(impl_->npe)};
}

int FeSpace::points_per_element() const { return impl_->nq; }

double FeSpace::jxw(int element, int q) const
{
    return impl_->jxw[static_cast<std::size_t>(element) * impl_->nq + q];
}

const Point2& FeSpace::point(int element, int q) const
{
    return impl_->points[static_cast<std::size_t>(element) * impl_->nq + q];
}

std::span<const double> FeSpace::shape_values(int q) const
{
    return {impl_->ref_values.data() + static_cast<std::size_t>(q) * impl_->npe, static_cast<std::size_t>(impl_->npe)};
}

std::span<const Point2> FeSpace::shape_gradients(int element, int q) const
{
    const std::size_t k = static_cast<std::size_t>(element) * impl_->nq + q;
    return {impl_->grads.data() + k * impl_->npe, static_cast<std::size_t>(impl_->npe)};
}

const SparseMatrix& FeSpace::pattern() const { return impl_->pattern; }

std::span<const int> FeSpace::element_value_positions(int element) const
{
    const std::size_t n = static_cast<std::size_t>(impl_->npe) * impl_->npe;
    return {impl_->positions.data() + element * n, n};
}

const IntervalMesh* FeSpace::interval_mesh() const { return impl_->interval.get(); }
const DiskMesh* FeSpace::disk_mesh() const { return impl_->disk.get(); }

bool FeSpace::operator==(const FeSpace& other) const
{
    return impl_ == other.impl_ && value_dim_ == other.value_dim_;
}

bool FeSpace::same_scalar_space(const FeSpace& other) const { return impl_ == other.impl_; }

FeFunction::FeFunction(FeSpace space) : space_(std::move(space)), coeffs_(Vector::Zero(space_.num_dofs())) {}

FeFunction::FeFunction(FeSpace space, Vector coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients))
{
    if (coeffs_.size() != space_.num_dofs()) {
        throw InvalidArgument("FeFunction: coefficient length " + std::to_string(coeffs_.size()) +
                              " does not match space dimension " + std::to_string(space_.num_dofs()));
    }
}

Vector FeFunction::component(int c) const
{
    const int d = space_.value_dim();
    return Eigen::Map<const Vector, 0, Eigen::InnerStride<>>(coeffs_.data() + c, space_.num_scalar_dofs(),
                                                             Eigen::InnerStride<>(d));
}

void FeFunction::set_component(int c, const Vector& values)
{
    const int d = space_.value_dim();
    Eigen::Map<Vector, 0, Eigen::InnerStride<>>(coeffs_.data() + c, space_.num_scalar_dofs(),
                                                Eigen::InnerStride<>(d)) = values;
}

Eigen::Vector3d FeFunction::node_value(int scalar_dof) const
{
    return coeffs_.segment<3>(3 * scalar_dof);
}

void FeFunction::set_node_value(int scalar_dof, const Eigen::Vector3d& value)
{
    coeffs_.segment<3>(3 * scalar_dof) = value;
}

FeFunction interpolate(const FeSpace& space, const ScalarField& f)
{
    if (space.value_dim() != 1) {
        throw InvalidArgument("interpolate: scalar field on a vector space");
    }
    FeFunction out(space);
    const auto& x = space.dof_coords();
    for (int i = 0; i < space.num_scalar_dofs(); ++i) {
        out.coefficients()[i] = f(x[i]);
    }
    return out;
}

FeFunction interpolate_vector(const FeSpace& space, const VectorField& f)
{
    if (space.value_dim() != 3) {
        throw InvalidArgument("interpolate_vector: space must have three components");
    }
    FeFunction out(space);
    const auto& x = space.dof_coords();
    for (int i = 0; i < space.num_scalar_dofs(); ++i) {
        out.set_node_value(i, f(x[i]));
    }
    return out;
}

std::pair<double, double> evaluate_1d_with_derivative(const FeFunction& u, double r)
{
    const IntervalMesh* mesh = u.space().interval_mesh();
    if (mesh == nullptr || u.space().value_dim() != 1) {
        throw InvalidArgument("evaluate_1d: needs a scalar interval space");
    }
    if (!(r >= -1e-12 && r <= 1.0 + 1e-12)) {
        throw OutOfDomain("evaluate_1d: r = " + std::to_string(r) + " outside [0, 1]");
    }
    const int n = mesh->n_elems;
    const int e = std::clamp(static_cast<int>(std::floor(r * n)), 0, n - 1);
    const double len = mesh->nodes[e + 1] - mesh->nodes[e];
    const double xi = std::clamp((r - mesh->nodes[e]) / len, 0.0, 1.0);
    double v[3];
    double dv[3];
    const int p = u.space().degree();
    line_shapes(p, xi, v, dv);
    const auto dofs = u.space().element_dofs(e);
    double s = 0.0;
    double ds = 0.0;
    for (int a = 0; a <= p; ++a) {
        s += v[a] * u.coefficients()[dofs[a]];
        ds += dv[a] * u.coefficients()[dofs[a]];
    }
    return {s, ds / len};
}

double evaluate_1d(const FeFunction& u, double r) { return evaluate_1d_with_derivative(u, r).first; }

}  // namespace hmhf
