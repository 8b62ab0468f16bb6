#include "hmhf/quadrature.hpp"

#include "hmhf/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hmhf {

LineRule gauss_legendre(int n)
{
    if (n < 1) {
        throw InvalidArgument("gauss_legendre: need at least one point");
    }
    LineRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

namespace {

void add_orbit3(TriangleRule& r, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    r.points.emplace_back(b, a, a);
    r.points.emplace_back(a, b, a);
    r.points.emplace_back(a, a, b);
    for (int k = 0; k < 3; ++k) {
        r.weights.push_back(0.5 * w);
    }
}

void add_orbit6(TriangleRule& r, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    r.points.emplace_back(a, b, c);
    r.points.emplace_back(b, c, a);
    r.points.emplace_back(c, a, b);
    r.points.emplace_back(a, c, b);
    r.points.emplace_back(c, b, a);
    r.points.emplace_back(b, a, c);
    for (int k = 0; k < 6; ++k) {
        r.weights.push_back(0.5 * w);
    }
}

}  // namespace

TriangleRule triangle_rule(int degree)
{
    TriangleRule r;
    if (degree <= 2) {
        r.degree = 2;
        add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    } else if (degree <= 4) {
        // Dunavant, 6 points; abscissae refined to double precision.
        r.degree = 4;
        add_orbit3(r, 0.44594849091596488632, 0.2233815896780114657);
        add_orbit3(r, 0.09157621350977074346, 0.10995174365532186764);
    } else if (degree <= 6) {
        // Dunavant, 12 points.
        r.degree = 6;
        add_orbit3(r, 0.24928674517091042129, 0.11678627572637936603);
        add_orbit3(r, 0.06308901449150222834, 0.050844906370206816921);
        add_orbit6(r, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
    } else {
        throw InvalidArgument("triangle_rule: degree " + std::to_string(degree) + " not tabulated");
    }
    return r;
}

}  // namespace hmhf
