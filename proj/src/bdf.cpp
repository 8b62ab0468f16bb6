#include "hmhf/bdf.hpp"

#include "hmhf/errors.hpp"

#include <algorithm>
#include <string>

namespace hmhf {

std::vector<double> bdf_coefficients(int k)
{
    switch (k) {
    case 1:
        return {1.0, -1.0};
    case 2:
        return {1.5, -2.0, 0.5};
    default:
        throw InvalidArgument("bdf_coefficients: order " + std::to_string(k) + " is not supported");
    }
}

BdfScheme bdf_scheme(int k) { return {k, bdf_coefficients(k)}; }

Vector extrapolate(std::span<const Vector> history, int k)
{
    if (k != 1 && k != 2) {
        throw InvalidArgument("extrapolate: order " + std::to_string(k) + " is not supported");
    }
    if (history.size() < static_cast<std::size_t>(k)) {
        throw InvalidArgument("extrapolate: need " + std::to_string(k) + " past states");
    }
    if (k == 1) {
        return history[0];
    }
    if (history[0].size() != history[1].size()) {
        throw InvalidArgument("extrapolate: history states differ in length");
    }
    return 2.0 * history[0] - history[1];
}

FeFunction extrapolate_1d(std::span<const FeFunction> history, int k)
{
    if (history.size() < static_cast<std::size_t>(std::max(k, 1))) {
        throw InvalidArgument("extrapolate_1d: need " + std::to_string(k) + " past states");
    }
    std::vector<Vector> coeffs;
    for (const FeFunction& f : history) {
        coeffs.push_back(f.coefficients());
    }
    return {history[0].space(), extrapolate(coeffs, k)};
}

Vector bdf_history_sum(const BdfScheme& scheme, std::span<const FeFunction> history)
{
    if (history.size() < static_cast<std::size_t>(scheme.order)) {
        throw InvalidArgument("bdf_history_sum: need " + std::to_string(scheme.order) + " past states");
    }
    Vector s = Vector::Zero(history[0].coefficients().size());
    for (int i = 1; i <= scheme.order; ++i) {
        s += scheme.delta[i] * history[i - 1].coefficients();
    }
    return s;
}

}  // namespace hmhf
