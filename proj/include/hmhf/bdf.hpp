#pragma once

#include "hmhf/fe_space.hpp"

#include <span>
#include <vector>

namespace hmhf {

/// BDF(k): (1/tau) sum_i delta_i u^{j+1-i} approximates the time derivative.
struct BdfScheme {
    int order = 1;
    std::vector<double> delta;  // delta_0 .. delta_k
};

/// k = 1: (1, -1); k = 2: (3/2, -2, 1/2). Other k throw InvalidArgument.
std::vector<double> bdf_coefficients(int k);
BdfScheme bdf_scheme(int k);

/// History is ordered newest first: history[0] = u^j, history[1] = u^{j-1}.
/// Returns u^j (k = 1) or 2 u^j - u^{j-1} (k = 2), no normalization.
Vector extrapolate(std::span<const Vector> history, int k);
FeFunction extrapolate_1d(std::span<const FeFunction> history, int k);

/// sum_{i=1..k} delta_i history[i-1]
Vector bdf_history_sum(const BdfScheme& scheme, std::span<const FeFunction> history);

}  // namespace hmhf
