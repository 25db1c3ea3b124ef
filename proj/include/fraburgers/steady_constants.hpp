#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "fraburgers/errors.hpp"

namespace fraburgers {

// Constant governing the forcing-smallness test for the steady problem:
//   C(alpha, eps) = max{ 3 eps,
//                        4 sqrt(alpha eps (12 - 2 alpha eps))
//                          / (3 - 2 alpha - alpha eps) }
// Finite only under the strict inequality alpha < 3/(2 + eps).
inline double smallness_constant(double alpha, double eps) {
    if (!(alpha > 1.0 && alpha < 1.5))
        throw ContractViolation("alpha must lie in (1, 3/2); got " +
                                std::to_string(alpha));
    if (!(eps > 0.0 && eps < 1.0))
        throw ContractViolation("eps must lie in (0, 1); got " +
                                std::to_string(eps));
    const double denom = 3.0 - 2.0 * alpha - alpha * eps;
    if (!(denom > 0.0))
        throw ContractViolation(
            "strict inequality alpha < 3/(2 + eps) violated: alpha = " +
            std::to_string(alpha) + ", eps = " + std::to_string(eps));
    const double inner = alpha * eps * (12.0 - 2.0 * alpha * eps);
    return std::max(3.0 * eps, 4.0 * std::sqrt(inner) / denom);
}

// Decay envelope constant and exponent: the forced iterates obey
//   l2(t) <= sqrt((12 - 2 alpha eps)/(alpha eps)) * ||f||_X * (1+t)^{-q},
//   q = 3/(2 alpha) - eps/2, and q > 1 on the admissible parameter range.
inline double decay_prefactor(double alpha, double eps) {
    return std::sqrt((12.0 - 2.0 * alpha * eps) / (alpha * eps));
}

inline double decay_exponent(double alpha, double eps) {
    return 3.0 / (2.0 * alpha) - eps / 2.0;
}

}  // namespace fraburgers
