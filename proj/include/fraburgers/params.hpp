#pragma once

#include <string>

#include "fraburgers/errors.hpp"

namespace fraburgers {

// Physical and discretization parameters shared across modules.
//   alpha: dissipation order, restricted to (1, 3/2)
//   eps:   slack exponent used by the smallness constant and decay envelope
//   rho:   forcing band gap; generated forcing vanishes for |k| < rho
//   nu:    optional extra viscosity (multiplies k^2)
//   dt:    time step
//   t_end: integration horizon
struct Params {
    double alpha = 1.2;
    double eps = 0.1;
    double rho = 1.0;
    double nu = 0.0;
    double dt = 1e-2;
    double t_end = 10.0;

    void validate() const {
        if (!(alpha > 1.0 && alpha < 1.5))
            throw ContractViolation("alpha must lie in (1, 3/2); got " +
                                    std::to_string(alpha));
        if (!(eps > 0.0 && eps < 1.0))
            throw ContractViolation("eps must lie in (0, 1); got " +
                                    std::to_string(eps));
        if (!(rho > 0.0))
            throw ContractViolation("rho must be positive");
        if (!(nu >= 0.0))
            throw ContractViolation("nu must be nonnegative");
        if (!(dt > 0.0))
            throw ContractViolation("dt must be positive");
        if (!(t_end > 0.0))
            throw ContractViolation("t_end must be positive");
    }
};

}  // namespace fraburgers
