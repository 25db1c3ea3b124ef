#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/evolution.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/forcing.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"
#include "fraburgers/steady_constants.hpp"

namespace fraburgers {

// Outcome of the forcing-smallness test gating the steady solver.
struct SmallnessReport {
    double constant = 0.0;    // C(alpha, eps)
    double f_x_norm = 0.0;
    double gate_value = 0.0;  // C / eps * ||f||_X
    bool passed = false;
};

// gate_value <= 1/3 admits the contraction argument. Throws when the
// parameter domain inequality alpha < 3/(2+eps) fails or f carries a mean.
inline SmallnessReport smallness_gate(const RealField& f, const Params& p) {
    p.validate();
    SmallnessReport r;
    r.constant = smallness_constant(p.alpha, p.eps);
    r.f_x_norm = x_norm(f, p);
    r.gate_value = r.constant / p.eps * r.f_x_norm;
    r.passed = r.gate_value <= 1.0 / 3.0;
    return r;
}

namespace detail {

// Nonlinear steady residual (1/2)((U V)_x dealiased) + Lambda^alpha U - f,
// measured in the homogeneous order -alpha/2 norm. V is the transport field;
// V = U gives the genuine residual.
inline double steady_residual(const Spectrum& u, const Spectrum& v,
                              const RealField& v_phys, const Spectrum& f,
                              double alpha) {
    Spectrum res = advection_flux(v, v_phys, u);  // -(vu)_x, dealiased
    const Spectrum lap = frac_laplacian(u, alpha);
    for (std::size_t i = 0; i < res.size(); ++i)
        res[i] = -res[i] * 0.5 + lap[i] - f[i];
    res[0] = {0.0, 0.0};  // all three terms are mean free
    return sobolev_norm(res, -alpha / 2.0, true);
}

}  // namespace detail

// Solves the advected linear steady problem
//   (1/2)(V U)_x + Lambda^alpha U = f  (dealiased transport)
// by Richardson iteration U <- Lambda^{-alpha}(f - (1/2)(V U)_x) started at
// U = 0. Requires mean-free f. Stops when the residual in the homogeneous
// order -alpha/2 norm drops to tol; diverging increments raise
// SolverDivergence.
inline Spectrum linear_steady_solve(const Spectrum& v, const Spectrum& f,
                                    const Params& p, double tol,
                                    std::size_t max_inner = 500) {
    p.validate();
    require_same_grid(v.grid(), f.grid());
    require_mean_zero(f);
    if (!(tol > 0.0)) throw ContractViolation("tol must be positive");

    const RealField v_phys = inverse(v);
    Spectrum u = Spectrum::zero(f.grid());
    // transport(u) = -(v u)_x; after the update u' = Lambda^{-alpha}(f +
    // transport(u)/2) the residual collapses to (transport(u) -
    // transport(u'))/2, so one flux evaluation per sweep suffices.
    Spectrum transport = advection_flux(v, v_phys, u);
    double prev_increment = std::numeric_limits<double>::infinity();
    std::size_t growth_streak = 0;
    for (std::size_t it = 0; it < max_inner; ++it) {
        Spectrum rhs = f;
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] += 0.5 * transport[i];
        rhs[0] = {0.0, 0.0};
        Spectrum next = inv_frac_laplacian(rhs, p.alpha);
        if (!next.finite())
            throw SolverDivergence("linear steady iteration lost finiteness");
        const double increment = l2_norm(next - u);
        Spectrum transport_next = advection_flux(v, v_phys, next);
        Spectrum res = transport;
        for (std::size_t i = 0; i < res.size(); ++i)
            res[i] = 0.5 * (res[i] - transport_next[i]);
        const double res_norm = sobolev_norm(res, -p.alpha / 2.0, true);
        u = std::move(next);
        transport = std::move(transport_next);
        if (res_norm <= tol) return u;
        growth_streak = increment > prev_increment ? growth_streak + 1 : 0;
        if (growth_streak >= 3)
            throw SolverDivergence(
                "linear steady iteration increments grew three times in a "
                "row; transport field too large for the fixed point");
        prev_increment = increment;
    }
    throw SolverDivergence("linear steady iteration missed tol " +
                           std::to_string(tol) + " within " +
                           std::to_string(max_inner) + " sweeps");
}

// One row per outer update of the steady fixed point.
struct IterationRow {
    std::size_t i = 0;
    double increment_norm = 0.0;  // ||Lambda^{alpha/2}(U^{i} - U^{i-1})||
    double ratio = 0.0;           // successive increment ratio, 0 on row 1
    double residual = 0.0;        // nonlinear residual, order -alpha/2 norm
    double h_half_norm = 0.0;     // inhomogeneous alpha/2 norm of U^i
};

struct IterationTrace {
    std::vector<IterationRow> rows;
};

struct PicardResult {
    RealField steady_state;
    IterationTrace trace;
    SmallnessReport gate;
    double iterate_bound = 0.0;   // C / eps * ||f||_X
    bool iterate_bound_ok = true; // every h_half_norm within the bound
};

// Successive linear solves with the previous iterate as transport field.
// Gate-passing forcing contracts the increments at ratio <= 1/2 plus
// discretization slack; the gate is enforced unless the caller overrides.
inline PicardResult picard_solve(const RealField& f, const Params& p,
                                 double tol, std::size_t max_iter,
                                 bool enforce_gate = true) {
    p.validate();
    if (!(tol > 0.0)) throw ContractViolation("tol must be positive");
    if (max_iter == 0) throw ContractViolation("max_iter must be >= 1");

    SmallnessReport gate = smallness_gate(f, p);
    if (enforce_gate && !gate.passed)
        throw GateNotSatisfied(
            "smallness gate failed: gate value " +
                std::to_string(gate.gate_value) + " > 1/3",
            gate.gate_value);

    const Spectrum f_hat = forward(f);
    const double inner_tol = std::min(0.1 * tol, 1e-10);
    const double bound = gate.constant / p.eps * gate.f_x_norm;

    PicardResult out{RealField::zero(f.grid()), {}, gate, bound, true};
    Spectrum u = Spectrum::zero(f.grid());
    double prev_increment = 0.0;
    for (std::size_t i = 1; i <= max_iter; ++i) {
        Spectrum next = linear_steady_solve(u, f_hat, p, inner_tol);
        const double increment = sobolev_norm(next - u, p.alpha / 2.0, true);
        const RealField next_phys = inverse(next);
        IterationRow row;
        row.i = i;
        row.increment_norm = increment;
        row.ratio = (i >= 2 && prev_increment > 0.0)
                        ? increment / prev_increment
                        : 0.0;
        row.residual = detail::steady_residual(next, next, next_phys, f_hat,
                                               p.alpha);
        row.h_half_norm = sobolev_norm(next, p.alpha / 2.0, false);
        if (row.h_half_norm > bound * (1.0 + 1e-6))
            out.iterate_bound_ok = false;
        out.trace.rows.push_back(row);
        u = std::move(next);
        if (increment <= tol) {
            out.steady_state = next_phys;
            return out;
        }
        prev_increment = increment;
    }
    const double last_ratio = out.trace.rows.back().ratio;
    if (last_ratio > 0.9)
        throw SolverDivergence(
            "steady fixed point stopped contracting (last increment ratio " +
            std::to_string(last_ratio) +
            "); forcing too large for the smallness regime");
    throw SolverDivergence("steady fixed point missed tol " +
                           std::to_string(tol) + " within " +
                           std::to_string(max_iter) + " outer iterations");
}

// Steady state of the advected linear problem as the time integral of its
// decaying evolution seeded with f. The integral is accumulated with the
// trapezoid rule; convergence is declared when the accumulated increment
// over one unit of time falls below tail_tol in L2. Horizon capped at
// p.t_end.
inline Spectrum steady_via_time_integral(const Spectrum& v, const Spectrum& f,
                                         const Params& p, double tail_tol) {
    p.validate();
    require_same_grid(v.grid(), f.grid());
    require_mean_zero(f);
    if (!(tail_tol > 0.0)) throw ContractViolation("tail_tol must be positive");

    const RealField v_phys = inverse(v);
    detail::Stepper stepper(
        f.grid(), p,
        [&v, &v_phys](const Spectrum& u) {
            return advection_flux(v, v_phys, u);
        },
        [grid = f.grid()](double) { return Spectrum::zero(grid); },
        v_phys.max_abs());

    EvolutionState state{0.0, f};
    Spectrum integral = Spectrum::zero(f.grid());
    Spectrum at_last_unit = integral;
    double next_unit = 1.0;
    const std::size_t n_steps = static_cast<std::size_t>(
        std::ceil(p.t_end / p.dt - 1e-9));
    double last_increment = std::numeric_limits<double>::infinity();
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const bool last = step == n_steps;
        const double dt = last ? p.t_end - state.t : p.dt;
        if (dt <= 0.0) break;
        EvolutionState next = stepper.advance(state, dt);
        for (std::size_t i = 0; i < integral.size(); ++i)
            integral[i] += 0.5 * dt * (state.u[i] + next.u[i]);
        state = std::move(next);
        if (state.t >= next_unit || last) {
            last_increment = l2_norm(integral - at_last_unit);
            if (last_increment <= tail_tol) return integral;
            at_last_unit = integral;
            next_unit += 1.0;
        }
    }
    throw TailNotConverged(p.t_end, last_increment);
}

// Re-runs the fixed point from seeded nonzero starting points that respect
// the iterate bound, and measures how far the endpoints spread.
struct UniquenessReport {
    std::size_t restarts = 0;
    std::size_t converged = 0;
    std::size_t failed = 0;
    double max_pairwise_spread = 0.0;  // homogeneous alpha/2 seminorm
};

inline UniquenessReport uniqueness_probe(const RealField& steady,
                                         const RealField& f, const Params& p,
                                         std::size_t n_perturb, double tol,
                                         std::size_t max_iter,
                                         std::uint64_t seed = 0) {
    p.validate();
    require_same_grid(steady.grid(), f.grid());
    UniquenessReport rep;
    rep.restarts = n_perturb;
    if (n_perturb == 0) return rep;

    const SmallnessReport gate = smallness_gate(f, p);
    const double bound = gate.constant / p.eps * gate.f_x_norm;
    const Spectrum f_hat = forward(f);
    const double inner_tol = std::min(0.1 * tol, 1e-10);
    const GridPtr grid = f.grid();

    std::vector<Spectrum> endpoints;
    endpoints.push_back(forward(steady));
    for (std::size_t r = 0; r < n_perturb; ++r) {
        // Starting guesses sized to a varying fraction of the iterate bound.
        const double frac = 0.2 + 0.8 * uniform_unit(seed, 1000 + r, 0);
        RealField guess = random_band_field(grid, seed, 2000 + r, grid->k_min(),
                                            grid->dealias_cutoff(), 1.0);
        Spectrum gs = forward(guess);
        const double h = sobolev_norm(gs, p.alpha / 2.0, false);
        if (h > 0.0) gs = (frac * bound / h) * gs;

        try {
            Spectrum u = gs;
            bool done = false;
            for (std::size_t i = 1; i <= max_iter; ++i) {
                Spectrum next = linear_steady_solve(u, f_hat, p, inner_tol);
                const double inc = sobolev_norm(next - u, p.alpha / 2.0, true);
                u = std::move(next);
                if (inc <= tol) {
                    done = true;
                    break;
                }
            }
            if (done) {
                endpoints.push_back(std::move(u));
                ++rep.converged;
            } else {
                ++rep.failed;
            }
        } catch (const Error&) {
            ++rep.failed;
        }
    }
    for (std::size_t a = 0; a < endpoints.size(); ++a)
        for (std::size_t b = a + 1; b < endpoints.size(); ++b)
            rep.max_pairwise_spread = std::max(
                rep.max_pairwise_spread,
                sobolev_norm(endpoints[a] - endpoints[b], p.alpha / 2.0, true));
    return rep;
}

}  // namespace fraburgers
