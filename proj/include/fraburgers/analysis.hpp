#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/evolution.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"
#include "fraburgers/steady.hpp"
#include "fraburgers/steady_constants.hpp"

namespace fraburgers {

// --------------------------------------------------------------------------
// Level-set truncations
// --------------------------------------------------------------------------

enum class TruncationSide { plus, minus };

// (u - lambda)_+ or (u + lambda)_-, pointwise on the grid. Both are
// 1-Lipschitz images of u vanishing where |u| <= lambda (for lambda >= 0),
// so every grid Lp norm of the output is dominated by that of u.
inline RealField truncate(const RealField& u, double lambda,
                          TruncationSide side) {
    RealField out = u;
    if (side == TruncationSide::plus) {
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m] = std::max(u[m] - lambda, 0.0);
    } else {
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m] = std::min(u[m] + lambda, 0.0);
    }
    return out;
}

// Pointwise-multiplier dissipation test: for h = (u - lambda)_+,
//   lhs = integral of Lambda^alpha u * h   >=   rhs = ||Lambda^{alpha/2} h||^2.
struct CordobaResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline CordobaResult cordoba_check(const RealField& u, double lambda,
                                   const Params& p) {
    p.validate();
    const Spectrum u_hat = forward(u);
    const RealField lap = inverse(frac_laplacian(u_hat, p.alpha));
    const RealField h = truncate(u, lambda, TruncationSide::plus);
    CordobaResult r;
    r.lhs = inner_product(lap, h);
    const double hn = sobolev_norm(forward(h), p.alpha / 2.0, true);
    r.rhs = hn * hn;
    return r;
}

// --------------------------------------------------------------------------
// Decay envelope
// --------------------------------------------------------------------------

struct DecayRow {
    double t = 0.0;
    double l2 = 0.0;
    double bound = 0.0;
    bool ok = false;
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double window_a = 0.0;
    double window_b = 0.0;
    double prefactor = 0.0;       // sqrt((12-2 alpha eps)/(alpha eps)) ||f||_X
    double exponent = 0.0;        // 3/(2 alpha) - eps/2
    bool exponent_above_one = false;
    bool all_ok_in_window = true;
    double fit_exponent = 0.0;    // least-squares slope of log l2 vs log(1+t)
    bool fit_applicable = false;
};

// Runs the advected linear problem seeded with f and audits the algebraic
// decay envelope l2(t) <= prefactor * (1+t)^{-exponent}. The envelope is a
// line-case statement; on the torus the spectral gap takes over past
// t ~ k_min^{-alpha}, so the audit window is capped there. Requires the
// smallness gate and the iterate bound on the transport field.
inline DecayReport decay_experiment(const RealField& v, const RealField& f,
                                    const Params& p, std::size_t stride = 1,
                                    double window_a = 1.0,
                                    double window_b = 0.0,
                                    double slack = 1e-9,
                                    bool enforce_gate = true) {
    p.validate();
    require_same_grid(v.grid(), f.grid());
    const SmallnessReport gate = smallness_gate(f, p);
    if (enforce_gate && !gate.passed)
        throw GateNotSatisfied("decay experiment needs a gate-passing forcing",
                               gate.gate_value);
    const double iterate_bound = gate.constant / p.eps * gate.f_x_norm;
    const double v_half = sobolev_norm(forward(v), p.alpha / 2.0, false);
    if (enforce_gate && v_half > iterate_bound * (1.0 + 1e-9))
        throw GateNotSatisfied(
            "transport field exceeds the iterate bound of the smallness "
            "regime",
            v_half);

    DecayReport rep;
    const Grid& g = *f.grid();
    const double torus_cap = 0.5 * std::pow(g.k_min(), -p.alpha);
    rep.window_a = window_a;
    rep.window_b = window_b > 0.0 ? window_b : std::min(p.t_end, torus_cap);
    rep.prefactor = decay_prefactor(p.alpha, p.eps) * gate.f_x_norm;
    rep.exponent = decay_exponent(p.alpha, p.eps);
    rep.exponent_above_one = rep.exponent > 1.0;

    const LinearEvolveResult run =
        integrate_linear(forward(v), forward(f), p, stride);
    std::size_t in_window = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t fit_count = 0;
    for (std::size_t s = 0; s < run.trajectory.size(); ++s) {
        DecayRow row;
        row.t = run.trajectory.times[s];
        row.l2 = std::sqrt(run.ledger.rows[s].l2_sq);
        row.bound = rep.prefactor * std::pow(1.0 + row.t, -rep.exponent);
        row.ok = row.l2 <= row.bound * (1.0 + slack) + slack;
        const bool inside = row.t >= rep.window_a && row.t <= rep.window_b;
        if (inside) {
            ++in_window;
            if (!row.ok) rep.all_ok_in_window = false;
            if (row.l2 > 0.0) {
                const double x = std::log1p(row.t);
                const double y = std::log(row.l2);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++fit_count;
            }
        }
        rep.rows.push_back(row);
    }
    if (in_window < 10)
        throw WindowTooShort(
            "decay window holds " + std::to_string(in_window) +
            " samples; at least 10 are needed");
    if (fit_count >= 10) {
        const double n = static_cast<double>(fit_count);
        const double denom = n * sxx - sx * sx;
        if (denom > 0.0) {
            rep.fit_exponent = (n * sxy - sx * sy) / denom;
            rep.fit_applicable = true;
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// Low/high frequency split
// --------------------------------------------------------------------------

struct SplitRow {
    double t = 0.0;
    double cutoff = 0.0;     // shrinking splitting radius g(t)
    double low_energy = 0.0;
    double high_energy = 0.0;
};

struct SplitDiagnostic {
    std::vector<SplitRow> rows;
    double m = 0.0;  // 3/alpha - eps
};

// Splits each snapshot's energy across the time-dependent ball
// |k| <= g(t) = (3m / (4(1+t)))^{1/alpha}. The two parts add up to the
// total L2 energy exactly.
inline SplitDiagnostic split_diagnostic(const Trajectory& traj,
                                        const Params& p) {
    p.validate();
    if (traj.size() == 0)
        throw ContractViolation("split diagnostic needs a nonempty trajectory");
    SplitDiagnostic rep;
    rep.m = 3.0 / p.alpha - p.eps;
    const Grid& g = *traj.grid;
    const double measure = 2.0 * g.half_period();
    for (std::size_t s = 0; s < traj.size(); ++s) {
        SplitRow row;
        row.t = traj.times[s];
        row.cutoff =
            std::pow(3.0 * rep.m / (4.0 * (1.0 + row.t)), 1.0 / p.alpha);
        const Spectrum& u = traj.states[s];
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double e = measure * std::norm(u[i]);
            if (std::abs(g.wavenumber(i)) <= row.cutoff)
                row.low_energy += e;
            else
                row.high_energy += e;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

// --------------------------------------------------------------------------
// Level-set energy ladder
// --------------------------------------------------------------------------

struct LevelSetLevel {
    std::size_t n = 0;
    double lambda = 0.0;        // M (1 - 2^{-n})
    double window_start = 0.0;  // t0 (1 - 2^{-n})
    double energy_plus = 0.0;
    double energy_minus = 0.0;
};

struct LevelSetReport {
    std::vector<LevelSetLevel> levels;
    double t0 = 0.0;
    double level_amplitude = 0.0;    // M
    double e0 = 0.0;                 // ladder energy at n = 0
    bool monotone = true;            // energies never increase with n
    double max_inequality_violation = 0.0;
    std::size_t inequality_violations = 0;
    double inequality_tol = 0.0;
};

namespace detail {

struct LevelSamples {
    std::vector<double> l2_sq;      // ||u_lambda||^2 at each sample
    std::vector<double> diss;       // ||Lambda^{alpha/2} u_lambda||^2
    std::vector<double> force;      // integral of f * u_lambda
};

inline LevelSamples level_samples(const Trajectory& traj, double lambda,
                                  TruncationSide side, const RealField& f,
                                  double alpha) {
    LevelSamples out;
    out.l2_sq.reserve(traj.size());
    out.diss.reserve(traj.size());
    out.force.reserve(traj.size());
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const RealField u = inverse(traj.states[s]);
        const RealField ul = truncate(u, lambda, side);
        double l2sq = 0.0;
        for (std::size_t m = 0; m < ul.size(); ++m) l2sq += ul[m] * ul[m];
        l2sq *= ul.grid()->dx();
        out.l2_sq.push_back(l2sq);
        const double hn = sobolev_norm(forward(ul), alpha / 2.0, true);
        out.diss.push_back(hn * hn);
        out.force.push_back(inner_product(f, ul));
    }
    return out;
}

// Trapezoid of sampled values from interpolated time a to sample index hi.
inline double trapezoid_from(const std::vector<double>& t,
                             const std::vector<double>& v, double a,
                             std::size_t hi) {
    double acc = 0.0;
    std::size_t lo = 0;
    while (lo + 1 < t.size() && t[lo + 1] <= a) ++lo;
    // partial cell [a, t[lo+1]]
    if (lo + 1 <= hi && t[lo + 1] > a && t[lo] < t[lo + 1]) {
        const double w = (a - t[lo]) / (t[lo + 1] - t[lo]);
        const double va = v[lo] + w * (v[lo + 1] - v[lo]);
        acc += 0.5 * (t[lo + 1] - a) * (va + v[lo + 1]);
        ++lo;
    }
    for (std::size_t s = lo; s + 1 <= hi; ++s)
        acc += 0.5 * (t[s + 1] - t[s]) * (v[s] + v[s + 1]);
    return acc;
}

}  // namespace detail

// Evaluates the shrinking-window level-set energies
//   e_n = sup_{[T_n, t0]} ||u_{lambda_n}||^2
//         + 2 * integral over [T_n, t0] of ||Lambda^{alpha/2} u_{lambda_n}||^2
// on both truncation sides, and audits the level-set energy inequality
// between every earlier sample t1 and t0 at every level:
//   ||u_l(t0)||^2 + 2 int_{t1}^{t0} ||Lambda^{alpha/2} u_l||^2
//     <= ||u_l(t1)||^2 + 2 int_{t1}^{t0} int f u_l.
inline LevelSetReport level_set_energy(const Trajectory& traj, double t0,
                                       double level_amplitude,
                                       std::size_t n_max, const RealField& f,
                                       const Params& p,
                                       double inequality_tol) {
    p.validate();
    if (traj.size() < 2)
        throw ContractViolation("level-set audit needs a sampled trajectory");
    require_same_grid(traj.grid, f.grid());
    if (!(t0 > 0.0) || t0 > traj.times.back() + 1e-12)
        throw ContractViolation("t0 must lie inside the trajectory");
    if (!(level_amplitude > 0.0))
        throw ContractViolation("level amplitude must be positive");

    // Samples up to t0.
    std::size_t hi = 0;
    while (hi + 1 < traj.size() && traj.times[hi + 1] <= t0 + 1e-12) ++hi;
    const std::vector<double>& times = traj.times;

    LevelSetReport rep;
    rep.t0 = times[hi];
    rep.level_amplitude = level_amplitude;
    rep.inequality_tol = inequality_tol;

    for (std::size_t n = 0; n <= n_max; ++n) {
        LevelSetLevel level;
        level.n = n;
        const double frac = 1.0 - std::ldexp(1.0, -static_cast<int>(n));
        level.lambda = level_amplitude * frac;
        level.window_start = rep.t0 * frac;

        std::size_t window_samples = 0;
        for (std::size_t s = 0; s <= hi; ++s)
            if (times[s] >= level.window_start - 1e-12) ++window_samples;
        if (window_samples < 8)
            throw WindowTooShort(
                "level " + std::to_string(n) + " window holds " +
                std::to_string(window_samples) +
                " samples; at least 8 are needed (refine the recording "
                "stride)");

        for (TruncationSide side :
             {TruncationSide::plus, TruncationSide::minus}) {
            const detail::LevelSamples ls =
                detail::level_samples(traj, level.lambda, side, f, p.alpha);
            double sup = 0.0;
            for (std::size_t s = 0; s <= hi; ++s)
                if (times[s] >= level.window_start - 1e-12)
                    sup = std::max(sup, ls.l2_sq[s]);
            const double diss_int = detail::trapezoid_from(
                times, ls.diss, level.window_start, hi);
            const double energy = sup + 2.0 * diss_int;
            if (side == TruncationSide::plus)
                level.energy_plus = energy;
            else
                level.energy_minus = energy;

            // Energy inequality from every earlier sample to t0.
            double diss_suffix = 0.0;
            double force_suffix = 0.0;
            for (std::size_t s = hi; s-- > 0;) {
                const double h = times[s + 1] - times[s];
                diss_suffix += 0.5 * h * (ls.diss[s] + ls.diss[s + 1]);
                force_suffix += 0.5 * h * (ls.force[s] + ls.force[s + 1]);
                const double lhs = ls.l2_sq[hi] + 2.0 * diss_suffix;
                const double rhs = ls.l2_sq[s] + 2.0 * force_suffix;
                const double violation = lhs - rhs;
                if (violation > rep.max_inequality_violation)
                    rep.max_inequality_violation = violation;
                if (violation > inequality_tol) ++rep.inequality_violations;
            }
        }
        rep.levels.push_back(level);
    }
    rep.e0 = std::max(rep.levels[0].energy_plus, rep.levels[0].energy_minus);
    for (std::size_t n = 0; n + 1 < rep.levels.size(); ++n) {
        if (rep.levels[n + 1].energy_plus >
                rep.levels[n].energy_plus * (1.0 + 1e-12) + 1e-300 ||
            rep.levels[n + 1].energy_minus >
                rep.levels[n].energy_minus * (1.0 + 1e-12) + 1e-300)
            rep.monotone = false;
    }
    return rep;
}

// Pointwise bound audit: sup |u(t)| against the decay-plus-forcing envelope
//   c * (||u0||_{L2} t^{-1/2} + ||f||_{hom -alpha/2} + ||f||_{L2}^{1/3}).
struct LinfRow {
    double t = 0.0;
    double linf = 0.0;
    double envelope = 0.0;  // bracket above, before the constant
    double ratio = 0.0;
};

struct LinfReport {
    std::vector<LinfRow> rows;
    double max_ratio = 0.0;
};

inline LinfReport linf_bound_check(const Trajectory& traj,
                                   const RealField& u0, const RealField& f,
                                   const Params& p) {
    p.validate();
    if (traj.size() == 0)
        throw ContractViolation("pointwise audit needs a nonempty trajectory");
    require_same_grid(traj.grid, u0.grid());
    require_same_grid(traj.grid, f.grid());
    const double u0_l2 = l2_norm(forward(u0));
    const Spectrum f_hat = forward(f);
    double f_neg = 0.0;
    if (mean_zero(f_hat))
        f_neg = sobolev_norm(f_hat, -p.alpha / 2.0, true);
    const double f_l2_cbrt = std::cbrt(l2_norm(f_hat));

    LinfReport rep;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        LinfRow row;
        row.t = traj.times[s];
        row.linf = inverse(traj.states[s]).max_abs();
        if (row.t > 0.0) {
            row.envelope =
                u0_l2 / std::sqrt(row.t) + f_neg + f_l2_cbrt;
            row.ratio = row.envelope > 0.0 ? row.linf / row.envelope : 0.0;
        }
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

// --------------------------------------------------------------------------
// Perturbation stability
// --------------------------------------------------------------------------

struct StabilityRow {
    double t = 0.0;
    double w_l2 = 0.0;       // ||u - U||
    double diss_acc = 0.0;   // integral of ||Lambda^{alpha/2} w||^2
    double ledger_lhs = 0.0; // w_l2^2 + (2/3) diss_acc
    bool ledger_ok = false;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;   // at the recording stride
    double theta_l2 = 0.0;
    bool ledger_ok = true;            // every step, not only recorded rows
    bool monotone = true;             // w never grows by more than 1e-9/step
    double max_step_increase = 0.0;
    double final_ratio = 0.0;         // ||w(t_end)|| / ||theta||
    static constexpr double kMonotoneTol = 1e-9;
};

// Integrates the forced equation from U + theta and tracks the deviation
// w = u - U against the perturbation budget
//   ||w(t)||^2 + (2/3) int_0^t ||Lambda^{alpha/2} w||^2 <= ||theta||^2.
// Requires the steady state inside the stability ball
// ||U||_{H^{alpha/2}} <= 1/3.
inline StabilityReport stability_experiment(const RealField& steady,
                                            const RealField& theta,
                                            const RealField& f,
                                            const Params& p,
                                            std::size_t stride = 1,
                                            bool enforce_gate = true) {
    p.validate();
    require_same_grid(steady.grid(), theta.grid());
    require_same_grid(steady.grid(), f.grid());
    const Spectrum steady_hat = forward(steady);
    const double steady_half =
        sobolev_norm(steady_hat, p.alpha / 2.0, false);
    if (enforce_gate && steady_half > 1.0 / 3.0 + 1e-12)
        throw GateNotSatisfied(
            "stability experiment needs ||U||_{H^{alpha/2}} <= 1/3",
            steady_half);

    const Spectrum f_hat = forward(f);
    const Spectrum theta_hat = forward(theta);
    Spectrum u0 = steady_hat + theta_hat;

    StabilityReport rep;
    rep.theta_l2 = l2_norm(theta_hat);
    const double budget = rep.theta_l2 * rep.theta_l2;

    double prev_w = rep.theta_l2;
    double prev_diss = 0.0;
    double diss_acc = 0.0;
    const std::size_t n_steps = static_cast<std::size_t>(
        std::ceil(p.t_end / p.dt - 1e-9));

    detail::Stepper stepper(
        steady.grid(), p,
        [](const Spectrum& u) { return nonlinear_flux(u); },
        [&f_hat](double) { return f_hat; });

    EvolutionState state{0.0, std::move(u0)};
    {
        const Spectrum w = state.u - steady_hat;
        const double w_l2 = l2_norm(w);
        prev_w = w_l2;
        prev_diss = detail::dissipation_density(w, p.alpha);
        rep.rows.push_back({0.0, w_l2, 0.0, w_l2 * w_l2,
                            w_l2 * w_l2 <=
                                budget * (1.0 + EnergyLedger::kSlack)});
        if (!rep.rows.back().ledger_ok) rep.ledger_ok = false;
    }
    double prev_t = 0.0;
    for (std::size_t step_index = 1; step_index <= n_steps; ++step_index) {
        const bool last = step_index == n_steps;
        const double dt = last ? p.t_end - state.t : p.dt;
        if (dt > 1e-15 * p.t_end) {
            state = stepper.advance(state, dt);
            if (last) state.t = p.t_end;
        } else if (last) {
            state.t = p.t_end;
        }
        const Spectrum w = state.u - steady_hat;
        const double w_l2 = l2_norm(w);
        const double diss = detail::dissipation_density(w, p.alpha);
        diss_acc += 0.5 * (state.t - prev_t) * (prev_diss + diss);
        const double lhs = w_l2 * w_l2 + (2.0 / 3.0) * diss_acc;
        const bool ok = lhs <= budget * (1.0 + EnergyLedger::kSlack);
        if (!ok) rep.ledger_ok = false;
        const double increase = w_l2 - prev_w;
        rep.max_step_increase = std::max(rep.max_step_increase, increase);
        if (increase > StabilityReport::kMonotoneTol) rep.monotone = false;
        if (step_index % stride == 0 || last)
            rep.rows.push_back({state.t, w_l2, diss_acc, lhs, ok});
        prev_w = w_l2;
        prev_diss = diss;
        prev_t = state.t;
    }
    rep.final_ratio = rep.theta_l2 > 0.0 ? prev_w / rep.theta_l2 : 0.0;
    return rep;
}

}  // namespace fraburgers
