#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/grid.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"

namespace fraburgers {

// Solution snapshot.
struct EvolutionState {
    double t = 0.0;
    Spectrum u;
};

// -u u_x in spectral form: -(1/2) d/dx of the dealiased square. The zero
// mode of the result is exactly zero, so the flux conserves the mean.
inline Spectrum nonlinear_flux(const Spectrum& u) {
    RealField phys = inverse(u);
    for (std::size_t m = 0; m < phys.size(); ++m) phys[m] *= phys[m];
    Spectrum sq = dealias(forward(phys));
    Spectrum out = derivative(sq);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -0.5;
    return out;
}

// Advection flux -(Vu)_x of the coupled linear problem, same dealiasing.
inline Spectrum advection_flux(const Spectrum& v_hat, const RealField& v_phys,
                               const Spectrum& u) {
    require_same_grid(v_hat.grid(), u.grid());
    RealField prod = inverse(u);
    for (std::size_t m = 0; m < prod.size(); ++m) prod[m] *= v_phys[m];
    Spectrum out = derivative(dealias(forward(prod)));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -1.0;
    return out;
}

// Energy bookkeeping along a run. Row accumulators use the trapezoid rule at
// the recording stride; bound_rhs is the a-priori budget
// ||u0||^2 + 4 t ||Lambda^{-alpha/2} f||^2, marked inapplicable when the
// forcing carries a mean or varies in time.
struct LedgerRow {
    double t = 0.0;
    double l2_sq = 0.0;
    double diss_acc = 0.0;   // integral of ||Lambda^{alpha/2} u||^2
    double visc_acc = 0.0;   // nu * integral of ||u_x||^2
    double bound_rhs = 0.0;
    double mean = 0.0;
};

struct EnergyLedger {
    static constexpr double kSlack = 1e-6;

    std::vector<LedgerRow> rows;
    bool bound_applicable = false;
    bool bound_ok = true;
    double max_ratio = 0.0;  // max (l2_sq + diss_acc) / bound_rhs

    void finalize() {
        bound_ok = true;
        max_ratio = 0.0;
        if (!bound_applicable) return;
        for (const auto& r : rows) {
            const double lhs = r.l2_sq + r.diss_acc;
            if (lhs > r.bound_rhs * (1.0 + kSlack)) bound_ok = false;
            if (r.bound_rhs > 0.0)
                max_ratio = std::max(max_ratio, lhs / r.bound_rhs);
            else if (lhs > 0.0)
                max_ratio = std::numeric_limits<double>::infinity();
        }
    }
};

// Recorded states at the ledger stride; always contains t = 0 and the final
// time.
struct Trajectory {
    GridPtr grid;
    std::vector<double> times;
    std::vector<Spectrum> states;

    std::size_t size() const { return times.size(); }
};

struct EvolveResult {
    Trajectory trajectory;
    EnergyLedger ledger;
};

// Energy budget of the advected linear problem when seeded with the forcing:
// sup l2^2 + (4/3) * dissipation integral stays within ||u0||_X^2.
struct FourThirdsCheck {
    bool applicable = false;
    bool ok = true;
    double max_lhs = 0.0;
    double rhs = 0.0;
};

struct LinearEvolveResult {
    Trajectory trajectory;
    EnergyLedger ledger;
    FourThirdsCheck four_thirds;
};

namespace detail {

// Exponential integrating-factor midpoint scheme. The stiff multiplier
// exp(-(|k|^alpha + nu k^2) dt) is handled exactly; the flux and forcing go
// through an explicit midpoint stage. Second order in dt.
class Stepper {
  public:
    using FluxFn = std::function<Spectrum(const Spectrum&)>;
    using ForcingFn = std::function<Spectrum(double)>;

    // fixed_speed pins the advective CFL speed (linear problems advect with
    // the frozen coefficient, not with u itself).
    Stepper(GridPtr grid, const Params& p, FluxFn flux, ForcingFn forcing,
            std::optional<double> fixed_speed = std::nullopt)
        : grid_(std::move(grid)),
          params_(p),
          flux_(std::move(flux)),
          forcing_(std::move(forcing)),
          fixed_speed_(fixed_speed) {
        cache_dt_ = p.dt;
        build_multipliers(p.dt, e_full_, e_half_);
    }

    // One step of size dt from state (t, u). Throws CflViolation and BlowUp.
    EvolutionState advance(const EvolutionState& state, double dt) const {
        const Spectrum& u = state.u;
        RealField phys = inverse(u);
        if (!phys.finite()) throw BlowUp(state.t);
        const double speed = fixed_speed_ ? *fixed_speed_ : phys.max_abs();
        const double admissible = 0.5 * grid_->dx() / std::max(1.0, speed);
        if (dt > admissible * (1.0 + 1e-12))
            throw CflViolation(dt, admissible);

        std::vector<double> ef, eh;
        const std::vector<double>* e_full = &e_full_;
        const std::vector<double>* e_half = &e_half_;
        if (dt != cache_dt_) {
            build_multipliers(dt, ef, eh);
            e_full = &ef;
            e_half = &eh;
        }

        Spectrum k1 = flux_(u) + forcing_(state.t);
        Spectrum a = u;
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = (*e_half)[i] * (a[i] + 0.5 * dt * k1[i]);
        Spectrum k2 = flux_(a) + forcing_(state.t + 0.5 * dt);
        Spectrum next = u;
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = (*e_full)[i] * next[i] + dt * (*e_half)[i] * k2[i];
        if (!next.finite()) throw BlowUp(state.t);
        return {state.t + dt, std::move(next)};
    }

  private:
    void build_multipliers(double dt, std::vector<double>& full,
                           std::vector<double>& half) const {
        const std::size_t n = grid_->n_modes();
        full.resize(n);
        half.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ak = std::abs(grid_->wavenumber(i));
            const double symbol =
                (ak > 0.0 ? std::pow(ak, params_.alpha) : 0.0) +
                params_.nu * ak * ak;
            full[i] = std::exp(-symbol * dt);
            half[i] = std::exp(-symbol * 0.5 * dt);
        }
    }

    GridPtr grid_;
    Params params_;
    FluxFn flux_;
    ForcingFn forcing_;
    std::optional<double> fixed_speed_;
    double cache_dt_;
    std::vector<double> e_full_;
    std::vector<double> e_half_;
};

struct LedgerAccumulators {
    double prev_t = 0.0;
    double prev_diss = 0.0;
    double prev_visc = 0.0;
    double diss_acc = 0.0;
    double visc_acc = 0.0;
};

inline double dissipation_density(const Spectrum& u, double alpha) {
    const Grid& g = *u.grid();
    double acc = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i)
        acc += std::pow(std::abs(g.wavenumber(i)), alpha) * std::norm(u[i]);
    return 2.0 * g.half_period() * acc;
}

inline double viscous_density(const Spectrum& u, double nu) {
    if (nu == 0.0) return 0.0;
    const Grid& g = *u.grid();
    double acc = 0.0;
    for (std::size_t i = 1; i < u.size(); ++i) {
        const double k = g.wavenumber(i);
        acc += k * k * std::norm(u[i]);
    }
    return nu * 2.0 * g.half_period() * acc;
}

// Shared driver: steps to t_end, records rows and snapshots at the stride,
// always records the final state.
// Steps with the cached dt except for one possibly shorter final step that
// lands exactly on t_end.
template <typename RowHook>
inline Trajectory drive(const Stepper& stepper, const Spectrum& u0,
                        const Params& p, std::size_t stride, RowHook&& hook) {
    if (stride == 0) throw ContractViolation("record stride must be >= 1");
    const std::size_t n_steps = static_cast<std::size_t>(
        std::ceil(p.t_end / p.dt - 1e-9));
    Trajectory traj;
    traj.grid = u0.grid();
    EvolutionState state{0.0, u0};
    hook(state);
    traj.times.push_back(state.t);
    traj.states.push_back(state.u);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const bool last = step == n_steps;
        const double dt = last ? p.t_end - state.t : p.dt;
        if (dt > 1e-15 * p.t_end) {
            state = stepper.advance(state, dt);
            if (last) state.t = p.t_end;
        } else if (last) {
            state.t = p.t_end;
        }
        if (step % stride == 0 || last) {
            hook(state);
            traj.times.push_back(state.t);
            traj.states.push_back(state.u);
        }
    }
    return traj;
}

}  // namespace detail

// One scheme step for the forced equation.
inline EvolutionState step(const EvolutionState& state, const Spectrum& f,
                           const Params& p) {
    p.validate();
    require_same_grid(state.u.grid(), f.grid());
    detail::Stepper stepper(
        state.u.grid(), p, [](const Spectrum& u) { return nonlinear_flux(u); },
        [&f](double) { return f; });
    return stepper.advance(state, p.dt);
}

// Integrates the forced equation on [0, t_end], recording the energy ledger
// and snapshots every `stride` steps.
inline EvolveResult integrate(const Spectrum& u0, const Spectrum& f,
                              const Params& p, std::size_t stride = 1) {
    p.validate();
    require_same_grid(u0.grid(), f.grid());

    EnergyLedger ledger;
    double budget_rate = 0.0;
    const double u0_l2 = l2_norm(u0);
    try {
        const double f_neg = sobolev_norm(f, -p.alpha / 2.0, true);
        budget_rate = 4.0 * f_neg * f_neg;
        ledger.bound_applicable = true;
    } catch (const MeanNotZero&) {
        ledger.bound_applicable = false;
    }

    detail::LedgerAccumulators acc;
    auto hook = [&](const EvolutionState& s) {
        const double diss = detail::dissipation_density(s.u, p.alpha);
        const double visc = detail::viscous_density(s.u, p.nu);
        if (!ledger.rows.empty()) {
            const double h = s.t - acc.prev_t;
            acc.diss_acc += 0.5 * h * (acc.prev_diss + diss);
            acc.visc_acc += 0.5 * h * (acc.prev_visc + visc);
        }
        acc.prev_t = s.t;
        acc.prev_diss = diss;
        acc.prev_visc = visc;
        const double l2 = l2_norm(s.u);
        ledger.rows.push_back({s.t, l2 * l2, acc.diss_acc, acc.visc_acc,
                               ledger.bound_applicable
                                   ? u0_l2 * u0_l2 + budget_rate * s.t
                                   : std::numeric_limits<double>::infinity(),
                               s.u[0].real()});
    };

    detail::Stepper stepper(
        u0.grid(), p, [](const Spectrum& u) { return nonlinear_flux(u); },
        [&f](double) { return f; });
    Trajectory traj = detail::drive(stepper, u0, p, stride, hook);
    ledger.finalize();
    return {std::move(traj), std::move(ledger)};
}

// Integrates the advected linear problem u_t + (V u)_x + Lambda^alpha u = 0
// from u0 (no forcing). When u0 has zero mean, additionally audits the
// four-thirds energy budget against ||u0||_X^2.
inline LinearEvolveResult integrate_linear(const Spectrum& v, const Spectrum& u0,
                                           const Params& p,
                                           std::size_t stride = 1) {
    p.validate();
    require_same_grid(v.grid(), u0.grid());

    EnergyLedger ledger;
    ledger.bound_applicable = true;  // forcing-free budget: ||u0||^2
    const double u0_l2 = l2_norm(u0);

    FourThirdsCheck ft;
    if (mean_zero(u0)) {
        ft.applicable = true;
        const double x = x_norm(inverse(u0), p);
        ft.rhs = x * x;
    }

    detail::LedgerAccumulators acc;
    auto hook = [&](const EvolutionState& s) {
        const double diss = detail::dissipation_density(s.u, p.alpha);
        const double visc = detail::viscous_density(s.u, p.nu);
        if (!ledger.rows.empty()) {
            const double h = s.t - acc.prev_t;
            acc.diss_acc += 0.5 * h * (acc.prev_diss + diss);
            acc.visc_acc += 0.5 * h * (acc.prev_visc + visc);
        }
        acc.prev_t = s.t;
        acc.prev_diss = diss;
        acc.prev_visc = visc;
        const double l2 = l2_norm(s.u);
        ledger.rows.push_back({s.t, l2 * l2, acc.diss_acc, acc.visc_acc,
                               u0_l2 * u0_l2, s.u[0].real()});
        if (ft.applicable) {
            const double lhs = l2 * l2 + (4.0 / 3.0) * acc.diss_acc;
            ft.max_lhs = std::max(ft.max_lhs, lhs);
            if (lhs > ft.rhs * (1.0 + EnergyLedger::kSlack)) ft.ok = false;
        }
    };

    const RealField v_phys = inverse(v);
    detail::Stepper stepper(
        u0.grid(), p,
        [&v, &v_phys](const Spectrum& u) {
            return advection_flux(v, v_phys, u);
        },
        [grid = u0.grid()](double) { return Spectrum::zero(grid); },
        v_phys.max_abs());
    Trajectory traj = detail::drive(stepper, u0, p, stride, hook);
    ledger.finalize();
    return {std::move(traj), std::move(ledger), ft};
}

}  // namespace fraburgers
