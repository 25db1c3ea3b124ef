#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fraburgers/fraburgers.hpp"

using namespace fraburgers;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Manufactured solution u*(x, t) = e^{-t} sin(2x) on [-pi, pi). Plugging it
// into u_t + u u_x + Lambda^alpha u yields the forcing
//   f*(x, t) = (2^alpha - 1) e^{-t} sin(2x) + e^{-2t} sin(4x).
Spectrum manufactured_forcing(const GridPtr& g, double alpha, double t) {
    const double a = (std::pow(2.0, alpha) - 1.0) * std::exp(-t);
    const double b = std::exp(-2.0 * t);
    const RealField f = RealField::sample(g, [a, b](double x) {
        return a * std::sin(2.0 * x) + b * std::sin(4.0 * x);
    });
    return forward(f);
}

double manufactured_error(const GridPtr& g, double alpha, double dt,
                          double t_end) {
    Params p;
    p.alpha = alpha;
    p.dt = dt;
    p.t_end = t_end;
    detail::Stepper stepper(
        g, p, [](const Spectrum& u) { return nonlinear_flux(u); },
        [&g, alpha](double t) { return manufactured_forcing(g, alpha, t); });
    EvolutionState state{
        0.0,
        forward(RealField::sample(
            g, [](double x) { return std::sin(2.0 * x); }))};
    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t s = 0; s < n_steps; ++s) state = stepper.advance(state, dt);
    const RealField num = inverse(state.u);
    double err = 0.0;
    const double decay = std::exp(-t_end);
    for (std::size_t m = 0; m < num.size(); ++m)
        err = std::max(err,
                       std::abs(num[m] - decay * std::sin(2.0 * g->x(m))));
    return err;
}

}  // namespace

TEST_CASE("nonlinear flux reproduces the hand-expanded single-mode case") {
    // u = 2 cos x gives u^2 = 2 + 2 cos 2x, so -(u^2/2)_x = 2 sin 2x.
    const auto g = make_grid(64, kPi);
    const RealField u =
        RealField::sample(g, [](double x) { return 2.0 * std::cos(x); });
    const RealField flux = inverse(nonlinear_flux(forward(u)));
    for (std::size_t m = 0; m < flux.size(); ++m)
        REQUIRE(flux[m] ==
                Approx(2.0 * std::sin(2.0 * g->x(m))).margin(1e-12));
}

TEST_CASE("nonlinear flux of zero is zero and always mean free") {
    const auto g = make_grid(64, 4.0);
    REQUIRE(nonlinear_flux(Spectrum::zero(g)).max_abs() == 0.0);
    const RealField u = random_band_field(g, 9, 0, g->k_min(),
                                          g->dealias_cutoff(), 2.0);
    const Spectrum flux = nonlinear_flux(forward(u));
    REQUIRE(std::abs(flux.at_mode(0)) == 0.0);
    REQUIRE(flux.hermitian_defect() <= 1e-13);
}

TEST_CASE("dealiased flux is exactly energy neutral inside the band") {
    // For u supported in the two-thirds band, every aliased image of u^2
    // falls outside the band and is projected away, so the discrete flux
    // inherits the continuum identity <(u^2)_x, u> = 0.
    const auto g = make_grid(128, 2.0 * kPi);
    const RealField u = random_band_field(g, 31, 0, g->k_min(),
                                          g->dealias_cutoff(), 3.0);
    const Spectrum u_hat = forward(u);
    const double drain = inner_product(nonlinear_flux(u_hat), u_hat);
    const double scale = l2_norm(u_hat);
    REQUIRE(std::abs(drain) <= 1e-12 * scale * scale);
}

TEST_CASE("scheme converges at second order on a manufactured solution") {
    const auto g = make_grid(64, kPi);
    const double alpha = 1.2;
    const double e1 = manufactured_error(g, alpha, 0.02, 1.0);
    const double e2 = manufactured_error(g, alpha, 0.01, 1.0);
    const double e3 = manufactured_error(g, alpha, 0.005, 1.0);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    REQUIRE(order12 > 1.9);
    REQUIRE(order23 > 1.9);
    REQUIRE(e3 < 1e-5);
}

TEST_CASE("a tiny-amplitude mode follows the dissipative semigroup") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.3;
    p.dt = 0.001;
    p.t_end = 0.5;
    const double a = 1e-6;
    const Spectrum u0 = forward(RealField::sample(
        g, [a](double x) { return a * std::sin(3.0 * x); }));
    const EvolveResult run = integrate(u0, Spectrum::zero(g), p, 100);
    const double expected =
        a * std::sqrt(kPi) * std::exp(-std::pow(3.0, 1.3) * 0.5);
    const double got = std::sqrt(run.ledger.rows.back().l2_sq);
    REQUIRE(got == Approx(expected).epsilon(1e-4));
}

TEST_CASE("integrate from zero with zero forcing stays zero") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.t_end = 1.0;
    p.dt = 0.01;
    const EvolveResult run =
        integrate(Spectrum::zero(g), Spectrum::zero(g), p, 10);
    for (const auto& row : run.ledger.rows) {
        REQUIRE(row.l2_sq == 0.0);
        REQUIRE(row.diss_acc == 0.0);
    }
    REQUIRE(run.ledger.bound_ok);
}

TEST_CASE("unforced energy decays monotonically and the mean is conserved") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.dt = 0.02;
    p.t_end = 4.0;
    RealField u0 = random_band_field(g, 5, 0, g->k_min(),
                                     g->dealias_cutoff(), 0.5);
    for (std::size_t m = 0; m < u0.size(); ++m) u0[m] += 0.3;
    const EvolveResult run = integrate(forward(u0), Spectrum::zero(g), p, 5);
    for (std::size_t s = 1; s < run.ledger.rows.size(); ++s) {
        REQUIRE(run.ledger.rows[s].l2_sq <=
                run.ledger.rows[s - 1].l2_sq * (1.0 + 1e-12));
        REQUIRE(run.ledger.rows[s].mean ==
                Approx(run.ledger.rows[0].mean).margin(1e-12));
    }
}

TEST_CASE("trajectory recording honors the stride and the final time") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.dt = 0.01;
    p.t_end = 0.1;
    const EvolveResult run =
        integrate(Spectrum::zero(g), Spectrum::zero(g), p, 4);
    REQUIRE(run.trajectory.times.front() == 0.0);
    REQUIRE(run.trajectory.times.back() == Approx(0.1).margin(1e-12));
    REQUIRE(run.trajectory.size() == run.ledger.rows.size());
    REQUIRE(run.trajectory.times[1] == Approx(0.04).margin(1e-12));
}

TEST_CASE("energy ledger inequality holds on a forced gate-passing run") {
    const auto g = make_grid(256, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    p.dt = 0.02;
    p.t_end = 5.0;
    ForcingSpec spec;
    spec.seed = 12;
    spec.rho = 1.0;
    spec.k_max_frac = 0.25;  // band [1, 2] at this resolution
    spec.target_kind = ForcingSpec::TargetKind::gate_margin;
    spec.target = 0.5;
    const RealField f = generate_forcing(spec, g, p);
    const EvolveResult run =
        integrate(Spectrum::zero(g), forward(f), p, 10);
    REQUIRE(run.ledger.bound_applicable);
    REQUIRE(run.ledger.bound_ok);
    REQUIRE(run.ledger.rows.back().l2_sq > 0.0);
}

TEST_CASE("time step above the advective restriction is rejected") {
    const auto g = make_grid(128, kPi);
    Params p;
    p.dt = 0.02;  // admissible is 0.5 dx / 20 ~ 0.0012
    p.t_end = 1.0;
    const Spectrum u0 = forward(RealField::sample(
        g, [](double x) { return 20.0 * std::sin(x); }));
    try {
        integrate(u0, Spectrum::zero(g), p, 1);
        FAIL("expected CflViolation");
    } catch (const CflViolation& e) {
        REQUIRE(e.admissible_dt ==
                Approx(0.5 * g->dx() / 20.0).epsilon(1e-10));
    }
}

TEST_CASE("non-finite states abort with the last healthy time") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.dt = 0.01;
    p.t_end = 1.0;
    Spectrum u0 = Spectrum::zero(g);
    u0[g->slot(1)] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    u0[g->slot(-1)] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    REQUIRE_THROWS_AS(integrate(u0, Spectrum::zero(g), p, 1), BlowUp);
}

TEST_CASE("advected linear problem with zero transport is the semigroup") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    p.dt = 0.01;
    p.t_end = 2.0;
    const RealField u0 = random_band_field(g, 3, 0, g->k_min(),
                                           g->dealias_cutoff(), 1.0);
    const Spectrum u0_hat = forward(u0);
    const LinearEvolveResult run =
        integrate_linear(Spectrum::zero(g), u0_hat, p, 50);
    const Spectrum expected = semigroup(u0_hat, p.alpha, 2.0);
    const Spectrum& got = run.trajectory.states.back();
    for (std::size_t i = 0; i < got.size(); ++i)
        REQUIRE(std::abs(got[i] - expected[i]) <= 1e-13);
}

TEST_CASE("advected linear problem from zero stays zero") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.dt = 0.01;
    p.t_end = 0.5;
    const Spectrum v = forward(RealField::sample(
        g, [](double x) { return 0.1 * std::sin(x); }));
    const LinearEvolveResult run =
        integrate_linear(v, Spectrum::zero(g), p, 10);
    for (const auto& row : run.ledger.rows) REQUIRE(row.l2_sq == 0.0);
}

TEST_CASE("four-thirds budget certifies a gate-sized advected run") {
    const auto g = make_grid(256, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    p.dt = 0.02;
    p.t_end = 6.0;
    ForcingSpec spec;
    spec.seed = 77;
    spec.k_max_frac = 0.25;
    spec.target = 0.5;
    const RealField f = generate_forcing(spec, g, p);
    const Spectrum f_hat = forward(f);
    // transport field of the same small size
    const LinearEvolveResult run = integrate_linear(f_hat, f_hat, p, 10);
    REQUIRE(run.four_thirds.applicable);
    REQUIRE(run.four_thirds.ok);
    REQUIRE(run.four_thirds.max_lhs <= run.four_thirds.rhs);
}

TEST_CASE("vanishing viscosity closes the gap to the inviscid run") {
    const auto g = make_grid(128, 2.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.dt = 0.005;
    p.t_end = 1.5;
    const Spectrum u0 = forward(random_band_field(g, 8, 0, g->k_min(),
                                                  g->dealias_cutoff() / 2.0,
                                                  0.8));
    const Spectrum f = Spectrum::zero(g);
    const auto final_state = [&](double nu) {
        Params q = p;
        q.nu = nu;
        return integrate(u0, f, q, 1000).trajectory.states.back();
    };
    const Spectrum base = final_state(0.0);
    std::vector<double> gaps;
    for (double nu : {1e-2, 1e-3, 1e-4})
        gaps.push_back(l2_norm(final_state(nu) - base));
    REQUIRE(gaps[0] > gaps[1]);
    REQUIRE(gaps[1] > gaps[2]);
}

TEST_CASE("single public step advances time by dt") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.dt = 0.01;
    const EvolutionState s0{0.0, forward(RealField::sample(
                                     g, [](double x) { return std::sin(x); }))};
    const EvolutionState s1 = step(s0, Spectrum::zero(g), p);
    REQUIRE(s1.t == Approx(0.01));
    REQUIRE(l2_norm(s1.u) < l2_norm(s0.u));
}
