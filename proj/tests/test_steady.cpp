#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "fraburgers/fraburgers.hpp"

using namespace fraburgers;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense direct solve of the discrete steady operator
//   U -> (1/2) d/dx dealias(V U) + Lambda^alpha U
// assembled column by column over grid unit vectors. The operator output is
// mean free, which makes the rows dependent; the first row is replaced by
// the zero-mean constraint the iterative solver pins as well.
RealField dense_steady_solve(const RealField& v, const RealField& f,
                             double alpha) {
    const GridPtr grid = v.grid();
    const auto n = static_cast<Eigen::Index>(grid->n_modes());
    const Spectrum v_hat = forward(v);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        RealField e = RealField::zero(grid);
        e[static_cast<std::size_t>(col)] = 1.0;
        const Spectrum e_hat = forward(e);
        Spectrum img = advection_flux(v_hat, v, e_hat);  // -(v e)_x
        const Spectrum lap = frac_laplacian(e_hat, alpha);
        for (std::size_t i = 0; i < img.size(); ++i)
            img[i] = -0.5 * img[i] + lap[i];
        const RealField img_phys = inverse(img);
        for (Eigen::Index row = 0; row < n; ++row)
            a(row, col) = img_phys[static_cast<std::size_t>(row)];
    }
    Eigen::VectorXd rhs(n);
    for (Eigen::Index row = 0; row < n; ++row)
        rhs(row) = f[static_cast<std::size_t>(row)];
    a.row(0).setConstant(1.0);  // zero-mean constraint
    rhs(0) = 0.0;
    const Eigen::VectorXd u = a.partialPivLu().solve(rhs);
    std::vector<double> vals(grid->n_modes());
    for (Eigen::Index row = 0; row < n; ++row)
        vals[static_cast<std::size_t>(row)] = u(row);
    return RealField(grid, std::move(vals));
}

RealField gate_forcing(const GridPtr& g, const Params& p, std::uint64_t seed,
                       double margin = 0.5) {
    ForcingSpec spec;
    spec.seed = seed;
    spec.rho = std::max(1.0, g->k_min());
    spec.k_max_frac = std::min(2.0 / 3.0, 4.0 / g->k_max());
    spec.target_kind = ForcingSpec::TargetKind::gate_margin;
    spec.target = margin;
    return generate_forcing(spec, g, p);
}

}  // namespace

TEST_CASE("smallness constant reproduces its closed form") {
    const double inner = 0.12 * (12.0 - 0.24);
    const double expected = 4.0 * std::sqrt(inner) / (3.0 - 2.4 - 0.12);
    REQUIRE(smallness_constant(1.2, 0.1) == Approx(expected).epsilon(1e-14));
    REQUIRE(expected == Approx(9.8996).epsilon(1e-4));
}

TEST_CASE("smallness constant rejects the degenerate parameter range") {
    REQUIRE_THROWS_AS(smallness_constant(3.0 / 2.1, 0.1), ContractViolation);
    REQUIRE_THROWS_AS(smallness_constant(1.45, 0.2), ContractViolation);
    REQUIRE_THROWS_AS(smallness_constant(0.9, 0.1), ContractViolation);
    REQUIRE_THROWS_AS(smallness_constant(1.2, 0.0), ContractViolation);
}

TEST_CASE("gate passes zero forcing and scales to the requested margin") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    const SmallnessReport zero = smallness_gate(RealField::zero(g), p);
    REQUIRE(zero.passed);
    REQUIRE(zero.gate_value == 0.0);

    for (double margin : {0.25, 0.5, 0.99}) {
        const RealField f = gate_forcing(g, p, 9, margin);
        const SmallnessReport r = smallness_gate(f, p);
        REQUIRE(r.passed);
        REQUIRE(r.gate_value == Approx(margin / 3.0).margin(1e-10));
    }
    const RealField too_big = gate_forcing(g, p, 9, 1.5);
    REQUIRE_FALSE(smallness_gate(too_big, p).passed);
}

TEST_CASE("zero transport reduces the linear solve to the inverse multiplier") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    const RealField f = random_band_field(g, 4, 0, 1.0, 8.0, 1.0);
    const Spectrum f_hat = forward(f);
    const Spectrum u = linear_steady_solve(Spectrum::zero(g), f_hat, p, 1e-12);
    const Spectrum expected = inv_frac_laplacian(f_hat, p.alpha);
    for (std::size_t i = 0; i < u.size(); ++i)
        REQUIRE(std::abs(u[i] - expected[i]) <= 1e-12);
}

TEST_CASE("linear solve with zero forcing returns zero") {
    const auto g = make_grid(64, kPi);
    Params p;
    const Spectrum v = forward(RealField::sample(
        g, [](double x) { return 0.2 * std::sin(x); }));
    const Spectrum u = linear_steady_solve(v, Spectrum::zero(g), p, 1e-12);
    REQUIRE(u.max_abs() == 0.0);
}

TEST_CASE("linear solve rejects forcing that carries a mean") {
    const auto g = make_grid(64, kPi);
    Params p;
    RealField f = RealField::sample(g, [](double) { return 1.0; });
    REQUIRE_THROWS_AS(
        linear_steady_solve(Spectrum::zero(g), forward(f), p, 1e-10),
        MeanNotZero);
}

TEST_CASE("linear solve agrees with a dense direct solve") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    const RealField v = RealField::sample(g, [](double x) {
        return 0.05 * std::sin(x) + 0.03 * std::cos(2.0 * x);
    });
    const RealField f = RealField::sample(g, [](double x) {
        return 0.2 * std::sin(x) + 0.1 * std::sin(3.0 * x);
    });
    const Spectrum u =
        linear_steady_solve(forward(v), forward(f), p, 1e-12);
    const RealField u_phys = inverse(u);
    const RealField dense = dense_steady_solve(v, f, p.alpha);
    const double scale = dense.max_abs();
    for (std::size_t m = 0; m < u_phys.size(); ++m)
        REQUIRE(u_phys[m] == Approx(dense[m]).margin(1e-9 * scale));
}

TEST_CASE("linear solve diverges loudly when the transport is too large") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    const Spectrum v = forward(RealField::sample(
        g, [](double x) { return 30.0 * std::sin(x); }));
    const Spectrum f = forward(RealField::sample(
        g, [](double x) { return std::sin(2.0 * x); }));
    REQUIRE_THROWS_AS(linear_steady_solve(v, f, p, 1e-10), SolverDivergence);
}

TEST_CASE("fixed point on zero forcing converges immediately to zero") {
    const auto g = make_grid(64, kPi);
    Params p;
    const PicardResult r = picard_solve(RealField::zero(g), p, 1e-10, 40);
    REQUIRE(r.steady_state.max_abs() == 0.0);
    REQUIRE(r.trace.rows.size() <= 1);
    REQUIRE(r.gate.passed);
}

TEST_CASE("fixed point contracts and satisfies the steady equation") {
    const auto g = make_grid(256, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    const RealField f = gate_forcing(g, p, 31);
    const PicardResult r = picard_solve(f, p, 1e-9, 40);

    REQUIRE(r.gate.passed);
    REQUIRE(r.trace.rows.size() <= 40);
    REQUIRE(r.trace.rows.back().residual <= 1e-8);
    for (const auto& row : r.trace.rows) {
        if (row.i >= 2) REQUIRE(row.ratio <= 0.6);
        REQUIRE(row.h_half_norm <= r.iterate_bound * (1.0 + 1e-6));
    }
    REQUIRE(r.iterate_bound_ok);

    // self-consistency: the endpoint is a fixed point of the linear solve
    const Spectrum u_hat = forward(r.steady_state);
    const Spectrum again = linear_steady_solve(u_hat, forward(f), p, 1e-11);
    REQUIRE(sobolev_norm(again - u_hat, p.alpha / 2.0, true) <= 1e-8);
}

TEST_CASE("fixed point refuses forcing that misses the gate") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    const RealField f = gate_forcing(g, p, 5, 2.0);  // gate value 2/3
    REQUIRE_THROWS_AS(picard_solve(f, p, 1e-9, 40), GateNotSatisfied);
}

TEST_CASE("time-integral route matches the inverse multiplier for V = 0") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    p.dt = 0.005;
    p.t_end = 40.0;
    const RealField f = random_band_field(g, 17, 0, 1.0, 4.0, 0.01);
    const Spectrum f_hat = forward(f);
    const Spectrum u =
        steady_via_time_integral(Spectrum::zero(g), f_hat, p, 1e-10);
    const Spectrum expected = inv_frac_laplacian(f_hat, p.alpha);
    const double scale = l2_norm(expected);
    REQUIRE(l2_norm(u - expected) <= 1e-4 * scale);
}

TEST_CASE("time-integral route converges to zero for zero forcing") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.dt = 0.01;
    p.t_end = 5.0;
    const Spectrum u = steady_via_time_integral(Spectrum::zero(g),
                                                Spectrum::zero(g), p, 1e-12);
    REQUIRE(u.max_abs() == 0.0);
}

TEST_CASE("time-integral route reports an unconverged tail") {
    const auto g = make_grid(64, 16.0 * kPi);  // k_min = 1/16, slow decay
    Params p;
    p.alpha = 1.2;
    p.dt = 0.01;
    p.t_end = 2.0;  // far too short for the tail criterion
    const RealField f = random_band_field(g, 3, 0, g->k_min(), 0.5, 0.1);
    REQUIRE_THROWS_AS(
        steady_via_time_integral(Spectrum::zero(g), forward(f), p, 1e-12),
        TailNotConverged);
}

TEST_CASE("both steady routes land on the same state") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    p.dt = 0.01;
    p.t_end = 400.0;
    const RealField f = gate_forcing(g, p, 23);
    const PicardResult fixed_point = picard_solve(f, p, 1e-10, 40);
    const Spectrum u_hat = forward(fixed_point.steady_state);
    const Spectrum via_time =
        steady_via_time_integral(u_hat, forward(f), p, 1e-9);
    const double rel = l2_norm(via_time - u_hat) / l2_norm(u_hat);
    REQUIRE(rel <= 1e-4);
}

TEST_CASE("uniqueness probe: empty probe and multi-start agreement") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    p.alpha = 1.2;
    p.eps = 0.1;
    const RealField f = gate_forcing(g, p, 8);
    const PicardResult r = picard_solve(f, p, 1e-10, 40);

    const UniquenessReport none =
        uniqueness_probe(r.steady_state, f, p, 0, 1e-10, 40);
    REQUIRE(none.restarts == 0);
    REQUIRE(none.max_pairwise_spread == 0.0);

    const UniquenessReport probe =
        uniqueness_probe(r.steady_state, f, p, 4, 1e-10, 60, 99);
    REQUIRE(probe.converged == 4);
    REQUIRE(probe.failed == 0);
    REQUIRE(probe.max_pairwise_spread <= 1e-8);
}
