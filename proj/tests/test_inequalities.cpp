#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fraburgers/fraburgers.hpp"

using namespace fraburgers;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("ratio exponents trace back to alpha") {
    const auto g = make_grid(64, kPi);
    Params p;
    p.alpha = 1.2;
    const RealField f =
        RealField::sample(g, [](double x) { return std::sin(x); });
    const RatioReport r = inequality_ratios(f, p);
    REQUIRE(r.p == Approx(5.0));
    REQUIRE(r.delta == Approx(0.3));
    REQUIRE(r.sigma == Approx(0.6));
    REQUIRE(r.a == Approx(0.5));
    REQUIRE(r.s == Approx(0.4));
}

TEST_CASE("all three ratios are finite and positive for sin(x)") {
    const auto g = make_grid(128, kPi);
    Params p;
    const RealField f =
        RealField::sample(g, [](double x) { return std::sin(x); });
    const RatioReport r = inequality_ratios(f, p);
    for (const Ratio& ratio : {r.embedding, r.interpolation, r.product}) {
        REQUIRE(ratio.applicable);
        REQUIRE(std::isfinite(ratio.value));
        REQUIRE(ratio.value > 0.0);
    }
}

TEST_CASE("ratios are invariant under scaling of the sample") {
    const auto g = make_grid(128, 8.0);
    Params p;
    p.alpha = 1.3;
    const RealField f = random_band_field(g, 21, 0, g->k_min(),
                                          g->dealias_cutoff(), 1.0);
    const RatioReport r1 = inequality_ratios(f, p);
    const RatioReport rc = inequality_ratios(37.0 * f, p);
    REQUIRE(rc.embedding.value == Approx(r1.embedding.value).epsilon(1e-12));
    REQUIRE(rc.interpolation.value ==
            Approx(r1.interpolation.value).epsilon(1e-12));
    REQUIRE(rc.product.value == Approx(r1.product.value).epsilon(1e-12));
}

TEST_CASE("mean-carrying samples disable the homogeneous-norm ratios") {
    const auto g = make_grid(64, kPi);
    Params p;
    RealField f = RealField::sample(g, [](double x) { return std::sin(x); });
    for (std::size_t m = 0; m < f.size(); ++m) f[m] += 2.0;
    const RatioReport r = inequality_ratios(f, p);
    REQUIRE_FALSE(r.embedding.applicable);
    REQUIRE_FALSE(r.interpolation.applicable);
    REQUIRE_FALSE(r.product.applicable);
}

TEST_CASE("degenerate second factor disables only the product ratio") {
    const auto g = make_grid(64, kPi);
    Params p;
    const RealField f =
        RealField::sample(g, [](double x) { return std::sin(2.0 * x); });
    const RealField z = RealField::zero(g);
    const RatioReport r = inequality_ratios(f, z, p);
    REQUIRE(r.embedding.applicable);
    REQUIRE(r.interpolation.applicable);
    REQUIRE_FALSE(r.product.applicable);
}

TEST_CASE("a fresh sample stays under twice the family envelope") {
    const auto g = make_grid(128, 16.0 * kPi);
    Params p;
    double env_embed = 0.0, env_interp = 0.0, env_prod = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        const RealField f = random_band_field(g, 42, i, g->k_min(),
                                              g->dealias_cutoff(), 1.0);
        const RatioReport r = inequality_ratios(f, p);
        env_embed = std::max(env_embed, r.embedding.value);
        env_interp = std::max(env_interp, r.interpolation.value);
        env_prod = std::max(env_prod, r.product.value);
    }
    const RealField fresh = random_band_field(g, 43, 1000, g->k_min(),
                                              g->dealias_cutoff(), 1.0);
    const RatioReport r = inequality_ratios(fresh, p);
    REQUIRE(r.embedding.value <= 2.0 * env_embed);
    REQUIRE(r.interpolation.value <= 2.0 * env_interp);
    REQUIRE(r.product.value <= 2.0 * env_prod);
}
