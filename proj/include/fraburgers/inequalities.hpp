#pragma once

#include <cmath>
#include <limits>

#include "fraburgers/field.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"

namespace fraburgers {

// One measured inequality ratio. Not applicable when the denominator
// degenerates or the sample violates the mean-zero requirement of the
// homogeneous seminorms involved.
struct Ratio {
    double value = 0.0;
    bool applicable = false;
};

// Empirical LHS/RHS ratios for the three functional inequalities the solver
// leans on, instantiated at the exponents the alpha-dependent estimates use:
//   embedding:      ||f||_{L^p} vs ||Lambda^delta f||_{L^2},
//                   p = 1/(alpha-1), delta = 1/2 - 1/p
//   interpolation:  ||f||_{L^p} vs ||f||_{L^2}^a ||Lambda^sigma f||^{1-a},
//                   sigma = alpha/2, 1 - a = delta/sigma
//   product rule:   ||Lambda^s(fg)||_{L^2} vs
//                   ||Lambda^s f||_{L^2} ||g||_inf
//                   + ||f||_{L^{p2}} ||Lambda^s g||_{L^{q2}},
//                   s = 1 - alpha/2, p2 = 1/(alpha-1), q2 = 2/(3-2alpha)
struct RatioReport {
    Ratio embedding;
    Ratio interpolation;
    Ratio product;
    double p = 0.0;
    double delta = 0.0;
    double sigma = 0.0;
    double a = 0.0;
    double s = 0.0;
};

namespace detail {

// lp norm of the multiplier image in physical space.
inline double lp_of_multiplier(const Spectrum& s, double order, double p) {
    return lp_norm(inverse(frac_laplacian(s, order)), p);
}

}  // namespace detail

// Measures the ratios on sample f against second factor g (the product rule
// pairs them; the other two only use f). Homogeneous seminorms on the torus
// control only mean-zero fields, so embedding and interpolation are marked
// not applicable when f carries a mean, and the product ratio when g does.
inline RatioReport inequality_ratios(const RealField& f, const RealField& g,
                                     const Params& p) {
    p.validate();
    require_same_grid(f.grid(), g.grid());
    RatioReport r;
    r.p = 1.0 / (p.alpha - 1.0);
    r.delta = 0.5 - 1.0 / r.p;
    r.sigma = p.alpha / 2.0;
    r.a = 1.0 - r.delta / r.sigma;
    r.s = 1.0 - p.alpha / 2.0;

    const Spectrum fs = forward(f);
    const Spectrum gs = forward(g);
    const bool f_mean_zero = mean_zero(fs);
    const bool g_mean_zero = mean_zero(gs);

    if (f_mean_zero) {
        const double lp = lp_norm(f, r.p);
        const double denom_embed = sobolev_norm(fs, r.delta, true);
        if (denom_embed > 0.0) r.embedding = {lp / denom_embed, true};
        const double l2 = l2_norm(fs);
        const double hs = sobolev_norm(fs, r.sigma, true);
        const double denom_interp =
            std::pow(l2, r.a) * std::pow(hs, 1.0 - r.a);
        if (denom_interp > 0.0) r.interpolation = {lp / denom_interp, true};
    }

    if (f_mean_zero && g_mean_zero) {
        const double q2 = 2.0 / (3.0 - 2.0 * p.alpha);
        // Product on a doubled grid so the numerator sees the exact product
        // of the two interpolants, free of aliasing.
        const Spectrum ff = zero_pad(fs, 2);
        const Spectrum gf = zero_pad(gs, 2);
        const RealField fp = inverse(ff);
        const RealField gp = inverse(gf);
        RealField prod = fp;
        for (std::size_t m = 0; m < prod.size(); ++m) prod[m] *= gp[m];
        const double num = sobolev_norm(forward(prod), r.s, true);
        const double inf = std::numeric_limits<double>::infinity();
        const double denom =
            sobolev_norm(fs, r.s, true) * lp_norm(g, inf) +
            lp_norm(f, r.p) * detail::lp_of_multiplier(gs, r.s, q2);
        if (denom > 0.0) r.product = {num / denom, true};
    }
    return r;
}

inline RatioReport inequality_ratios(const RealField& f, const Params& p) {
    return inequality_ratios(f, f, p);
}

}  // namespace fraburgers
