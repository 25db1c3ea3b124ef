#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fraburgers/analysis.hpp"
#include "fraburgers/evolution.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/forcing.hpp"
#include "fraburgers/grid.hpp"
#include "fraburgers/inequalities.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"

namespace fraburgers {

struct CheckResult {
    std::string name;
    bool ok = false;
    double value = 0.0;      // measured quantity
    double threshold = 0.0;  // what it was compared against
};

struct RatioSample {
    std::size_t index = 0;
    double embedding = 0.0;
    double interpolation = 0.0;
    double product = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<RatioSample> ratio_samples;
    double embedding_max = 0.0;
    double interpolation_max = 0.0;
    double product_max = 0.0;
    bool all_ok = true;

    void add(const std::string& name, bool ok, double value,
             double threshold) {
        checks.push_back({name, ok, value, threshold});
        if (!ok) all_ok = false;
    }
};

// Cross-validates the transform and norm layer against quadrature and closed
// forms, exercises the structural invariants of the operators, and sweeps a
// seeded family of band-limited fields through the inequality ratios.
inline VerifyReport run_verification(const GridPtr& grid, const Params& p,
                                     std::uint64_t seed,
                                     std::size_t family_size = 100) {
    p.validate();
    VerifyReport rep;
    const Grid& g = *grid;

    // Round trip and Hermitian symmetry on a seeded field.
    {
        const RealField f = random_band_field(grid, seed, 10, g.k_min(),
                                              g.dealias_cutoff(), 1.0);
        const Spectrum s = forward(f);
        const RealField back = inverse(s);
        double err = 0.0;
        for (std::size_t m = 0; m < f.size(); ++m)
            err = std::max(err, std::abs(f[m] - back[m]));
        const double scale = std::max(1.0, f.max_abs());
        rep.add("transform_round_trip", err <= 1e-12 * scale, err,
                1e-12 * scale);
        rep.add("forward_hermitian", s.hermitian_defect() <= 1e-12,
                s.hermitian_defect(), 1e-12);
    }

    // Parseval: grid quadrature of f^2 against the coefficient sum.
    {
        const RealField f = random_band_field(grid, seed, 11, g.k_min(),
                                              g.dealias_cutoff(), 2.0);
        double quad = 0.0;
        for (std::size_t m = 0; m < f.size(); ++m) quad += f[m] * f[m];
        quad *= g.dx();
        const double spec = l2_norm(forward(f));
        const double err = std::abs(quad - spec * spec) /
                           std::max(1e-300, quad);
        rep.add("parseval_quadrature", err <= 1e-10, err, 1e-10);
    }

    // Self-adjointness split: <Lambda^alpha u, v> as quadrature equals
    // <Lambda^{alpha/2} u, Lambda^{alpha/2} v> in coefficients.
    {
        const RealField u = random_band_field(grid, seed, 12, g.k_min(),
                                              g.dealias_cutoff(), 1.0);
        const RealField v = random_band_field(grid, seed, 13, g.k_min(),
                                              g.dealias_cutoff(), 1.0);
        const Spectrum us = forward(u);
        const Spectrum vs = forward(v);
        const double lhs =
            inner_product(inverse(frac_laplacian(us, p.alpha)), v);
        const double rhs = inner_product(frac_laplacian(us, p.alpha / 2.0),
                                         frac_laplacian(vs, p.alpha / 2.0));
        const double scale = std::max(1.0, std::abs(rhs));
        const double err = std::abs(lhs - rhs) / scale;
        rep.add("fractional_self_adjoint", err <= 1e-10, err, 1e-10);
    }

    // Multiplier homogeneity: norms scale linearly, multipliers commute with
    // scalar multiples.
    {
        const RealField f = random_band_field(grid, seed, 14, g.k_min(),
                                              g.dealias_cutoff(), 1.0);
        const Spectrum s = forward(f);
        const double c = 3.7;
        const double a = sobolev_norm(c * s, p.alpha / 2.0, false);
        const double b = c * sobolev_norm(s, p.alpha / 2.0, false);
        const double err = std::abs(a - b) / std::max(1e-300, b);
        rep.add("norm_homogeneity", err <= 1e-12, err, 1e-12);
    }

    // Inverse of the fractional multiplier round-trips mean-free fields.
    {
        const RealField f = random_band_field(grid, seed, 15, g.k_min(),
                                              g.dealias_cutoff(), 1.0);
        const Spectrum s = forward(f);
        const Spectrum rt =
            frac_laplacian(inv_frac_laplacian(s, p.alpha), p.alpha);
        double err = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i)
            err = std::max(err, std::abs(rt[i] - s[i]));
        const double scale = std::max(1e-300, s.max_abs());
        rep.add("multiplier_inverse_round_trip", err <= 1e-12 * scale,
                err / scale, 1e-12);
    }

    // Dealiasing is an idempotent projection.
    {
        const RealField f = random_band_field(grid, seed, 16, g.k_min(),
                                              0.95 * g.k_max(), 1.0);
        const Spectrum once = dealias(forward(f));
        const Spectrum twice = dealias(once);
        double err = 0.0;
        for (std::size_t i = 0; i < once.size(); ++i)
            err = std::max(err, std::abs(once[i] - twice[i]));
        rep.add("dealias_idempotent", err == 0.0, err, 0.0);
    }

    // Short forced run: mean obeys d/dt mean = mean of forcing; transforms
    // stay Hermitian along the way.
    {
        Params q = p;
        q.t_end = 1.0;
        q.dt = std::min(q.dt, 0.01);
        const RealField f0 = random_band_field(grid, seed, 17, g.k_min(),
                                               g.dealias_cutoff(), 0.05);
        RealField u0_field = random_band_field(grid, seed, 18, g.k_min(),
                                               g.dealias_cutoff(), 0.5);
        for (std::size_t m = 0; m < u0_field.size(); ++m)
            u0_field[m] += 0.25;  // deliberate nonzero mean
        const Spectrum u0 = forward(u0_field);
        const EvolveResult run = integrate(u0, forward(f0), q, 5);
        const double mean0 = run.ledger.rows.front().mean;
        double mean_err = 0.0;
        double herm = 0.0;
        for (std::size_t s = 0; s < run.trajectory.size(); ++s) {
            const double t = run.trajectory.times[s];
            mean_err = std::max(
                mean_err, std::abs(run.ledger.rows[s].mean - mean0) /
                              (1.0 + t));
            herm = std::max(herm,
                            run.trajectory.states[s].hermitian_defect());
        }
        rep.add("mean_conservation", mean_err <= 1e-9, mean_err, 1e-9);
        rep.add("evolution_hermitian", herm <= 1e-12, herm, 1e-12);
    }

    // Truncation algebra: 1-Lipschitz in the level, Lp-contractive, and
    // idempotent at level zero after truncation.
    {
        const RealField u = random_band_field(grid, seed, 19, g.k_min(),
                                              g.dealias_cutoff(), 1.5);
        const double lam = 0.3;
        const RealField a = truncate(u, lam, TruncationSide::plus);
        const RealField b = truncate(u, lam + 0.1, TruncationSide::plus);
        double lip = 0.0;
        for (std::size_t m = 0; m < u.size(); ++m)
            lip = std::max(lip, std::abs(a[m] - b[m]));
        bool contractive = true;
        for (double pw : {2.0, 4.0}) {
            if (lp_norm(a, pw) > lp_norm(u, pw) * (1.0 + 1e-12))
                contractive = false;
        }
        const RealField again = truncate(a, 0.0, TruncationSide::plus);
        double idem = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m)
            idem = std::max(idem, std::abs(again[m] - a[m]));
        rep.add("truncation_level_lipschitz", lip <= 0.1 + 1e-15, lip,
                0.1 + 1e-15);
        rep.add("truncation_lp_contractive", contractive, contractive ? 0 : 1,
                0);
        rep.add("truncation_idempotent", idem == 0.0, idem, 0.0);
    }

    // Frequency split partitions the energy exactly.
    {
        Params q = p;
        q.t_end = 0.5;
        q.dt = std::min(q.dt, 0.01);
        const RealField u0 = random_band_field(grid, seed, 20, g.k_min(),
                                               g.dealias_cutoff(), 0.5);
        const EvolveResult run =
            integrate(forward(u0), Spectrum::zero(grid), q, 10);
        const SplitDiagnostic split = split_diagnostic(run.trajectory, q);
        double err = 0.0;
        for (std::size_t s = 0; s < split.rows.size(); ++s) {
            const double total =
                split.rows[s].low_energy + split.rows[s].high_energy;
            err = std::max(err,
                           std::abs(total - run.ledger.rows[s].l2_sq) /
                               std::max(1e-300, run.ledger.rows[s].l2_sq));
        }
        rep.add("split_partition_identity", err <= 1e-12, err, 1e-12);
    }

    // Seeded inequality family: ratios must be finite and positive, and the
    // embedding ratio scale-invariant.
    {
        double worst_scale_dev = 0.0;
        bool finite_ok = true;
        for (std::size_t i = 0; i < family_size; ++i) {
            const RealField f = random_band_field(
                grid, seed, 100 + i, g.k_min(), g.dealias_cutoff(),
                0.1 + 2.0 * uniform_unit(seed, 50, i));
            const RealField h = random_band_field(
                grid, seed, 100 + i + family_size, g.k_min(),
                g.dealias_cutoff(), 1.0);
            const RatioReport r = inequality_ratios(f, h, p);
            if (!r.embedding.applicable || !r.interpolation.applicable ||
                !r.product.applicable)
                finite_ok = false;
            for (double v :
                 {r.embedding.value, r.interpolation.value, r.product.value})
                if (!std::isfinite(v) || !(v > 0.0)) finite_ok = false;
            rep.ratio_samples.push_back({i, r.embedding.value,
                                         r.interpolation.value,
                                         r.product.value});
            rep.embedding_max = std::max(rep.embedding_max, r.embedding.value);
            rep.interpolation_max =
                std::max(rep.interpolation_max, r.interpolation.value);
            rep.product_max = std::max(rep.product_max, r.product.value);
            if (i % 25 == 0) {
                const RatioReport rs = inequality_ratios(5.0 * f, p);
                const RatioReport r1 = inequality_ratios(f, p);
                worst_scale_dev = std::max(
                    worst_scale_dev,
                    std::abs(rs.embedding.value - r1.embedding.value) /
                        std::max(1e-300, r1.embedding.value));
            }
        }
        rep.add("ratio_family_finite", finite_ok, finite_ok ? 0 : 1, 0);
        rep.add("embedding_scale_invariant", worst_scale_dev <= 1e-12,
                worst_scale_dev, 1e-12);
    }

    return rep;
}

}  // namespace fraburgers
