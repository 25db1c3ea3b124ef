#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include "fraburgers/errors.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/grid.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/rng.hpp"
#include "fraburgers/spectral.hpp"
#include "fraburgers/steady_constants.hpp"

namespace fraburgers {

// Recipe for a reproducible mean-zero forcing field supported on the band
// rho <= |k| <= k_max_frac * k_max. Amplitude is fixed either by an explicit
// X-norm target or by an auto-gate margin: margin m scales f so that the
// smallness gate value comes out exactly m/3.
struct ForcingSpec {
    enum class Profile { random_phase, two_mode };
    enum class TargetKind { x_norm, gate_margin };

    std::uint64_t seed = 0;
    double rho = 1.0;
    double k_max_frac = 0.125;
    Profile profile = Profile::random_phase;
    TargetKind target_kind = TargetKind::gate_margin;
    double target = 0.5;  // X-norm value or gate margin, per target_kind
};

namespace detail {

// Deterministic Hermitian band spectrum with unit-scale amplitudes; the
// caller rescales. stream tags independent draws from the same seed.
inline Spectrum band_spectrum(const GridPtr& grid, std::uint64_t seed,
                              std::uint64_t stream, double k_lo, double k_hi,
                              ForcingSpec::Profile profile) {
    const Grid& g = *grid;
    Spectrum s = Spectrum::zero(grid);
    const long top = static_cast<long>(g.n_modes() / 2) - 1;
    long placed = 0;
    for (long j = 1; j <= top; ++j) {
        const double k = g.wavenumber(g.slot(j));
        if (k < k_lo || k > k_hi) continue;
        double amp = 0.0;
        double phase = 0.0;
        if (profile == ForcingSpec::Profile::random_phase) {
            amp = 0.5 + uniform_unit(seed, stream, 2 * j);
            phase = 2.0 * std::numbers::pi *
                    uniform_unit(seed, stream, 2 * j + 1);
        } else {
            // Two lowest band modes, fixed amplitudes and phases.
            if (placed >= 2) break;
            amp = placed == 0 ? 1.0 : 0.7;
            phase = placed == 0 ? 0.0 : std::numbers::pi / 3.0;
        }
        const std::complex<double> c =
            0.5 * amp * std::exp(std::complex<double>(0.0, phase));
        s[g.slot(j)] = c;
        s[g.slot(-j)] = std::conj(c);
        ++placed;
    }
    if (placed == 0)
        throw ContractViolation("forcing band [" + std::to_string(k_lo) +
                                ", " + std::to_string(k_hi) +
                                "] holds no grid modes");
    return s;
}

}  // namespace detail

// Band-limited mean-zero field with seeded phases, scaled to the requested
// L2 norm. Shared by forcing generation, perturbations, and test families.
inline RealField random_band_field(const GridPtr& grid, std::uint64_t seed,
                                   std::uint64_t stream, double k_lo,
                                   double k_hi, double l2_target) {
    Spectrum s = detail::band_spectrum(grid, seed, stream, k_lo, k_hi,
                                       ForcingSpec::Profile::random_phase);
    const double l2 = l2_norm(s);
    return inverse(l2 > 0.0 ? (l2_target / l2) * s : s);
}

// Materializes the forcing recipe on a grid. The band must be resolvable:
// rho at or above the smallest nonzero wavenumber, and nonempty.
inline RealField generate_forcing(const ForcingSpec& spec, const GridPtr& grid,
                                  const Params& p) {
    p.validate();
    if (spec.rho < grid->k_min())
        throw ContractViolation("rho = " + std::to_string(spec.rho) +
                                " below the grid's smallest nonzero "
                                "wavenumber " + std::to_string(grid->k_min()));
    if (!(spec.k_max_frac > 0.0 && spec.k_max_frac <= 2.0 / 3.0))
        throw ContractViolation("k_max_frac must lie in (0, 2/3]");
    const double k_hi = spec.k_max_frac * grid->k_max();
    Spectrum s =
        detail::band_spectrum(grid, spec.seed, 0, spec.rho, k_hi, spec.profile);

    double target_x = spec.target;
    if (spec.target_kind == ForcingSpec::TargetKind::gate_margin) {
        // gate value C/eps * ||f||_X == margin/3.
        const double c = smallness_constant(p.alpha, p.eps);
        target_x = spec.target * p.eps / (3.0 * c);
    }
    if (!(target_x >= 0.0))
        throw ContractViolation("forcing target must be nonnegative");
    const double current = x_norm(inverse(s), p);
    if (current > 0.0) s = (target_x / current) * s;
    return inverse(s);
}

}  // namespace fraburgers
