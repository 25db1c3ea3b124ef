#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/fft.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/grid.hpp"
#include "fraburgers/params.hpp"

namespace fraburgers {

namespace detail {

// Grid points start at x = -L, so slot j of the plain DFT picks up a phase
// (-1)^j relative to the e^{ikx} amplitude. n is even, hence (-1)^j depends
// only on the storage slot parity.
inline double start_phase(std::size_t slot) {
    return (slot % 2 == 0) ? 1.0 : -1.0;
}

inline constexpr double kMeanTolerance = 1e-12;

}  // namespace detail

// --------------------------------------------------------------------------
// Transforms
// --------------------------------------------------------------------------

// Coefficients of e^{ikx}, k = pi*j/L, from point values.
inline Spectrum forward(const RealField& f) {
    const std::size_t n = f.size();
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t m = 0; m < n; ++m) in[m] = f[m];
    detail::dft(in.data(), out.data(), n, FFTW_FORWARD);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] *= detail::start_phase(i) * inv_n;
    return Spectrum(f.grid(), std::move(out));
}

// Point values from coefficients; imaginary residue is discarded (inputs are
// Hermitian up to roundoff by construction).
inline RealField inverse(const Spectrum& s) {
    const std::size_t n = s.size();
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t i = 0; i < n; ++i)
        in[i] = s[i] * detail::start_phase(i);
    detail::dft(in.data(), out.data(), n, FFTW_BACKWARD);
    std::vector<double> v(n);
    for (std::size_t m = 0; m < n; ++m) v[m] = out[m].real();
    return RealField(s.grid(), std::move(v));
}

// --------------------------------------------------------------------------
// Multipliers
// --------------------------------------------------------------------------

// |k|^order with order >= 0; the zero mode maps to 0 for order > 0 and is
// kept for order == 0.
inline Spectrum frac_laplacian(const Spectrum& s, double order) {
    if (order < 0.0)
        throw ContractViolation(
            "frac_laplacian needs order >= 0; use inv_frac_laplacian");
    if (order == 0.0) return s;
    Spectrum out = s;
    const Grid& g = *s.grid();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double ak = std::abs(g.wavenumber(i));
        out[i] *= ak > 0.0 ? std::pow(ak, order) : 0.0;
    }
    return out;
}

inline bool mean_zero(const Spectrum& s) {
    const double scale = s.max_abs();
    return std::abs(s[0]) <= detail::kMeanTolerance * scale;
}

inline void require_mean_zero(const Spectrum& s) {
    if (!mean_zero(s)) throw MeanNotZero(std::abs(s[0]));
}

// |k|^{-order} with order > 0 on nonzero modes; requires a numerically zero
// mean and pins the output zero mode to exactly 0.
inline Spectrum inv_frac_laplacian(const Spectrum& s, double order) {
    if (!(order > 0.0))
        throw ContractViolation("inv_frac_laplacian needs order > 0");
    require_mean_zero(s);
    Spectrum out = s;
    const Grid& g = *s.grid();
    out[0] = {0.0, 0.0};
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i] /= std::pow(std::abs(g.wavenumber(i)), order);
    return out;
}

// ik multiplier; the Nyquist mode is zeroed (its derivative has no real
// representative on the grid).
inline Spectrum derivative(const Spectrum& s) {
    Spectrum out = s;
    const Grid& g = *s.grid();
    const long nyquist = -static_cast<long>(g.n_modes() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (g.signed_mode(i) == nyquist) {
            out[i] = {0.0, 0.0};
            continue;
        }
        out[i] *= std::complex<double>(0.0, g.wavenumber(i));
    }
    return out;
}

// Two-thirds rule: zero all modes with |k| above (2/3) k_max.
inline Spectrum dealias(const Spectrum& s) {
    Spectrum out = s;
    const Grid& g = *s.grid();
    const double cutoff = g.dealias_cutoff();
    for (std::size_t i = 0; i < out.size(); ++i)
        if (std::abs(g.wavenumber(i)) > cutoff) out[i] = {0.0, 0.0};
    return out;
}

// exp(-(|k|^alpha + nu k^2) t); t >= 0.
inline Spectrum semigroup(const Spectrum& s, double alpha, double t,
                          double nu = 0.0) {
    if (!(t >= 0.0))
        throw ContractViolation("semigroup needs t >= 0");
    Spectrum out = s;
    const Grid& g = *s.grid();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double ak = std::abs(g.wavenumber(i));
        const double symbol =
            (ak > 0.0 ? std::pow(ak, alpha) : 0.0) + nu * ak * ak;
        out[i] *= std::exp(-symbol * t);
    }
    return out;
}

// --------------------------------------------------------------------------
// Norms
// --------------------------------------------------------------------------

// Sobolev norm of the trigonometric interpolant. The measure of the torus is
// its full length 2L:
//   inhomogeneous: sqrt(2L * sum (1+k^2)^order |c(k)|^2)
//   homogeneous:   sqrt(2L * sum |k|^{2 order} |c(k)|^2), zero mode skipped;
//                  order < 0 additionally requires a numerically zero mean.
inline double sobolev_norm(const Spectrum& s, double order, bool homogeneous) {
    const Grid& g = *s.grid();
    const double measure = 2.0 * g.half_period();
    double acc = 0.0;
    if (homogeneous) {
        if (order < 0.0) require_mean_zero(s);
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double ak = std::abs(g.wavenumber(i));
            acc += std::pow(ak, 2.0 * order) * std::norm(s[i]);
        }
    } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double k = g.wavenumber(i);
            acc += std::pow(1.0 + k * k, order) * std::norm(s[i]);
        }
    }
    return std::sqrt(measure * acc);
}

inline double l2_norm(const Spectrum& s) { return sobolev_norm(s, 0.0, false); }

// Forcing-size norm: homogeneous order -alpha/2 plus inhomogeneous alpha/2.
// Requires a numerically zero mean.
inline double x_norm(const RealField& f, const Params& p) {
    const Spectrum s = forward(f);
    require_mean_zero(s);
    return sobolev_norm(s, -p.alpha / 2.0, true) +
           sobolev_norm(s, p.alpha / 2.0, false);
}

// Grid Lp norm: (dx * sum |f|^p)^{1/p} for finite p >= 1, max |f| for
// p = infinity.
inline double lp_norm(const RealField& f, double p) {
    if (std::isinf(p)) return f.max_abs();
    if (!(p >= 1.0))
        throw ContractViolation("lp_norm needs p >= 1 or infinity");
    double acc = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m)
        acc += std::pow(std::abs(f[m]), p);
    return std::pow(f.grid()->dx() * acc, 1.0 / p);
}

// Same coefficients on a grid refined by an integer factor (trigonometric
// interpolation). The original Nyquist amplitude is split between +n/2 and
// -n/2 so conjugate symmetry survives.
inline Spectrum zero_pad(const Spectrum& s, std::size_t factor) {
    if (factor < 1) throw ContractViolation("zero_pad factor must be >= 1");
    if (factor == 1) return s;
    const Grid& g = *s.grid();
    const long n = static_cast<long>(g.n_modes());
    GridPtr fine = make_grid(g.n_modes() * factor, g.half_period());
    Spectrum out = Spectrum::zero(fine);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const long j = g.signed_mode(i);
        if (j == -n / 2) {
            out[fine->slot(-n / 2)] = 0.5 * s[i];
            out[fine->slot(n / 2)] = 0.5 * std::conj(s[i]);
        } else {
            out[fine->slot(j)] = s[i];
        }
    }
    return out;
}

// L2 inner product via the spectral coefficients.
inline double inner_product(const Spectrum& a, const Spectrum& b) {
    require_same_grid(a.grid(), b.grid());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += (a[i] * std::conj(b[i])).real();
    return 2.0 * a.grid()->half_period() * acc;
}

// L2 inner product via the grid quadrature.
inline double inner_product(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid());
    double acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += a[m] * b[m];
    return a.grid()->dx() * acc;
}

}  // namespace fraburgers
