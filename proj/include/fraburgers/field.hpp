#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/grid.hpp"

namespace fraburgers {

// Point values on the grid. Plain value type; all operations return new
// instances.
class RealField {
  public:
    RealField(GridPtr grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (!grid_) throw ContractViolation("RealField needs a grid");
        if (values_.size() != grid_->n_modes())
            throw ContractViolation("RealField length does not match grid");
    }

    static RealField zero(GridPtr grid) {
        std::vector<double> v(grid->n_modes(), 0.0);
        return RealField(std::move(grid), std::move(v));
    }

    static RealField sample(GridPtr grid,
                            const std::function<double(double)>& fn) {
        std::vector<double> v(grid->n_modes());
        for (std::size_t m = 0; m < v.size(); ++m) v[m] = fn(grid->x(m));
        return RealField(std::move(grid), std::move(v));
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t m) const { return values_[m]; }
    double& operator[](std::size_t m) { return values_[m]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    bool finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

// Complex amplitudes of e^{ikx} in FFT storage order. For spectra of real
// fields the coefficients satisfy c(-k) = conj(c(k)).
class Spectrum {
  public:
    Spectrum(GridPtr grid, std::vector<std::complex<double>> coeffs)
        : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
        if (!grid_) throw ContractViolation("Spectrum needs a grid");
        if (coeffs_.size() != grid_->n_modes())
            throw ContractViolation("Spectrum length does not match grid");
    }

    static Spectrum zero(GridPtr grid) {
        std::vector<std::complex<double>> c(grid->n_modes(), {0.0, 0.0});
        return Spectrum(std::move(grid), std::move(c));
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return coeffs_.size(); }
    std::complex<double> operator[](std::size_t i) const { return coeffs_[i]; }
    std::complex<double>& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::vector<std::complex<double>>& coeffs() { return coeffs_; }

    // Amplitude of signed mode j.
    std::complex<double> at_mode(long j) const {
        return coeffs_[grid_->slot(j)];
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    bool finite() const {
        for (const auto& c : coeffs_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                return false;
        return true;
    }

    // Largest deviation from conjugate symmetry, scaled by the largest
    // amplitude; 0 for the zero spectrum.
    double hermitian_defect() const {
        const Grid& g = *grid_;
        double defect = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const long j = g.signed_mode(i);
            if (j <= 0) continue;
            const auto d = coeffs_[i] - std::conj(coeffs_[g.slot(-j)]);
            defect = std::max(defect, std::abs(d));
        }
        defect = std::max(defect, std::abs(coeffs_[0].imag()));
        const double scale = max_abs();
        return scale > 0.0 ? defect / scale : defect;
    }

  private:
    GridPtr grid_;
    std::vector<std::complex<double>> coeffs_;
};

inline Spectrum operator+(const Spectrum& a, const Spectrum& b) {
    require_same_grid(a.grid(), b.grid());
    Spectrum out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

inline Spectrum operator-(const Spectrum& a, const Spectrum& b) {
    require_same_grid(a.grid(), b.grid());
    Spectrum out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

inline Spectrum operator*(double s, const Spectrum& a) {
    Spectrum out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    return out;
}

inline RealField operator+(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid());
    RealField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

inline RealField operator-(const RealField& a, const RealField& b) {
    require_same_grid(a.grid(), b.grid());
    RealField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

inline RealField operator*(double s, const RealField& a) {
    RealField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    return out;
}

}  // namespace fraburgers
