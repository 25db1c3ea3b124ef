#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "fraburgers/errors.hpp"

namespace fraburgers {

// Uniform periodic grid on [-L, L). Spectral coefficients are stored in FFT
// index order: slot i holds the signed mode j = i for i < n/2 and j = i - n
// otherwise, with wavenumber k = pi * j / L.
class Grid {
  public:
    Grid(std::size_t n_modes, double half_period)
        : n_(n_modes), half_period_(half_period) {
        if (n_modes < 8 || n_modes % 2 != 0)
            throw ContractViolation("n_modes must be even and at least 8; got " +
                                    std::to_string(n_modes));
        if (!(half_period > 0.0))
            throw ContractViolation("half_period must be positive");
        dx_ = 2.0 * half_period_ / static_cast<double>(n_);
        wavenumbers_.resize(n_);
        const double base = std::numbers::pi / half_period_;
        for (std::size_t i = 0; i < n_; ++i)
            wavenumbers_[i] = base * static_cast<double>(signed_mode(i));
    }

    std::size_t n_modes() const { return n_; }
    double half_period() const { return half_period_; }
    double dx() const { return dx_; }

    // Physical coordinate of grid point m.
    double x(std::size_t m) const {
        return -half_period_ + dx_ * static_cast<double>(m);
    }

    // Signed mode number for storage slot i.
    long signed_mode(std::size_t i) const {
        return i < n_ / 2 ? static_cast<long>(i)
                          : static_cast<long>(i) - static_cast<long>(n_);
    }

    // Storage slot for signed mode j in [-n/2, n/2).
    std::size_t slot(long j) const {
        if (j < -static_cast<long>(n_ / 2) || j >= static_cast<long>(n_ / 2))
            throw ContractViolation("mode " + std::to_string(j) +
                                    " outside representable range");
        return j >= 0 ? static_cast<std::size_t>(j)
                      : static_cast<std::size_t>(j + static_cast<long>(n_));
    }

    // Wavenumber pi * j / L for storage slot i.
    double wavenumber(std::size_t i) const { return wavenumbers_[i]; }
    const std::vector<double>& wavenumbers() const { return wavenumbers_; }

    // Smallest nonzero |k| and the Nyquist |k|.
    double k_min() const { return std::numbers::pi / half_period_; }
    double k_max() const {
        return std::numbers::pi * static_cast<double>(n_ / 2) / half_period_;
    }

    // Two-thirds dealiasing cutoff.
    double dealias_cutoff() const { return (2.0 / 3.0) * k_max(); }

    bool operator==(const Grid& other) const {
        return n_ == other.n_ && half_period_ == other.half_period_;
    }

  private:
    std::size_t n_;
    double half_period_;
    double dx_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t n_modes, double half_period) {
    return std::make_shared<const Grid>(n_modes, half_period);
}

inline void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b || !(*a == *b))
        throw ContractViolation("fields live on different grids");
}

}  // namespace fraburgers
