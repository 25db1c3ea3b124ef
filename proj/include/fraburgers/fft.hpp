#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace fraburgers::detail {

// Process-lifetime FFTW plan cache, one forward/backward plan pair per size.
// Planning is serialized (FFTW planner is not thread safe); execution through
// fftw_execute_dft on caller buffers is.
class FftPlans {
  public:
    struct Pair {
        fftw_plan forward;
        fftw_plan backward;
    };

    static Pair get(std::size_t n) {
        static FftPlans cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return it->second;
        fftw_complex* scratch_in = fftw_alloc_complex(n);
        fftw_complex* scratch_out = fftw_alloc_complex(n);
        Pair p;
        const int ni = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.forward = fftw_plan_dft_1d(ni, scratch_in, scratch_out,
                                     FFTW_FORWARD, flags);
        p.backward = fftw_plan_dft_1d(ni, scratch_in, scratch_out,
                                      FFTW_BACKWARD, flags);
        fftw_free(scratch_in);
        fftw_free(scratch_out);
        cache.plans_.emplace(n, p);
        return p;
    }

  private:
    FftPlans() = default;
    ~FftPlans() = default;  // plans live for the process

    std::mutex mutex_;
    std::map<std::size_t, Pair> plans_;
};

inline void dft(const std::complex<double>* in, std::complex<double>* out,
                std::size_t n, int sign) {
    auto plans = FftPlans::get(n);
    auto* fin = reinterpret_cast<fftw_complex*>(
        const_cast<std::complex<double>*>(in));
    auto* fout = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(sign == FFTW_FORWARD ? plans.forward : plans.backward,
                     fin, fout);
}

}  // namespace fraburgers::detail
