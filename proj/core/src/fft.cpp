#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace pathhd::detail {

namespace {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

// Forward r2c and inverse c2r plans for one length. FFTW_ESTIMATE keeps the
// chosen algorithm, and hence the bits of every result, fixed across runs.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    PlanPair get(std::size_t n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) return it->second;
        auto real = allocate<double>(n);
        auto spec = allocate<fftw_complex>(n / 2 + 1);
        const int len = static_cast<int>(n);
        PlanPair p;
        p.forward = fftw_plan_dft_r2c_1d(len, real.get(), spec.get(), FFTW_ESTIMATE);
        p.inverse = fftw_plan_dft_c2r_1d(len, spec.get(), real.get(), FFTW_ESTIMATE);
        plans_.emplace(n, p);
        return p;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.inverse);
        }
    }

    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

// conj_y selects correlation (X·conj(Y)) instead of convolution (X·Y).
std::vector<double> spectral_product(std::span<const double> x, std::span<const double> y, bool conj_y) {
    const std::size_t n = x.size();
    const std::size_t bins = n / 2 + 1;
    const PlanPair plans = PlanCache::instance().get(n);

    auto in = allocate<double>(n);
    auto fx = allocate<fftw_complex>(bins);
    auto fy = allocate<fftw_complex>(bins);

    std::memcpy(in.get(), x.data(), n * sizeof(double));
    fftw_execute_dft_r2c(plans.forward, in.get(), fx.get());
    std::memcpy(in.get(), y.data(), n * sizeof(double));
    fftw_execute_dft_r2c(plans.forward, in.get(), fy.get());

    for (std::size_t k = 0; k < bins; ++k) {
        const double ar = fx[k][0], ai = fx[k][1];
        const double br = fy[k][0], bi = conj_y ? -fy[k][1] : fy[k][1];
        fx[k][0] = ar * br - ai * bi;
        fx[k][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(plans.inverse, fx.get(), in.get());

    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * scale;
    return out;
}

}  // namespace

std::vector<double> circular_convolve(std::span<const double> x, std::span<const double> y) {
    return spectral_product(x, y, false);
}

std::vector<double> circular_correlate(std::span<const double> s, std::span<const double> y) {
    return spectral_product(s, y, true);
}

std::vector<double> inverse_real_dft(std::span<const std::complex<double>> half_spectrum, std::size_t d) {
    const std::size_t bins = d / 2 + 1;
    const PlanPair plans = PlanCache::instance().get(d);
    auto spec = allocate<fftw_complex>(bins);
    auto out = allocate<double>(d);
    for (std::size_t k = 0; k < bins; ++k) {
        spec[k][0] = half_spectrum[k].real();
        spec[k][1] = half_spectrum[k].imag();
    }
    fftw_execute_dft_c2r(plans.inverse, spec.get(), out.get());
    std::vector<double> result(d);
    const double scale = 1.0 / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) result[i] = out[i] * scale;
    return result;
}

}  // namespace pathhd::detail
