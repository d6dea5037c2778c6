#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace taudit::detail {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n), plan_(nullptr) {
    if (n == 0) {
        throw std::invalid_argument("FFT length must be positive");
    }
    std::lock_guard lock(planner_mutex());
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan_ == nullptr) {
        throw std::runtime_error("FFTW planning failed");
    }
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != bins()) {
        throw std::invalid_argument("FFT buffer size mismatch");
    }
    // Out-of-place r2c plans preserve their input (FFTW_PRESERVE_INPUT is the r2c default).
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace taudit::detail
