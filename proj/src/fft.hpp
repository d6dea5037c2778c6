#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace taudit::detail {

/// Real-input forward DFT of a fixed length, backed by a shared FFTW plan.
/// Thread-safe: planning is serialized, execution uses per-call buffers.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t bins() const { return n_ / 2 + 1; }

    /// in.size() == size(), out.size() == bins().
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

private:
    std::size_t n_;
    void* plan_;
};

}  // namespace taudit::detail
