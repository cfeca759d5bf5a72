#include "flowsta/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "flowsta/errors.hpp"

namespace flowsta {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(int n) : n_(n) {
    if (n < 2) throw DomainError("Fft: size must be >= 2");
    std::lock_guard<std::mutex> lock(plan_mutex());
    // Plan on a scratch buffer; FFTW_UNALIGNED lets us execute on any array.
    fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
    fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!fwd_ || !inv_) throw Error("Fft: plan creation failed");
}

Fft::~Fft() {
    if (fwd_ || inv_) {
        std::lock_guard<std::mutex> lock(plan_mutex());
        if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    }
}

Fft::Fft(Fft&& other) noexcept : n_(other.n_), fwd_(other.fwd_), inv_(other.inv_) {
    other.fwd_ = nullptr;
    other.inv_ = nullptr;
    other.n_ = 0;
}

Fft& Fft::operator=(Fft&& other) noexcept {
    if (this != &other) {
        this->~Fft();
        n_ = other.n_;
        fwd_ = other.fwd_;
        inv_ = other.inv_;
        other.fwd_ = nullptr;
        other.inv_ = nullptr;
        other.n_ = 0;
    }
    return *this;
}

void Fft::forward(std::complex<double>* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                     reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void Fft::inverse(std::complex<double>* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(inv_),
                     reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

} // namespace flowsta
