#ifndef FLOWSTA_FFT_HPP
#define FLOWSTA_FFT_HPP

#include <complex>

namespace flowsta {

/// Thin RAII wrapper over FFTW complex-to-complex transforms of a fixed size.
/// Plans are created with FFTW_ESTIMATE so results are reproducible run to run.
/// Plan creation is serialized internally; execution is thread-safe.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    int size() const { return n_; }

    /// Unnormalized forward transform, in place.
    void forward(std::complex<double>* data) const;
    /// Unnormalized inverse transform, in place; caller divides by n.
    void inverse(std::complex<double>* data) const;

private:
    int n_ = 0;
    void* fwd_ = nullptr; // fftw_plan
    void* inv_ = nullptr;
};

} // namespace flowsta

#endif
