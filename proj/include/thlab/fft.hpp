#pragma once

#include <complex>
#include <vector>

namespace thlab {

/// Fixed-size 1D DFT of real rows, used for the periodic x1 direction.
/// Radix-2 Cooley-Tukey when n is a power of two, precomputed-matrix DFT
/// otherwise (desk-scale n). Deterministic, no external dependencies.
class Dft {
public:
    explicit Dft(int n);

    int n() const { return n_; }
    int n_half() const { return n_ / 2 + 1; }

    /// out[m] = sum_i in[i] * exp(-2*pi*I*m*i/n), m = 0..n/2
    void forward_r2c(const double* in, std::complex<double>* out) const;

    /// Inverse of forward_r2c assuming a Hermitian spectrum; includes 1/n.
    void inverse_c2r(const std::complex<double>* in, double* out) const;

private:
    void fft_inplace(std::complex<double>* a, bool inverse) const;

    int n_;
    bool pow2_;
    std::vector<int> bitrev_;
    std::vector<std::complex<double>> twiddle_fwd_; // pow2: per-stage roots; naive: full matrix row base
    mutable std::vector<std::complex<double>> work_;
};

} // namespace thlab
