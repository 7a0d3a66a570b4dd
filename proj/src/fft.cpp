#include "thlab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace thlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

Dft::Dft(int n) : n_(n), pow2_(is_pow2(n)) {
    if (n < 2) throw std::invalid_argument("Dft: n must be >= 2");
    if (pow2_) {
        bitrev_.resize(n);
        int lg = 0;
        while ((1 << lg) < n) ++lg;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < lg; ++b)
                if (i & (1 << b)) r |= 1 << (lg - 1 - b);
            bitrev_[i] = r;
        }
        twiddle_fwd_.resize(n / 2);
        for (int k = 0; k < n / 2; ++k) {
            const double ang = -2.0 * kPi * k / n;
            twiddle_fwd_[k] = {std::cos(ang), std::sin(ang)};
        }
    } else {
        // one period of the forward root table; naive DFT indexes (m*i) mod n
        twiddle_fwd_.resize(n);
        for (int k = 0; k < n; ++k) {
            const double ang = -2.0 * kPi * k / n;
            twiddle_fwd_[k] = {std::cos(ang), std::sin(ang)};
        }
    }
    work_.resize(n);
}

void Dft::fft_inplace(std::complex<double>* a, bool inverse) const {
    const int n = n_;
    for (int i = 0; i < n; ++i) {
        const int r = bitrev_[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len / 2;
        const int step = n / len;
        for (int base = 0; base < n; base += len) {
            for (int k = 0; k < half; ++k) {
                std::complex<double> w = twiddle_fwd_[static_cast<size_t>(k) * step];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[base + k];
                const std::complex<double> t = w * a[base + k + half];
                a[base + k] = u + t;
                a[base + k + half] = u - t;
            }
        }
    }
}

void Dft::forward_r2c(const double* in, std::complex<double>* out) const {
    const int n = n_;
    if (pow2_) {
        for (int i = 0; i < n; ++i) work_[i] = {in[i], 0.0};
        fft_inplace(work_.data(), false);
        for (int m = 0; m <= n / 2; ++m) out[m] = work_[m];
    } else {
        for (int m = 0; m <= n / 2; ++m) {
            std::complex<double> s{0.0, 0.0};
            for (int i = 0; i < n; ++i)
                s += in[i] * twiddle_fwd_[static_cast<size_t>(m) * i % n];
            out[m] = s;
        }
    }
}

void Dft::inverse_c2r(const std::complex<double>* in, double* out) const {
    const int n = n_;
    // expand the Hermitian half-spectrum
    for (int m = 0; m <= n / 2; ++m) work_[m] = in[m];
    for (int m = n / 2 + 1; m < n; ++m) work_[m] = std::conj(in[n - m]);
    if (pow2_) {
        fft_inplace(work_.data(), true);
        for (int i = 0; i < n; ++i) out[i] = work_[i].real() / n;
    } else {
        std::vector<std::complex<double>> spec(work_.begin(), work_.end());
        for (int i = 0; i < n; ++i) {
            std::complex<double> s{0.0, 0.0};
            for (int m = 0; m < n; ++m)
                s += spec[m] * std::conj(twiddle_fwd_[static_cast<size_t>(m) * i % n]);
            out[i] = s.real() / n;
        }
    }
}

} // namespace thlab
