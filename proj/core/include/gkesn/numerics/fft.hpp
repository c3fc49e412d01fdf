#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gkesn::numerics {

/// Forward discrete Fourier transform with the 1/N-on-forward convention:
///
///   out[k] = (1/N) * sum_j in[j] * exp(-2 pi i j k / N)
///
/// With this normalisation Parseval reads sum_k |out[k]|^2 = (1/N) sum_j in[j]^2,
/// i.e. the spectrum sums to the spatial mean square.
std::vector<std::complex<double>> dft(std::span<const double> values);

/// Inverse of dft (no 1/N factor): out[j] = sum_k coeffs[k] * exp(+2 pi i j k / N).
/// idft(dft(u)) == u up to rounding.
std::vector<std::complex<double>> idft(std::span<const std::complex<double>> coeffs);

/// Reusable FFT plan for a fixed length n (any n >= 1).
///
/// Power-of-two lengths run an iterative radix-2 transform over precomputed
/// twiddle/bit-reversal tables; other lengths go through Bluestein's chirp-z
/// reduction to a power-of-two convolution. Transforms are unnormalised:
/// forward applies exp(-), inverse applies exp(+), and inverse(forward(x))
/// returns n*x.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;
    void inverse(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;

private:
    void transform_pow2(std::complex<double>* buf, bool inverse) const;
    void bluestein_forward(std::span<const std::complex<double>> in,
                           std::span<std::complex<double>> out) const;

    std::size_t n_ = 0;
    bool pow2_ = false;

    // radix-2 tables (pow2_ only)
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i j / n), j < n/2

    // Bluestein state (non-pow2 only)
    std::size_t conv_n_ = 0;                       // power-of-two convolution length
    std::vector<std::complex<double>> chirp_;      // exp(-i pi j^2 / n), j < n
    std::vector<std::complex<double>> chirp_hat_;  // FFT of the wrapped conjugate chirp
    std::vector<std::size_t> conv_bitrev_;
    std::vector<std::complex<double>> conv_twiddle_;
    void conv_transform(std::complex<double>* buf, bool inverse) const;
};

/// Half-spectrum FFT pair for real signals of even length n.
///
/// forward packs the signal into an n/2-point complex transform and returns
/// the unnormalised spectrum X[0..n/2]; the remaining bins are determined by
/// X[n-k] = conj(X[k]). inverse performs the exact inverse of forward
/// (normalisation included), assuming the implied Hermitian extension.
///
/// Instances keep internal scratch, so a single instance must not be used
/// from two threads at once; plans are cheap — give each worker its own.
class RealHalfSpectrumPlan {
public:
    explicit RealHalfSpectrumPlan(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

private:
    std::size_t n_ = 0;
    FftPlan half_;
    std::vector<std::complex<double>> unpack_;  // exp(-2 pi i k / n), k <= n/2
    mutable std::vector<std::complex<double>> packed_;
    mutable std::vector<std::complex<double>> packed_hat_;
};

}  // namespace gkesn::numerics
