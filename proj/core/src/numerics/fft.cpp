#include "gkesn/numerics/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gkesn/errors.hpp"

namespace gkesn::numerics {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::size_t> make_bitrev(std::size_t n) {
    std::vector<std::size_t> rev(n, 0);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 1; i < n; ++i) {
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1));
    }
    return rev;
}

std::vector<std::complex<double>> make_twiddles(std::size_t n) {
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n);
        tw[j] = {std::cos(ang), std::sin(ang)};
    }
    return tw;
}

// Shared butterfly pass used by both the main plan and the Bluestein
// convolution; buf must already be in bit-reversed order.
void radix2_passes(std::complex<double>* buf, std::size_t n,
                   const std::vector<std::complex<double>>& twiddle, bool inverse) {
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = twiddle[j * step];
                if (inverse) w = std::conj(w);
                const std::complex<double> t = w * buf[base + j + half];
                const std::complex<double> u = buf[base + j];
                buf[base + j] = u + t;
                buf[base + j + half] = u - t;
            }
        }
    }
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw ValidationError("FftPlan: length must be positive");
    pow2_ = is_pow2(n);
    if (pow2_) {
        if (n > 1) {
            bitrev_ = make_bitrev(n);
            twiddle_ = make_twiddles(n);
        }
        return;
    }

    // Bluestein: exp(-2 pi i jk/n) = chirp_j * chirp_k * conj(chirp_{j-k}),
    // with chirp_j = exp(-i pi j^2 / n), turning the transform into a
    // circular convolution of length >= 2n-1. Angles use j^2 mod 2n so the
    // argument stays exact for any n.
    conv_n_ = next_pow2(2 * n - 1);
    chirp_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % (2 * n);
        const double ang = -std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
        chirp_[j] = {std::cos(ang), std::sin(ang)};
    }
    conv_bitrev_ = make_bitrev(conv_n_);
    conv_twiddle_ = make_twiddles(conv_n_);

    std::vector<std::complex<double>> h(conv_n_, {0.0, 0.0});
    h[0] = std::conj(chirp_[0]);
    for (std::size_t j = 1; j < n; ++j) {
        h[j] = std::conj(chirp_[j]);
        h[conv_n_ - j] = std::conj(chirp_[j]);
    }
    chirp_hat_.assign(conv_n_, {0.0, 0.0});
    for (std::size_t i = 0; i < conv_n_; ++i) chirp_hat_[conv_bitrev_[i]] = h[i];
    radix2_passes(chirp_hat_.data(), conv_n_, conv_twiddle_, false);
}

void FftPlan::transform_pow2(std::complex<double>* buf, bool inverse) const {
    if (n_ == 1) return;
    radix2_passes(buf, n_, twiddle_, inverse);
}

void FftPlan::conv_transform(std::complex<double>* buf, bool inverse) const {
    radix2_passes(buf, conv_n_, conv_twiddle_, inverse);
}

void FftPlan::bluestein_forward(std::span<const std::complex<double>> in,
                                std::span<std::complex<double>> out) const {
    // Scatter the chirped input in bit-reversed order; the zero padding is
    // then already in place for the butterfly passes.
    std::vector<std::complex<double>> work(conv_n_, {0.0, 0.0});
    for (std::size_t j = 0; j < n_; ++j) work[conv_bitrev_[j]] = in[j] * chirp_[j];
    radix2_passes(work.data(), conv_n_, conv_twiddle_, false);
    for (std::size_t i = 0; i < conv_n_; ++i) work[i] *= chirp_hat_[i];
    // inverse convolution transform, normalised by conv_n_
    std::vector<std::complex<double>> conv(conv_n_);
    for (std::size_t i = 0; i < conv_n_; ++i) conv[conv_bitrev_[i]] = work[i];
    radix2_passes(conv.data(), conv_n_, conv_twiddle_, true);
    const double scale = 1.0 / static_cast<double>(conv_n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = conv[k] * scale * chirp_[k];
}

void FftPlan::forward(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) {
        throw ValidationError("FftPlan::forward: buffer length does not match plan size " +
                              std::to_string(n_));
    }
    if (pow2_) {
        if (n_ == 1) {
            out[0] = in[0];
            return;
        }
        for (std::size_t i = 0; i < n_; ++i) out[bitrev_[i]] = in[i];
        transform_pow2(out.data(), false);
        return;
    }
    bluestein_forward(in, out);
}

void FftPlan::inverse(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) {
        throw ValidationError("FftPlan::inverse: buffer length does not match plan size " +
                              std::to_string(n_));
    }
    if (pow2_) {
        if (n_ == 1) {
            out[0] = in[0];
            return;
        }
        for (std::size_t i = 0; i < n_; ++i) out[bitrev_[i]] = in[i];
        transform_pow2(out.data(), true);
        return;
    }
    // Unnormalised inverse via conjugation: F^{-1}(x) = conj(F(conj(x))).
    std::vector<std::complex<double>> tmp(n_);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = std::conj(in[i]);
    bluestein_forward(tmp, out);
    for (std::size_t i = 0; i < n_; ++i) out[i] = std::conj(out[i]);
}

RealHalfSpectrumPlan::RealHalfSpectrumPlan(std::size_t n) : n_(n), half_(n / 2) {
    if (n < 2 || n % 2 != 0) {
        throw ValidationError("RealHalfSpectrumPlan: length must be even and >= 2");
    }
    unpack_.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
        unpack_[k] = {std::cos(ang), std::sin(ang)};
    }
    packed_.resize(n / 2);
    packed_hat_.resize(n / 2);
}

void RealHalfSpectrumPlan::forward(std::span<const double> in,
                                   std::span<std::complex<double>> out) const {
    const std::size_t h = n_ / 2;
    if (in.size() != n_ || out.size() != h + 1) {
        throw ValidationError("RealHalfSpectrumPlan::forward: buffer size mismatch");
    }
    for (std::size_t j = 0; j < h; ++j) packed_[j] = {in[2 * j], in[2 * j + 1]};
    half_.forward(packed_, packed_hat_);

    // Split the packed transform Z into the even/odd sub-spectra E and O,
    // then combine: X_k = E_k + w^k O_k with w = exp(-2 pi i / n).
    for (std::size_t k = 0; k <= h; ++k) {
        const std::complex<double> zk = packed_hat_[k % h];
        const std::complex<double> zmk = std::conj(packed_hat_[(h - k) % h]);
        const std::complex<double> e = 0.5 * (zk + zmk);
        const std::complex<double> o = std::complex<double>(0.0, -0.5) * (zk - zmk);
        out[k] = e + unpack_[k] * o;
    }
}

void RealHalfSpectrumPlan::inverse(std::span<const std::complex<double>> in,
                                   std::span<double> out) const {
    const std::size_t h = n_ / 2;
    if (in.size() != h + 1 || out.size() != n_) {
        throw ValidationError("RealHalfSpectrumPlan::inverse: buffer size mismatch");
    }
    // Recover E and O from the half spectrum (conj(X_{h-k}) = E_k - w^k O_k),
    // repack Z_k = E_k + i O_k, and invert the half-length transform.
    for (std::size_t k = 0; k < h; ++k) {
        const std::complex<double> xk = in[k];
        const std::complex<double> xmk = std::conj(in[h - k]);
        const std::complex<double> e = 0.5 * (xk + xmk);
        const std::complex<double> wo = 0.5 * (xk - xmk);
        const std::complex<double> o = wo * std::conj(unpack_[k]);
        packed_[k] = e + std::complex<double>(0.0, 1.0) * o;
    }
    half_.inverse(packed_, packed_hat_);
    const double scale = 1.0 / static_cast<double>(h);
    for (std::size_t j = 0; j < h; ++j) {
        out[2 * j] = packed_hat_[j].real() * scale;
        out[2 * j + 1] = packed_hat_[j].imag() * scale;
    }
}

std::vector<std::complex<double>> dft(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw ValidationError("dft: empty input");
    FftPlan plan(n);
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = {values[j], 0.0};
    plan.forward(in, out);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<std::complex<double>> idft(std::span<const std::complex<double>> coeffs) {
    const std::size_t n = coeffs.size();
    if (n == 0) throw ValidationError("idft: empty input");
    FftPlan plan(n);
    std::vector<std::complex<double>> out(n);
    plan.inverse(coeffs, out);
    return out;
}

}  // namespace gkesn::numerics
