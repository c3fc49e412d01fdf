#include "gkesn/stats/spectrum.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/fft.hpp"

namespace gkesn::stats {

SpectrumAccumulator::SpectrumAccumulator(std::uint64_t nx) : nx_(nx) {
    if (nx_ == 0) throw ValidationError("SpectrumAccumulator: grid size must be positive");
    sum_.assign(nx_ / 2 + 1, 0.0);
}

void SpectrumAccumulator::add_snapshots(const numerics::DenseMatrix& snapshots) {
    if (snapshots.rows() != nx_) {
        throw ValidationError("SpectrumAccumulator: snapshots have " +
                              std::to_string(snapshots.rows()) + " rows, expected " +
                              std::to_string(nx_));
    }
    const std::size_t n_cols = snapshots.cols();
    if (n_cols == 0) return;

    const std::size_t half = nx_ / 2;
    const double inv_n = 1.0 / static_cast<double>(nx_);
    std::vector<double> col(nx_);

    if (nx_ % 2 == 0 && nx_ >= 2) {
        numerics::RealHalfSpectrumPlan plan(nx_);
        std::vector<std::complex<double>> hat(half + 1);
        for (std::size_t t = 0; t < n_cols; ++t) {
            for (std::size_t j = 0; j < nx_; ++j) col[j] = snapshots(j, t);
            plan.forward(col, hat);
            for (std::size_t k = 0; k <= half; ++k) {
                const std::complex<double> v = hat[k] * inv_n;
                sum_[k] += v.real() * v.real() + v.imag() * v.imag();
            }
        }
    } else {
        numerics::FftPlan plan(nx_);
        std::vector<std::complex<double>> in(nx_), hat(nx_);
        for (std::size_t t = 0; t < n_cols; ++t) {
            for (std::size_t j = 0; j < nx_; ++j) in[j] = {snapshots(j, t), 0.0};
            plan.forward(in, hat);
            for (std::size_t k = 0; k <= half; ++k) {
                const std::complex<double> v = hat[k] * inv_n;
                sum_[k] += v.real() * v.real() + v.imag() * v.imag();
            }
        }
    }
    count_ += n_cols;
}

void SpectrumAccumulator::merge(const SpectrumAccumulator& other) {
    if (other.nx_ != nx_) throw ValidationError("SpectrumAccumulator::merge: grid mismatch");
    for (std::size_t k = 0; k < sum_.size(); ++k) sum_[k] += other.sum_[k];
    count_ += other.count_;
}

Spectrum SpectrumAccumulator::finalize() const {
    if (count_ == 0) {
        throw ValidationError("SpectrumAccumulator: no snapshots were accumulated");
    }
    Spectrum s;
    s.nx = nx_;
    s.n_samples = count_;
    s.e.resize(sum_.size());
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t k = 0; k < sum_.size(); ++k) s.e[k] = sum_[k] * inv;
    return s;
}

Spectrum power_spectrum(const numerics::DenseMatrix& snapshots) {
    if (snapshots.rows() == 0 || snapshots.cols() == 0) {
        throw ValidationError("power_spectrum: empty snapshot matrix");
    }
    SpectrumAccumulator acc(snapshots.rows());
    acc.add_snapshots(snapshots);
    return acc.finalize();
}

double total_energy(const Spectrum& s) {
    if (s.nx == 0 || s.e.size() != s.nx / 2 + 1) {
        throw ValidationError("total_energy: malformed spectrum");
    }
    const bool even = s.nx % 2 == 0;
    double acc = s.e[0];
    for (std::size_t k = 1; k < s.e.size(); ++k) {
        const bool nyquist = even && k == s.nx / 2;
        acc += nyquist ? s.e[k] : 2.0 * s.e[k];
    }
    return acc;
}

double relative_energy_error(const Spectrum& predicted, const Spectrum& truth) {
    if (predicted.nx != truth.nx) {
        throw ValidationError("relative_energy_error: spectra come from different grids");
    }
    const double e_truth = total_energy(truth);
    const double e_pred = total_energy(predicted);
    if (!(e_truth > 0.0)) {
        throw ValidationError("relative_energy_error: truth energy is zero");
    }
    return std::abs(e_pred - e_truth) / e_truth;
}

}  // namespace gkesn::stats
