#include "mcap/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mcap {

namespace {

constexpr double kPi = std::numbers::pi;

// Unnormalized SRRC impulse response at t (in symbol periods).
double srrc_value(double t, double beta) {
    if (std::abs(t) < 1e-12) {
        return 1.0 - beta + 4.0 * beta / kPi;
    }
    if (beta > 0.0 && std::abs(std::abs(4.0 * beta * t) - 1.0) < 1e-9) {
        double a = kPi / (4.0 * beta);
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
    }
    double num = std::sin(kPi * t * (1.0 - beta)) +
                 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
    double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
    return num / den;
}

// In-place iterative radix-2 FFT; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * kPi / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Direct DFT fallback for non-power-of-two segment lengths.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double ang = -2.0 * kPi * static_cast<double>(k * j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

Taps design_srrc(double beta, int span, int sps, double sample_rate) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("design_srrc: beta must be in [0,1]");
    if (span < 1) throw std::invalid_argument("design_srrc: span must be >= 1");
    if (sps < 1) throw std::invalid_argument("design_srrc: sps must be >= 1");

    const int n = span * sps;  // taps = n+1
    Taps taps;
    taps.sample_rate = sample_rate;
    taps.coefficients.resize(static_cast<std::size_t>(n) + 1);
    const double center = n / 2.0;
    double energy = 0.0;
    for (int i = 0; i <= n; ++i) {
        double t = (i - center) / sps;
        double v = srrc_value(t, beta);
        taps.coefficients[i] = v;
        energy += v * v;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& c : taps.coefficients) c *= scale;
    return taps;
}

Waveform fir_filter(const Waveform& x, const Taps& h) {
    if (x.sample_rate != h.sample_rate)
        throw std::invalid_argument("fir_filter: sample-rate mismatch");
    const std::size_t nx = x.samples.size();
    const std::size_t nh = h.coefficients.size();
    Waveform out;
    out.sample_rate = x.sample_rate;
    if (nx == 0 || nh == 0) return out;
    out.samples.assign(nx + nh - 1, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        const double xi = x.samples[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < nh; ++j) {
            out.samples[i + j] += xi * h.coefficients[j];
        }
    }
    return out;
}

Psd welch_psd(const Waveform& x, std::size_t segment_len, double overlap) {
    if (segment_len < 2 || segment_len % 2 != 0)
        throw std::invalid_argument("welch_psd: segment_len must be even and >= 2");
    if (segment_len > x.samples.size())
        throw std::invalid_argument("welch_psd: signal shorter than one segment");
    if (overlap < 0.0 || overlap >= 1.0)
        throw std::invalid_argument("welch_psd: overlap must be in [0,1)");

    const std::size_t hop =
        std::max<std::size_t>(1, static_cast<std::size_t>(segment_len * (1.0 - overlap)));

    std::vector<double> window(segment_len);
    for (std::size_t k = 0; k < segment_len; ++k) {
        window[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (segment_len - 1)));
    }

    const std::size_t n_bins = segment_len / 2 + 1;
    std::vector<double> acc(n_bins, 0.0);
    std::size_t n_segments = 0;
    std::vector<std::complex<double>> buf(segment_len);
    for (std::size_t start = 0; start + segment_len <= x.samples.size(); start += hop) {
        for (std::size_t k = 0; k < segment_len; ++k) {
            buf[k] = x.samples[start + k] * window[k];
        }
        if (is_pow2(segment_len)) {
            fft_radix2(buf);
        } else {
            buf = dft(buf);
        }
        for (std::size_t k = 0; k < n_bins; ++k) {
            acc[k] += std::norm(buf[k]);
        }
        ++n_segments;
    }

    Psd psd;
    psd.resolution_bw = 1.5 * x.sample_rate / segment_len;  // Hann ENBW
    psd.frequencies.resize(n_bins);
    psd.power_db.resize(n_bins);
    double peak = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        acc[k] /= n_segments;
        peak = std::max(peak, acc[k]);
    }
    const double floor_db = -300.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        psd.frequencies[k] = x.sample_rate * k / segment_len;
        psd.power_db[k] = acc[k] > 0.0 && peak > 0.0
                              ? 10.0 * std::log10(acc[k] / peak)
                              : floor_db;
    }
    return psd;
}

}  // namespace mcap
