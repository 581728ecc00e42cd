#pragma once

#include <cstddef>
#include <vector>

namespace mcap {

/// Real FIR tap set. Coefficient count is odd for the linear-phase
/// prototypes produced by design_srrc.
struct Taps {
    std::vector<double> coefficients;
    double sample_rate = 0.0;  // Hz

    std::size_t size() const { return coefficients.size(); }
};

/// Real-valued sample sequence with its sample rate in Hz.
struct Waveform {
    std::vector<double> samples;
    double sample_rate = 0.0;  // Hz

    std::size_t size() const { return samples.size(); }
};

/// One-sided power spectral density, power in dB relative to the peak bin.
struct Psd {
    std::vector<double> frequencies;  // Hz, strictly increasing, [0, fs/2]
    std::vector<double> power_db;     // dB rel. peak
    double resolution_bw = 0.0;       // Hz
};

/// Square-root raised cosine prototype, span*sps+1 taps, unit energy.
/// The removable singularities at t=0 and t=+-T/(4*beta) use their
/// analytic limit values.
Taps design_srrc(double beta, int span, int sps, double sample_rate = 1.0);

/// Full linear convolution; output length = len(x) + len(h) - 1.
Waveform fir_filter(const Waveform& x, const Taps& h);

/// Welch averaged periodogram with Hann window.
Psd welch_psd(const Waveform& x, std::size_t segment_len, double overlap = 0.5);

}  // namespace mcap
