#include "mcap/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mcap/rng.hpp"

namespace mcap {

namespace {
constexpr double kPi = std::numbers::pi;

double ac_power(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= x.size();
    double p = 0.0;
    for (double v : x) p += (v - mean) * (v - mean);
    return p / x.size();
}
}  // namespace

void ChannelConfig::validate() const {
    if (led_f3db <= 0.0) throw std::invalid_argument("ChannelConfig: led_f3db must be > 0");
    if (mod_index <= 0.0 || mod_index > 1.0)
        throw std::invalid_argument("ChannelConfig: mod_index must be in (0,1]");
    if (bias <= 0.0) throw std::invalid_argument("ChannelConfig: bias must be > 0");
    if (path_gain <= 0.0) throw std::invalid_argument("ChannelConfig: path_gain must be > 0");
    if (flicker_fund <= 0.0) throw std::invalid_argument("ChannelConfig: flicker_fund must be > 0");
    if (flicker_max <= 0.0) throw std::invalid_argument("ChannelConfig: flicker_max must be > 0");
}

Waveform apply_channel(const Waveform& wave, const ChannelConfig& ch) {
    ch.validate();
    if (wave.samples.empty())
        throw std::invalid_argument("apply_channel: empty waveform");
    const double fs = wave.sample_rate;
    Waveform out;
    out.sample_rate = fs;
    auto& y = out.samples;
    y.resize(wave.samples.size());

    // Bias and clip to the LED's [0, 2*bias] drive range.
    for (std::size_t i = 0; i < y.size(); ++i) {
        double v = ch.bias + ch.mod_index * wave.samples[i];
        if (v < 0.0) v = 0.0;
        if (v > 2.0 * ch.bias) v = 2.0 * ch.bias;
        y[i] = v;
    }

    // First-order LED low-pass, bilinear discretization; exact -3 dB at
    // led_f3db. A corner at or above Nyquist degenerates to a pass-through.
    if (ch.led_f3db < fs / 2.0) {
        const double c = std::tan(kPi * ch.led_f3db / fs);
        const double b0 = c / (1.0 + c);
        const double a1 = (c - 1.0) / (1.0 + c);
        double x1 = y[0], y1 = y[0];  // start settled at the initial level
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double x0 = y[i];
            y[i] = b0 * (x0 + x1) - a1 * y1;
            x1 = x0;
            y1 = y[i];
        }
    }

    for (auto& v : y) v *= ch.path_gain;

    // Reference power for SNR and flicker scaling. A silent input would
    // make the measured AC power zero; fall back to the power a unit-RMS
    // input would carry so noise-only runs stay meaningful.
    double signal_ac = ac_power(y);
    if (signal_ac < 1e-30) {
        signal_ac = ch.mod_index * ch.mod_index * ch.path_gain * ch.path_gain;
    }

    GaussianRng rng(ch.seed);

    if (ch.flicker_enabled) {
        int n_harmonics = static_cast<int>(ch.flicker_max / ch.flicker_fund);
        if (n_harmonics > 0) {
            // 1/k amplitude comb; scale so the comb RMS sits flicker_rel_db
            // below the post-channel signal AC RMS.
            double sum_inv_sq = 0.0;
            for (int k = 1; k <= n_harmonics; ++k) sum_inv_sq += 1.0 / (k * k);
            const double target_power =
                signal_ac * std::pow(10.0, ch.flicker_rel_db / 10.0);
            const double amp = std::sqrt(2.0 * target_power / sum_inv_sq);
            std::vector<double> phase(n_harmonics);
            for (int k = 0; k < n_harmonics; ++k) phase[k] = 2.0 * kPi * rng.uniform();
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double t = static_cast<double>(i) / fs;
                double v = 0.0;
                for (int k = 1; k <= n_harmonics; ++k) {
                    v += (amp / k) * std::sin(2.0 * kPi * k * ch.flicker_fund * t + phase[k - 1]);
                }
                y[i] += v;
            }
        }
    }

    if (std::isfinite(ch.snr_db)) {
        const double noise_power = signal_ac * std::pow(10.0, -ch.snr_db / 10.0);
        const double sigma = std::sqrt(noise_power);
        for (auto& v : y) v += sigma * rng();
    }

    // Receiver AC coupling.
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    for (auto& v : y) v -= mean;
    return out;
}

}  // namespace mcap
