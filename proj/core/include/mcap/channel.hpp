#pragma once

#include <cstdint>
#include <limits>

#include "mcap/dsp.hpp"

namespace mcap {

/// Simulated intensity-modulated VLC link. Electrical gains and the
/// physical bias current are folded into normalized units; BER depends
/// on SNR and spectral shape, not absolute volts.
struct ChannelConfig {
    double led_f3db = 4.5e6;     // Hz; >= sample_rate/2 bypasses the low-pass
    double snr_db = std::numeric_limits<double>::infinity();  // inf = noiseless
    double mod_index = 0.3;
    double bias = 1.0;
    double path_gain = 1.0;
    bool flicker_enabled = false;
    double flicker_fund = 5.0e4;     // Hz, ballast fundamental
    double flicker_max = 5.0e5;      // Hz, hard cap on harmonics
    double flicker_rel_db = -10.0;   // comb RMS relative to signal AC RMS
    uint64_t seed = 1;

    void validate() const;
};

/// bias -> clip -> first-order LED low-pass -> path gain -> fluorescent
/// comb -> AWGN -> mean removal. Deterministic given the seed.
Waveform apply_channel(const Waveform& wave, const ChannelConfig& ch);

}  // namespace mcap
