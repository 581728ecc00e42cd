#pragma once

#include <vector>

#include "mcap/dsp.hpp"
#include "mcap/qam.hpp"

namespace mcap {

/// Full m-CAP modem parameterization. The simulation sample rate is
/// oversample * bandwidth / (1 + rolloff), which keeps the per-subband
/// samples-per-symbol (oversample * m) an exact integer for every m.
struct McapConfig {
    int m = 1;                      // subband count
    ConstellationSpec spec = ConstellationSpec::make(4);
    double bandwidth = 6.5e6;       // Hz, total occupied bandwidth
    double rolloff = 0.15;
    int oversample = 4;             // samples per symbol divided by m
    // Prototype span in symbols. 40 keeps the truncated-SRRC cascade ISI
    // under 1e-3 at beta=0.15; shorter spans leave a percent-level ISI floor.
    int span = 40;
    double freq_offset = 5.0e5;     // Hz, shift of the whole band
    int train_len = 32;             // training symbols per subband

    double sample_rate() const { return oversample * bandwidth / (1.0 + rolloff); }
    int sps() const { return oversample * m; }
    double symbol_rate() const { return bandwidth / (m * (1.0 + rolloff)); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Hilbert-pair shaping filters per subband plus their matched counterparts.
struct FilterBank {
    std::vector<Taps> tx_i, tx_q;   // cosine / sine modulated SRRC
    std::vector<Taps> rx_i, rx_q;   // time-reversed transmit filters
    std::vector<double> center_freqs;  // Hz
    std::vector<double> energy_i, energy_q;  // sum of squared taps per filter
};

/// One complex gain per subband plus a shared real scale.
struct EqualizerState {
    std::vector<ComplexSymbol> coefficients;
    double rms_scale = 1.0;

    static EqualizerState identity(int m);
};

/// Per-subband receiver output; training symbols are separated from payload.
struct SubbandSymbols {
    std::vector<std::vector<ComplexSymbol>> training;  // [m][train_len]
    std::vector<std::vector<ComplexSymbol>> payload;   // [m][n]
};

FilterBank build_filter_bank(const McapConfig& cfg);

/// The fixed training preamble, known to both ends (seeded per subband).
std::vector<std::vector<ComplexSymbol>> training_symbols(const McapConfig& cfg);

/// Synthesizes the transmit waveform: training + payload symbols per
/// subband, round-robin bit distribution, unit RMS output.
Waveform transmit(const std::vector<uint8_t>& bits, const McapConfig& cfg,
                  const FilterBank& bank);

/// Matched-filter receiver. `wave` must begin at the frame start.
/// n_payload = 0 infers the payload length from the waveform length.
SubbandSymbols receive(const Waveform& wave, const McapConfig& cfg,
                       const FilterBank& bank, const EqualizerState& eq,
                       std::size_t n_payload = 0);

/// Least-squares one-tap estimate per subband; coefficient = 1/h.
EqualizerState train_equalizer(
    const std::vector<std::vector<ComplexSymbol>>& known,
    const std::vector<std::vector<ComplexSymbol>>& received_raw);

/// Gross bit rate in bits/s: B * log2(M) / (1 + beta). Independent of m.
double bit_rate(const McapConfig& cfg);

/// Number of samples occupied by one frame of n_payload symbols per subband.
std::size_t frame_length(const McapConfig& cfg, std::size_t n_payload);

}  // namespace mcap
