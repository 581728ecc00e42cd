#pragma once

#include <cstdint>
#include <vector>

#include "mcap/dsp.hpp"
#include "mcap/modem.hpp"

namespace mcap {

/// Repeated-half synchronization preamble; samples[k] == samples[k+H]
/// holds exactly for k in [0, H).
struct SyncPreamble {
    Waveform waveform;
    std::size_t half_len = 0;  // H, samples
};

struct SyncResult {
    std::size_t coarse_index = 0;
    std::size_t fine_index = 0;
    double peak_metric = 0.0;
    bool detected = false;
};

/// Builds a seeded band-confined preamble of two identical halves.
/// Shaping uses circular convolution at half length so the repetition
/// is sample-exact despite filter tails.
SyncPreamble make_preamble(const McapConfig& cfg, int half_len_symbols,
                           uint64_t seed);

/// Real-signal repeated-half timing metric M(d) = P(d)^2 / R(d)^2,
/// sliding-window implementation. Defined for d in [0, len - 2H].
std::vector<double> schmidl_cox_metric(const Waveform& wave, std::size_t half_len);

/// Coarse timing from the metric peak, refined by normalized
/// cross-correlation against the known preamble within +-search_radius.
/// search_radius = 0 picks half_len/4, wide enough to absorb the coarse
/// bias of the one-sided metric normalization.
SyncResult detect(const Waveform& wave, const SyncPreamble& preamble,
                  double threshold = 0.6, std::size_t search_radius = 0);

}  // namespace mcap
