#pragma once

#include <cstdint>
#include <vector>

#include "mcap/channel.hpp"
#include "mcap/modem.hpp"

namespace mcap {

// Pre-FEC BER limits for 7% and 20% overhead codes.
inline constexpr double kFec7Threshold = 3.8e-3;
inline constexpr double kFec20Threshold = 1.5e-2;

struct BerReport {
    uint64_t bits_tx = 0;
    uint64_t bit_errors = 0;
    double ber = 0.0;
    std::vector<uint64_t> per_subband_errors;
    uint64_t symbols_tx = 0;   // QAM symbols across all subbands
    int sync_failures = 0;
    bool passes_fec7 = false;
    bool passes_fec20 = false;
};

struct SweepPoint {
    int m = 1;
    int qam_order = 4;
    double snr_db = 0.0;
    double led_f3db = 4.5e6;
    bool flicker = false;
    double freq_offset = 5.0e5;
};

struct SweepGrid {
    std::vector<SweepPoint> points;
    uint64_t symbols_per_point = 1100000;  // total QAM symbols per point
    uint64_t base_seed = 1;
};

/// PRBS-15 LFSR, polynomial x^15 + x^14 + 1, LSB output per shift.
std::vector<uint8_t> prbs(uint32_t seed, std::size_t n);

/// One end-to-end measurement: frame assembly, channel, sync, training,
/// demapping, error counting over the payload. Sync failures retry up to
/// 3 times; total failure reports ber = 1.
BerReport run_point(const McapConfig& cfg, const ChannelConfig& ch,
                    uint64_t n_symbols, uint64_t seed);

/// Runs every grid point with a per-point seed derived from the base seed
/// and the point's parameter tuple (not its position). Points run in
/// parallel; output order matches the grid order.
std::vector<BerReport> sweep(const SweepGrid& grid,
                             const McapConfig& modem_defaults,
                             const ChannelConfig& channel_defaults);

/// FIR filter-bank complexity figure: 4*L*m operations.
uint64_t cap_complexity(uint64_t m, uint64_t span);

/// (I)FFT pair complexity figure: 2*log2(N); N must be a power of two.
uint64_t ofdm_complexity(uint64_t n_subcarriers);

/// 95% Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};
WilsonInterval wilson_interval(uint64_t successes, uint64_t trials,
                               double z = 1.96);

}  // namespace mcap
