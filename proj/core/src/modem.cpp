#include "mcap/modem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mcap {

namespace {
constexpr double kPi = std::numbers::pi;
}

void McapConfig::validate() const {
    if (m < 1) throw std::invalid_argument("McapConfig: m must be >= 1");
    if (spec.order != 4 && spec.order != 16 && spec.order != 64)
        throw std::invalid_argument("McapConfig: qam_order must be 4, 16 or 64");
    if (bandwidth <= 0.0) throw std::invalid_argument("McapConfig: bandwidth must be > 0");
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("McapConfig: rolloff must be in [0,1]");
    if (oversample < 2) throw std::invalid_argument("McapConfig: oversample must be >= 2");
    if (span < 1) throw std::invalid_argument("McapConfig: span must be >= 1");
    if (freq_offset < 0.0) throw std::invalid_argument("McapConfig: freq_offset must be >= 0");
    if (train_len < 8) throw std::invalid_argument("McapConfig: train_len must be >= 8");
    if (freq_offset + bandwidth > sample_rate() / 2.0)
        throw std::invalid_argument(
            "McapConfig: freq_offset + bandwidth exceeds Nyquist; raise oversample");
}

EqualizerState EqualizerState::identity(int m) {
    EqualizerState eq;
    eq.coefficients.assign(m, ComplexSymbol(1.0, 0.0));
    eq.rms_scale = 1.0;
    return eq;
}

FilterBank build_filter_bank(const McapConfig& cfg) {
    cfg.validate();
    const int sps = cfg.sps();
    const double fs = cfg.sample_rate();
    const Taps proto = design_srrc(cfg.rolloff, cfg.span, sps, fs);
    const std::size_t n_taps = proto.size();
    const double center = (n_taps - 1) / 2.0;

    FilterBank bank;
    bank.tx_i.resize(cfg.m);
    bank.tx_q.resize(cfg.m);
    bank.rx_i.resize(cfg.m);
    bank.rx_q.resize(cfg.m);
    bank.center_freqs.resize(cfg.m);
    bank.energy_i.resize(cfg.m);
    bank.energy_q.resize(cfg.m);

    for (int n = 0; n < cfg.m; ++n) {
        const double fn =
            cfg.freq_offset + (2.0 * (n + 1) - 1.0) * cfg.bandwidth / (2.0 * cfg.m);
        bank.center_freqs[n] = fn;
        Taps ti, tq;
        ti.sample_rate = tq.sample_rate = fs;
        ti.coefficients.resize(n_taps);
        tq.coefficients.resize(n_taps);
        double ei = 0.0, eq = 0.0;
        for (std::size_t k = 0; k < n_taps; ++k) {
            const double t = (k - center) / fs;
            ti.coefficients[k] = proto.coefficients[k] * std::cos(2.0 * kPi * fn * t);
            tq.coefficients[k] = proto.coefficients[k] * std::sin(2.0 * kPi * fn * t);
            ei += ti.coefficients[k] * ti.coefficients[k];
            eq += tq.coefficients[k] * tq.coefficients[k];
        }
        Taps ri = ti, rq = tq;
        std::reverse(ri.coefficients.begin(), ri.coefficients.end());
        std::reverse(rq.coefficients.begin(), rq.coefficients.end());
        bank.tx_i[n] = std::move(ti);
        bank.tx_q[n] = std::move(tq);
        bank.rx_i[n] = std::move(ri);
        bank.rx_q[n] = std::move(rq);
        bank.energy_i[n] = ei;
        bank.energy_q[n] = eq;
    }
    return bank;
}

std::vector<std::vector<ComplexSymbol>> training_symbols(const McapConfig& cfg) {
    std::vector<std::vector<ComplexSymbol>> out(cfg.m);
    const int b = cfg.spec.bits_per_symbol;
    for (int n = 0; n < cfg.m; ++n) {
        std::mt19937_64 engine(0x74726169ull ^ (static_cast<uint64_t>(n) << 20));
        std::vector<uint8_t> bits(static_cast<std::size_t>(cfg.train_len) * b);
        for (auto& bit : bits) bit = static_cast<uint8_t>(engine() & 1);
        out[n] = map_bits(bits, cfg.spec);
    }
    return out;
}

std::size_t frame_length(const McapConfig& cfg, std::size_t n_payload) {
    const std::size_t n_taps = static_cast<std::size_t>(cfg.span) * cfg.sps() + 1;
    const std::size_t n_sym = cfg.train_len + n_payload;
    return (n_sym - 1) * cfg.sps() + n_taps;
}

Waveform transmit(const std::vector<uint8_t>& bits, const McapConfig& cfg,
                  const FilterBank& bank) {
    cfg.validate();
    const int b = cfg.spec.bits_per_symbol;
    if (bits.size() % (static_cast<std::size_t>(cfg.m) * b) != 0)
        throw std::invalid_argument("transmit: bit count not divisible by m*bits_per_symbol");

    const auto payload = map_bits(bits, cfg.spec);
    const auto train = training_symbols(cfg);
    const std::size_t per_band_payload = payload.size() / cfg.m;
    const int sps = cfg.sps();
    const std::size_t n_taps = bank.tx_i[0].size();
    const std::size_t n_sym = cfg.train_len + per_band_payload;

    Waveform out;
    out.sample_rate = cfg.sample_rate();
    out.samples.assign((n_sym - 1) * sps + n_taps, 0.0);

    for (int n = 0; n < cfg.m; ++n) {
        const auto& hi = bank.tx_i[n].coefficients;
        const auto& hq = bank.tx_q[n].coefficients;
        for (std::size_t k = 0; k < n_sym; ++k) {
            const ComplexSymbol sym = k < static_cast<std::size_t>(cfg.train_len)
                                          ? train[n][k]
                                          : payload[(k - cfg.train_len) * cfg.m + n];
            const double si = sym.real();
            const double sq = sym.imag();
            double* dst = out.samples.data() + k * sps;
            for (std::size_t j = 0; j < n_taps; ++j) {
                dst[j] += si * hi[j] - sq * hq[j];
            }
        }
    }

    // Expected signal power with unit-energy symbols is 1/(2*oversample),
    // so this deterministic scale puts the RMS at 1 independent of the data.
    const double scale = std::sqrt(2.0 * cfg.oversample);
    for (auto& s : out.samples) s *= scale;
    return out;
}

SubbandSymbols receive(const Waveform& wave, const McapConfig& cfg,
                       const FilterBank& bank, const EqualizerState& eq,
                       std::size_t n_payload) {
    cfg.validate();
    if (wave.sample_rate != cfg.sample_rate())
        throw std::invalid_argument("receive: waveform sample rate does not match config");
    const int sps = cfg.sps();
    const std::size_t n_taps = bank.tx_i[0].size();
    std::size_t n_sym;
    if (n_payload == 0) {
        if (wave.samples.size() < n_taps + static_cast<std::size_t>(cfg.train_len - 1) * sps)
            throw std::runtime_error("receive: waveform shorter than preamble plus group delay");
        n_sym = (wave.samples.size() - n_taps) / sps + 1;
    } else {
        n_sym = cfg.train_len + n_payload;
        if (wave.samples.size() < (n_sym - 1) * sps + n_taps)
            throw std::runtime_error("receive: waveform shorter than requested frame");
    }

    const double inv_scale = 1.0 / std::sqrt(2.0 * cfg.oversample);
    SubbandSymbols out;
    out.training.resize(cfg.m);
    out.payload.resize(cfg.m);
    for (int n = 0; n < cfg.m; ++n) {
        out.training[n].reserve(cfg.train_len);
        out.payload[n].reserve(n_sym - cfg.train_len);
        const auto& hi = bank.tx_i[n].coefficients;
        const auto& hq = bank.tx_q[n].coefficients;
        const double gi = inv_scale / bank.energy_i[n];
        const double gq = inv_scale / bank.energy_q[n];
        const ComplexSymbol c = eq.coefficients[n] * eq.rms_scale;
        for (std::size_t k = 0; k < n_sym; ++k) {
            const double* src = wave.samples.data() + k * sps;
            double di = 0.0, dq = 0.0;
            for (std::size_t j = 0; j < n_taps; ++j) {
                di += src[j] * hi[j];
                dq += src[j] * hq[j];
            }
            // TX convention is I*p_i - Q*p_q, so the quadrature branch
            // comes back negated.
            const ComplexSymbol sym = ComplexSymbol(di * gi, -dq * gq) * c;
            if (k < static_cast<std::size_t>(cfg.train_len)) {
                out.training[n].push_back(sym);
            } else {
                out.payload[n].push_back(sym);
            }
        }
    }
    return out;
}

EqualizerState train_equalizer(
    const std::vector<std::vector<ComplexSymbol>>& known,
    const std::vector<std::vector<ComplexSymbol>>& received_raw) {
    if (known.size() != received_raw.size())
        throw std::invalid_argument("train_equalizer: subband count mismatch");
    EqualizerState eq;
    eq.coefficients.resize(known.size());
    for (std::size_t n = 0; n < known.size(); ++n) {
        if (known[n].size() != received_raw[n].size() || known[n].size() < 8)
            throw std::invalid_argument("train_equalizer: need >= 8 matched symbols per subband");
        ComplexSymbol num(0.0);
        double den = 0.0;
        for (std::size_t k = 0; k < known[n].size(); ++k) {
            num += received_raw[n][k] * std::conj(known[n][k]);
            den += std::norm(known[n][k]);
        }
        const ComplexSymbol h = num / den;
        if (std::abs(h) < 1e-9)
            throw std::runtime_error("train_equalizer: degenerate channel");
        eq.coefficients[n] = 1.0 / h;
    }
    return eq;
}

double bit_rate(const McapConfig& cfg) {
    return cfg.bandwidth * cfg.spec.bits_per_symbol / (1.0 + cfg.rolloff);
}

}  // namespace mcap
