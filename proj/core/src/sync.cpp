#include "mcap/sync.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mcap {

SyncPreamble make_preamble(const McapConfig& cfg, int half_len_symbols,
                           uint64_t seed) {
    cfg.validate();
    if (half_len_symbols < 16)
        throw std::invalid_argument("make_preamble: half_len_symbols must be >= 16");
    const auto bank = build_filter_bank(cfg);
    const int sps = cfg.sps();
    const std::size_t H = static_cast<std::size_t>(half_len_symbols) * sps;
    const std::size_t n_taps = bank.tx_i[0].size();
    const int b = cfg.spec.bits_per_symbol;

    std::vector<double> half(H, 0.0);
    for (int n = 0; n < cfg.m; ++n) {
        std::mt19937_64 engine(seed ^ (0x70726561ull + (static_cast<uint64_t>(n) << 24)));
        std::vector<uint8_t> bits(static_cast<std::size_t>(half_len_symbols) * b);
        for (auto& bit : bits) bit = static_cast<uint8_t>(engine() & 1);
        const auto symbols = map_bits(bits, cfg.spec);
        const auto& hi = bank.tx_i[n].coefficients;
        const auto& hq = bank.tx_q[n].coefficients;
        for (int k = 0; k < half_len_symbols; ++k) {
            const double si = symbols[k].real();
            const double sq = symbols[k].imag();
            // Circular shaping keeps the two tiled halves sample-exact.
            for (std::size_t j = 0; j < n_taps; ++j) {
                half[(static_cast<std::size_t>(k) * sps + j) % H] += si * hi[j] - sq * hq[j];
            }
        }
    }
    const double scale = std::sqrt(2.0 * cfg.oversample);
    for (auto& s : half) s *= scale;

    SyncPreamble p;
    p.half_len = H;
    p.waveform.sample_rate = cfg.sample_rate();
    p.waveform.samples.reserve(2 * H);
    p.waveform.samples.insert(p.waveform.samples.end(), half.begin(), half.end());
    p.waveform.samples.insert(p.waveform.samples.end(), half.begin(), half.end());
    return p;
}

std::vector<double> schmidl_cox_metric(const Waveform& wave, std::size_t half_len) {
    const std::size_t H = half_len;
    if (H == 0 || wave.samples.size() < 2 * H)
        throw std::invalid_argument("schmidl_cox_metric: need at least 2*half_len samples");
    const auto& r = wave.samples;
    const std::size_t n_out = r.size() - 2 * H + 1;
    std::vector<double> metric(n_out);

    double p = 0.0, e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < H; ++k) {
        p += r[k] * r[k + H];
        e1 += r[k] * r[k];
        e2 += r[k + H] * r[k + H];
    }
    for (std::size_t d = 0; d < n_out; ++d) {
        // Symmetric normalization: Cauchy-Schwarz caps the metric at 1,
        // with equality exactly when the two halves coincide.
        const double denom = e1 * e2;
        metric[d] = denom > 0.0 ? (p * p) / denom : 0.0;
        if (d + 1 < n_out) {
            p += r[d + H] * r[d + 2 * H] - r[d] * r[d + H];
            e1 += r[d + H] * r[d + H] - r[d] * r[d];
            e2 += r[d + 2 * H] * r[d + 2 * H] - r[d + H] * r[d + H];
        }
    }
    return metric;
}

SyncResult detect(const Waveform& wave, const SyncPreamble& preamble,
                  double threshold, std::size_t search_radius) {
    SyncResult result;
    if (wave.samples.size() < preamble.waveform.samples.size()) return result;

    if (search_radius == 0) search_radius = std::max<std::size_t>(1, preamble.half_len / 4);

    const auto metric = schmidl_cox_metric(wave, preamble.half_len);

    // Second-half window energies, used to reject silence windows where
    // the P^2/R^2 ratio becomes a noise-over-noise artifact.
    const std::size_t H = preamble.half_len;
    const auto& rs = wave.samples;
    std::vector<double> energy(metric.size());
    double e = 0.0;
    for (std::size_t k = 0; k < H; ++k) e += rs[k + H] * rs[k + H];
    double e_max = e;
    for (std::size_t d = 0; d < metric.size(); ++d) {
        energy[d] = e;
        e_max = std::max(e_max, e);
        if (d + 1 < metric.size()) {
            e += rs[d + 2 * H] * rs[d + 2 * H] - rs[d + H] * rs[d + H];
        }
    }

    double best = -1.0;
    std::size_t best_d = 0;
    for (std::size_t d = 0; d < metric.size(); ++d) {
        if (metric[d] >= threshold && energy[d] >= 0.25 * e_max && metric[d] > best) {
            best = metric[d];
            best_d = d;
        }
    }
    if (best < 0.0) return result;  // detected = false

    result.detected = true;
    result.coarse_index = best_d;
    result.peak_metric = best;

    // Fine stage: normalized cross-correlation against the known preamble.
    const auto& p = preamble.waveform.samples;
    const auto& r = wave.samples;
    double pe = 0.0;
    for (double v : p) pe += v * v;
    const std::size_t lo = best_d > search_radius ? best_d - search_radius : 0;
    std::size_t hi = best_d + search_radius;
    if (hi + p.size() > r.size()) hi = r.size() - p.size();
    double best_corr = -2.0;
    std::size_t best_fine = best_d;
    for (std::size_t d = lo; d <= hi; ++d) {
        double dot = 0.0, re = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            dot += r[d + k] * p[k];
            re += r[d + k] * r[d + k];
        }
        const double denom = std::sqrt(re * pe);
        const double corr = denom > 0.0 ? dot / denom : 0.0;
        if (corr > best_corr) {
            best_corr = corr;
            best_fine = d;
        }
    }
    result.fine_index = best_fine;
    return result;
}

}  // namespace mcap
