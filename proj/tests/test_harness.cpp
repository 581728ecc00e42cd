#include <cmath>
#include <limits>

#include "doctest.h"
#include "mcap/harness.hpp"

using namespace mcap;

namespace {

McapConfig cfg_for(int m, int order) {
    McapConfig cfg;
    cfg.m = m;
    cfg.spec = ConstellationSpec::make(order);
    return cfg;
}

ChannelConfig clean_channel() {
    ChannelConfig ch;
    ch.snr_db = std::numeric_limits<double>::infinity();
    ch.flicker_enabled = false;
    ch.led_f3db = 1e12;  // pass-through
    return ch;
}

bool reports_equal(const BerReport& a, const BerReport& b) {
    return a.bits_tx == b.bits_tx && a.bit_errors == b.bit_errors && a.ber == b.ber &&
           a.per_subband_errors == b.per_subband_errors && a.symbols_tx == b.symbols_tx &&
           a.sync_failures == b.sync_failures && a.passes_fec7 == b.passes_fec7 &&
           a.passes_fec20 == b.passes_fec20;
}

}  // namespace

TEST_CASE("prbs period, balance and determinism") {
    const auto bits = prbs(1, 2 * 32767);
    for (std::size_t k = 0; k < 32767; ++k) {
        CHECK(bits[k] == bits[k + 32767]);
    }
    std::size_t ones = 0;
    for (std::size_t k = 0; k < 32767; ++k) ones += bits[k];
    CHECK(ones == 16384);

    CHECK(prbs(12345, 100) == prbs(12345, 100));
    CHECK_THROWS_AS(prbs(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(prbs(1, 0), std::invalid_argument);
}

TEST_CASE("complexity calculators") {
    CHECK(cap_complexity(1, 1) == 4);
    CHECK(cap_complexity(10, 10) == 400);
    CHECK(cap_complexity(6, 10) == 2 * cap_complexity(3, 10));

    CHECK(ofdm_complexity(2) == 2);
    CHECK(ofdm_complexity(1024) == 20);
    CHECK(ofdm_complexity(1024ull * 1024ull) == 2 * ofdm_complexity(1024));
    CHECK_THROWS_AS(ofdm_complexity(1000), std::invalid_argument);
    CHECK_THROWS_AS(ofdm_complexity(1), std::invalid_argument);
}

TEST_CASE("wilson interval sanity") {
    const auto i = wilson_interval(50, 1000);
    CHECK(i.low < 0.05);
    CHECK(i.high > 0.05);
    CHECK(i.high - i.low < 0.03);
    const auto zero = wilson_interval(0, 1000);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
}

TEST_CASE("run_point over a clean channel has zero BER") {
    for (int m : {1, 5}) {
        const auto report = run_point(cfg_for(m, 16), clean_channel(), 20000, 7);
        CHECK(report.bit_errors == 0);
        CHECK(report.ber == 0.0);
        CHECK(report.sync_failures == 0);
        CHECK(report.passes_fec7);
        CHECK(report.passes_fec20);
        CHECK(report.symbols_tx >= 20000);
        CHECK(report.bits_tx == report.symbols_tx * 4);
        CHECK(report.per_subband_errors.size() == static_cast<std::size_t>(m));
    }
}

TEST_CASE("run_point is deterministic") {
    auto ch = clean_channel();
    ch.snr_db = 14.0;
    ch.led_f3db = 4.5e6;
    const auto a = run_point(cfg_for(3, 64), ch, 30000, 99);
    const auto b = run_point(cfg_for(3, 64), ch, 30000, 99);
    CHECK(reports_equal(a, b));
}

TEST_CASE("report bookkeeping is consistent") {
    auto ch = clean_channel();
    ch.snr_db = 12.0;
    ch.led_f3db = 4.5e6;
    const auto r = run_point(cfg_for(4, 64), ch, 40000, 3);
    uint64_t sum = 0;
    for (auto e : r.per_subband_errors) sum += e;
    CHECK(sum == r.bit_errors);
    CHECK(r.ber == doctest::Approx(static_cast<double>(r.bit_errors) / r.bits_tx));
    CHECK(r.symbols_tx * 6 == r.bits_tx);
    // FEC threshold ordering: a 7% pass implies a 20% pass.
    if (r.passes_fec7) CHECK(r.passes_fec20);
}

TEST_CASE("pooled BER over two halves matches combined counting") {
    auto ch = clean_channel();
    ch.snr_db = 13.0;
    ch.led_f3db = 4.5e6;
    const auto a = run_point(cfg_for(2, 64), ch, 20000, 1001);
    const auto b = run_point(cfg_for(2, 64), ch, 20000, 1002);
    const double pooled =
        static_cast<double>(a.bit_errors + b.bit_errors) / (a.bits_tx + b.bits_tx);
    CHECK(pooled == doctest::Approx((a.ber * a.bits_tx + b.ber * b.bits_tx) /
                                    (a.bits_tx + b.bits_tx)));
}

TEST_CASE("catastrophic channel reports ber=1 after retries") {
    auto ch = clean_channel();
    ch.snr_db = -30.0;  // sync cannot survive this
    const auto r = run_point(cfg_for(1, 4), ch, 10000, 5);
    CHECK(r.sync_failures == 3);
    CHECK(r.ber == 1.0);
    CHECK_FALSE(r.passes_fec20);
}

TEST_CASE("sweep of one point equals run_point") {
    SweepGrid grid;
    grid.symbols_per_point = 15000;
    grid.base_seed = 9;
    SweepPoint p;
    p.m = 2;
    p.qam_order = 16;
    p.snr_db = 14.0;
    p.led_f3db = 4.5e6;
    p.flicker = false;
    p.freq_offset = 5.0e5;
    grid.points = {p};
    const auto rows = sweep(grid, McapConfig{}, ChannelConfig{});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].bit_errors <= rows[0].bits_tx);
    CHECK(rows[0].symbols_tx >= 15000);
}

TEST_CASE("permuting the grid permutes the rows identically") {
    SweepGrid grid;
    grid.symbols_per_point = 12000;
    grid.base_seed = 4;
    for (int m : {1, 2, 4}) {
        SweepPoint p;
        p.m = m;
        p.qam_order = 16;
        p.snr_db = 13.0;
        grid.points.push_back(p);
    }
    const auto rows = sweep(grid, McapConfig{}, ChannelConfig{});

    SweepGrid shuffled = grid;
    std::swap(shuffled.points[0], shuffled.points[2]);
    const auto rows2 = sweep(shuffled, McapConfig{}, ChannelConfig{});
    CHECK(reports_equal(rows[0], rows2[2]));
    CHECK(reports_equal(rows[1], rows2[1]));
    CHECK(reports_equal(rows[2], rows2[0]));
}

TEST_CASE("sweep rejects an invalid grid before running") {
    SweepGrid grid;
    SweepPoint p;
    p.m = 0;
    grid.points = {p};
    CHECK_THROWS_AS(sweep(grid, McapConfig{}, ChannelConfig{}), std::invalid_argument);
    grid.points.clear();
    CHECK_THROWS_AS(sweep(grid, McapConfig{}, ChannelConfig{}), std::invalid_argument);
}
