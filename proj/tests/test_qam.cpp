#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mcap/qam.hpp"

using namespace mcap;

namespace {

// All M constellation points with their bit labels, generated through the
// mapper itself (used for adjacency and round-trip checks), plus an
// exhaustive nearest-point search oracle for demapping.
std::vector<std::pair<std::vector<uint8_t>, ComplexSymbol>> all_points(
    const ConstellationSpec& spec) {
    std::vector<std::pair<std::vector<uint8_t>, ComplexSymbol>> out;
    const int b = spec.bits_per_symbol;
    for (int v = 0; v < spec.order; ++v) {
        std::vector<uint8_t> bits(b);
        for (int i = 0; i < b; ++i) bits[i] = (v >> (b - 1 - i)) & 1;
        out.emplace_back(bits, map_bits(bits, spec)[0]);
    }
    return out;
}

std::vector<uint8_t> nearest_point_oracle(const ComplexSymbol& s,
                                          const ConstellationSpec& spec) {
    auto points = all_points(spec);
    // Visit smaller levels first so an exact tie resolves toward them.
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
        if (a.second.real() != b.second.real()) return a.second.real() < b.second.real();
        return a.second.imag() < b.second.imag();
    });
    double best = 1e300;
    std::vector<uint8_t> bits;
    for (const auto& [label, p] : points) {
        const double d = std::norm(s - p);
        if (d < best) {
            best = d;
            bits = label;
        }
    }
    return bits;
}

}  // namespace

TEST_CASE("constellation normalization and spec fields") {
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        CHECK(spec.bits_per_symbol == static_cast<int>(std::log2(order)));
        CHECK(spec.normalization ==
              doctest::Approx(std::sqrt(2.0 * (order - 1) / 3.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ConstellationSpec::make(32), std::invalid_argument);
}

TEST_CASE("map_bits reference points") {
    const auto q4 = ConstellationSpec::make(4);
    const auto s4 = map_bits({0, 0}, q4)[0];
    CHECK(s4.real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s4.imag() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const auto q16 = ConstellationSpec::make(16);
    const auto s16 = map_bits({0, 0, 0, 0}, q16)[0];
    CHECK(s16.real() == doctest::Approx(-3.0 / std::sqrt(10.0)).epsilon(1e-12));
    CHECK(s16.imag() == doctest::Approx(-3.0 / std::sqrt(10.0)).epsilon(1e-12));

    CHECK_THROWS_AS(map_bits({0, 0, 0}, q16), std::invalid_argument);
}

TEST_CASE("constellation mean energy is exactly 1") {
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        double e = 0.0;
        for (const auto& [bits, p] : all_points(spec)) e += std::norm(p);
        CHECK(e / order == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Gray adjacency: one bit flip between axis neighbours") {
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        const auto points = all_points(spec);
        const double step = 2.0 / spec.normalization;
        for (const auto& [ba, pa] : points) {
            for (const auto& [bb, pb] : points) {
                const bool adj_i = std::abs(pa.real() - pb.real()) < step * 1.01 &&
                                   std::abs(pa.real() - pb.real()) > step * 0.99 &&
                                   std::abs(pa.imag() - pb.imag()) < 1e-9;
                const bool adj_q = std::abs(pa.imag() - pb.imag()) < step * 1.01 &&
                                   std::abs(pa.imag() - pb.imag()) > step * 0.99 &&
                                   std::abs(pa.real() - pb.real()) < 1e-9;
                if (!adj_i && !adj_q) continue;
                int diff = 0;
                for (std::size_t i = 0; i < ba.size(); ++i) diff += ba[i] != bb[i];
                CHECK(diff == 1);
            }
        }
    }
}

TEST_CASE("demap inverts map exhaustively and on random streams") {
    std::mt19937 rng(3);
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        for (const auto& [bits, p] : all_points(spec)) {
            CHECK(demap_symbols({p}, spec) == bits);
        }
        std::vector<uint8_t> bits(3000 * spec.bits_per_symbol);
        for (auto& b : bits) b = rng() & 1;
        CHECK(demap_symbols(map_bits(bits, spec), spec) == bits);
    }
}

TEST_CASE("demap far outside the grid snaps to the nearest corner") {
    const auto spec = ConstellationSpec::make(4);
    const auto bits = demap_symbols({ComplexSymbol(10.0, 10.0)}, spec);
    CHECK(bits == std::vector<uint8_t>{1, 1});
}

TEST_CASE("demap matches the exhaustive nearest-point oracle") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        for (int trial = 0; trial < 500; ++trial) {
            const ComplexSymbol s(dist(rng), dist(rng));
            CHECK(demap_symbols({s}, spec) == nearest_point_oracle(s, spec));
        }
    }
}

TEST_CASE("random bit streams give unit mean symbol power") {
    std::mt19937 rng(23);
    for (int order : {4, 16, 64}) {
        const auto spec = ConstellationSpec::make(order);
        std::vector<uint8_t> bits(50000 * spec.bits_per_symbol);
        for (auto& b : bits) b = rng() & 1;
        const auto symbols = map_bits(bits, spec);
        double p = 0.0;
        for (const auto& s : symbols) p += std::norm(s);
        CHECK(p / symbols.size() == doctest::Approx(1.0).epsilon(0.02));
    }
}
