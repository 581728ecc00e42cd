#include "mcap/qam.hpp"

#include <cmath>
#include <stdexcept>

namespace mcap {

namespace {

// Gray code of rank i; rank of a gray code is the inverse.
int gray_encode(int i) { return i ^ (i >> 1); }

int gray_rank(int code) {
    int rank = 0;
    while (code) {
        rank ^= code;
        code >>= 1;
    }
    return rank;
}

// Bits (MSB first) -> amplitude level in {-(K-1), ..., +(K-1)}.
int bits_to_level(const uint8_t* bits, int nbits) {
    int code = 0;
    for (int i = 0; i < nbits; ++i) code = (code << 1) | (bits[i] & 1);
    int rank = gray_rank(code);
    int levels = 1 << nbits;
    return -(levels - 1) + 2 * rank;
}

void level_to_bits(int level, int nbits, uint8_t* out) {
    int levels = 1 << nbits;
    int rank = (level + levels - 1) / 2;
    int code = gray_encode(rank);
    for (int i = 0; i < nbits; ++i) {
        out[i] = static_cast<uint8_t>((code >> (nbits - 1 - i)) & 1);
    }
}

// Nearest odd-integer level; exact midpoints resolve to the smaller level.
int quantize_level(double v, int levels) {
    double shifted = (v + levels - 1) / 2.0;
    int rank = static_cast<int>(std::ceil(shifted - 0.5));
    if (rank < 0) rank = 0;
    if (rank > levels - 1) rank = levels - 1;
    return -(levels - 1) + 2 * rank;
}

}  // namespace

ConstellationSpec ConstellationSpec::make(int order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("ConstellationSpec: order must be 4, 16 or 64");
    ConstellationSpec spec;
    spec.order = order;
    spec.bits_per_symbol = static_cast<int>(std::lround(std::log2(order)));
    spec.normalization = std::sqrt(2.0 * (order - 1) / 3.0);
    return spec;
}

std::vector<ComplexSymbol> map_bits(const std::vector<uint8_t>& bits,
                                    const ConstellationSpec& spec) {
    const int b = spec.bits_per_symbol;
    if (bits.size() % b != 0)
        throw std::invalid_argument("map_bits: bit count not divisible by bits_per_symbol");
    const int half = b / 2;
    std::vector<ComplexSymbol> out;
    out.reserve(bits.size() / b);
    for (std::size_t i = 0; i < bits.size(); i += b) {
        int li = bits_to_level(&bits[i], half);
        int lq = bits_to_level(&bits[i + half], half);
        out.emplace_back(li / spec.normalization, lq / spec.normalization);
    }
    return out;
}

std::vector<uint8_t> demap_symbols(const std::vector<ComplexSymbol>& symbols,
                                   const ConstellationSpec& spec) {
    const int b = spec.bits_per_symbol;
    const int half = b / 2;
    const int levels = 1 << half;
    std::vector<uint8_t> out(symbols.size() * b);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        int li = quantize_level(symbols[i].real() * spec.normalization, levels);
        int lq = quantize_level(symbols[i].imag() * spec.normalization, levels);
        level_to_bits(li, half, &out[i * b]);
        level_to_bits(lq, half, &out[i * b + half]);
    }
    return out;
}

}  // namespace mcap
