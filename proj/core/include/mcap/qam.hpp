#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mcap {

using ComplexSymbol = std::complex<double>;

/// Square Gray-coded QAM constellation, average energy 1.
struct ConstellationSpec {
    int order = 4;            // M, one of {4, 16, 64}
    int bits_per_symbol = 2;  // log2(M)
    double normalization = 0; // sqrt(2(M-1)/3)

    static ConstellationSpec make(int order);
};

/// Maps bits to symbols; first half of each group drives the I axis,
/// second half the Q axis, per-axis Gray order.
std::vector<ComplexSymbol> map_bits(const std::vector<uint8_t>& bits,
                                    const ConstellationSpec& spec);

/// Hard-decision nearest-point demapping; ties break toward the smaller level.
std::vector<uint8_t> demap_symbols(const std::vector<ComplexSymbol>& symbols,
                                   const ConstellationSpec& spec);

}  // namespace mcap
