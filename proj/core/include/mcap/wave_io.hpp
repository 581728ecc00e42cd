#pragma once

#include <string>

#include "mcap/dsp.hpp"

namespace mcap {

/// Writes raw little-endian float32 samples to `path` and a JSON sidecar
/// (sample_rate_hz, description) to `path` + ".json".
void write_waveform(const Waveform& w, const std::string& path,
                    const std::string& description = "");

/// Reads a waveform written by write_waveform.
Waveform read_waveform(const std::string& path);

}  // namespace mcap
