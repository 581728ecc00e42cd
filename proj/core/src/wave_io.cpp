#include "mcap/wave_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mcap {

void write_waveform(const Waveform& w, const std::string& path,
                    const std::string& description) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_waveform: cannot open " + path);
    for (double s : w.samples) {
        float v = static_cast<float>(s);
        f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    if (!f) throw std::runtime_error("write_waveform: write failed on " + path);

    nlohmann::json meta;
    meta["sample_rate_hz"] = w.sample_rate;
    meta["description"] = description;
    std::ofstream mf(path + ".json");
    if (!mf) throw std::runtime_error("write_waveform: cannot open " + path + ".json");
    mf << meta.dump(2) << "\n";
}

Waveform read_waveform(const std::string& path) {
    std::ifstream mf(path + ".json");
    if (!mf) throw std::runtime_error("read_waveform: missing sidecar for " + path);
    nlohmann::json meta = nlohmann::json::parse(mf);

    Waveform w;
    w.sample_rate = meta.at("sample_rate_hz").get<double>();
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_waveform: cannot open " + path);
    float v;
    while (f.read(reinterpret_cast<char*>(&v), sizeof(v))) {
        w.samples.push_back(v);
    }
    return w;
}

}  // namespace mcap
