// mcap: command-line front end for the m-CAP modem library.
//
//   mcap sweep  --config cfg.json --out results_dir [--seed N] [--quiet]
//   mcap psd    --config cfg.json --out psd.csv [--m N] [--seed N] [--quiet]
//   mcap txwave --config cfg.json --bits prbs:1:4096 --out wave.f32 [--quiet]
//
// Exit codes: 0 success, 2 configuration/validation error, 3 I/O error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcap/harness.hpp"
#include "mcap/sync.hpp"
#include "mcap/wave_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Configuration problems carry a message that names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToolConfig {
    std::string path;
    mcap::McapConfig modem;
    mcap::ChannelConfig channel;
    mcap::SweepGrid grid;
    bool has_sweep = false;
};

template <typename T>
void read_key(const json& obj, const std::string& section, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key + ": wrong type");
    }
}

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError(section + "." + key + ": unknown key");
    }
}

void parse_modem(const json& obj, mcap::McapConfig& cfg) {
    reject_unknown(obj, "modem",
                   {"m", "qam_order", "bandwidth_hz", "rolloff", "oversample", "span",
                    "freq_offset_hz", "train_len"});
    int qam = cfg.spec.order;
    read_key(obj, "modem", "m", cfg.m);
    read_key(obj, "modem", "qam_order", qam);
    read_key(obj, "modem", "bandwidth_hz", cfg.bandwidth);
    read_key(obj, "modem", "rolloff", cfg.rolloff);
    read_key(obj, "modem", "oversample", cfg.oversample);
    read_key(obj, "modem", "span", cfg.span);
    read_key(obj, "modem", "freq_offset_hz", cfg.freq_offset);
    read_key(obj, "modem", "train_len", cfg.train_len);
    if (qam != 4 && qam != 16 && qam != 64)
        throw ConfigError("modem.qam_order: must be 4, 16 or 64");
    cfg.spec = mcap::ConstellationSpec::make(qam);
}

void parse_channel(const json& obj, mcap::ChannelConfig& ch) {
    reject_unknown(obj, "channel",
                   {"led_f3db_hz", "snr_db", "mod_index", "bias", "path_gain",
                    "flicker_enabled", "flicker_fund_hz", "flicker_max_hz",
                    "flicker_rel_db", "seed"});
    read_key(obj, "channel", "led_f3db_hz", ch.led_f3db);
    read_key(obj, "channel", "snr_db", ch.snr_db);
    read_key(obj, "channel", "mod_index", ch.mod_index);
    read_key(obj, "channel", "bias", ch.bias);
    read_key(obj, "channel", "path_gain", ch.path_gain);
    read_key(obj, "channel", "flicker_enabled", ch.flicker_enabled);
    read_key(obj, "channel", "flicker_fund_hz", ch.flicker_fund);
    read_key(obj, "channel", "flicker_max_hz", ch.flicker_max);
    read_key(obj, "channel", "flicker_rel_db", ch.flicker_rel_db);
    read_key(obj, "channel", "seed", ch.seed);
}

void parse_sweep(const json& obj, const ToolConfig& defaults, mcap::SweepGrid& grid) {
    reject_unknown(obj, "sweep", {"base_seed", "symbols_per_point", "points"});
    read_key(obj, "sweep", "base_seed", grid.base_seed);
    read_key(obj, "sweep", "symbols_per_point", grid.symbols_per_point);
    if (!obj.contains("points") || !obj.at("points").is_array() || obj.at("points").empty())
        throw ConfigError("sweep.points: must be a non-empty array");
    for (const auto& p : obj.at("points")) {
        if (!p.is_object()) throw ConfigError("sweep.points: entries must be objects");
        reject_unknown(p, "sweep.points[]",
                       {"m", "qam_order", "snr_db", "led_f3db_hz", "freq_offset_hz",
                        "flicker"});
        mcap::SweepPoint pt;
        pt.m = defaults.modem.m;
        pt.qam_order = defaults.modem.spec.order;
        pt.snr_db = defaults.channel.snr_db;
        pt.led_f3db = defaults.channel.led_f3db;
        pt.freq_offset = defaults.modem.freq_offset;
        pt.flicker = defaults.channel.flicker_enabled;
        read_key(p, "sweep.points[]", "m", pt.m);
        read_key(p, "sweep.points[]", "qam_order", pt.qam_order);
        read_key(p, "sweep.points[]", "snr_db", pt.snr_db);
        read_key(p, "sweep.points[]", "led_f3db_hz", pt.led_f3db);
        read_key(p, "sweep.points[]", "freq_offset_hz", pt.freq_offset);
        read_key(p, "sweep.points[]", "flicker", pt.flicker);
        grid.points.push_back(pt);
    }
    if (grid.symbols_per_point < 1)
        throw ConfigError("sweep.symbols_per_point: must be >= 1");
}

ToolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc, "config", {"modem", "channel", "sweep"});

    ToolConfig cfg;
    cfg.path = path;
    if (doc.contains("modem")) parse_modem(doc.at("modem"), cfg.modem);
    if (doc.contains("channel")) parse_channel(doc.at("channel"), cfg.channel);
    if (doc.contains("sweep")) {
        parse_sweep(doc.at("sweep"), cfg, cfg.grid);
        cfg.has_sweep = true;
    }
    // Library validation throws std::invalid_argument naming the field;
    // surfaced to the user with the config exit code.
    cfg.modem.validate();
    cfg.channel.validate();
    if (cfg.has_sweep) {
        for (const auto& p : cfg.grid.points) {
            mcap::McapConfig mc = cfg.modem;
            mc.m = p.m;
            if (p.qam_order != 4 && p.qam_order != 16 && p.qam_order != 64)
                throw ConfigError("sweep.points[].qam_order: must be 4, 16 or 64");
            mc.spec = mcap::ConstellationSpec::make(p.qam_order);
            mc.freq_offset = p.freq_offset;
            mc.validate();
        }
    }
    return cfg;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

json modem_to_json(const mcap::McapConfig& m) {
    return {{"m", m.m},
            {"qam_order", m.spec.order},
            {"bandwidth_hz", m.bandwidth},
            {"rolloff", m.rolloff},
            {"oversample", m.oversample},
            {"span", m.span},
            {"freq_offset_hz", m.freq_offset},
            {"train_len", m.train_len}};
}

json channel_to_json(const mcap::ChannelConfig& c) {
    json j = {{"led_f3db_hz", c.led_f3db},
              {"mod_index", c.mod_index},
              {"bias", c.bias},
              {"path_gain", c.path_gain},
              {"flicker_enabled", c.flicker_enabled},
              {"flicker_fund_hz", c.flicker_fund},
              {"flicker_max_hz", c.flicker_max},
              {"flicker_rel_db", c.flicker_rel_db},
              {"seed", c.seed}};
    // JSON has no infinity literal; noiseless channels are marked by absence.
    if (std::isfinite(c.snr_db)) j["snr_db"] = c.snr_db;
    return j;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
    if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const fs::path& path, const ToolConfig& cfg, const char* command,
                    const json& extra) {
    json m = {{"command", command},
              {"config_path", cfg.path},
              {"tool_version", MCAP_TOOL_VERSION},
              {"timestamp", timestamp_utc()},
              {"modem", modem_to_json(cfg.modem)},
              {"channel", channel_to_json(cfg.channel)}};
    for (const auto& [k, v] : extra.items()) m[k] = v;
    write_text_file(path, m.dump(2) + "\n");
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              int64_t seed_override, bool quiet) {
    ToolConfig cfg = load_config(config_path);
    if (!cfg.has_sweep) throw ConfigError("sweep: section missing from config");
    if (seed_override >= 0) cfg.grid.base_seed = static_cast<uint64_t>(seed_override);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    if (!quiet)
        std::fprintf(stderr, "sweep: %zu points, %llu symbols each\n",
                     cfg.grid.points.size(),
                     static_cast<unsigned long long>(cfg.grid.symbols_per_point));

    const auto reports = mcap::sweep(cfg.grid, cfg.modem, cfg.channel);

    std::string csv =
        "m,qam_order,snr_db,led_f3db_hz,freq_offset_hz,flicker,symbols,bits_tx,"
        "bit_errors,ber,sync_failures,passes_fec7,passes_fec20,bit_rate_bps\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& p = cfg.grid.points[i];
        const auto& r = reports[i];
        mcap::McapConfig mc = cfg.modem;
        mc.m = p.m;
        mc.spec = mcap::ConstellationSpec::make(p.qam_order);
        mc.freq_offset = p.freq_offset;
        csv += std::to_string(p.m) + "," + std::to_string(p.qam_order) + "," +
               fmt_double(p.snr_db) + "," + fmt_double(p.led_f3db) + "," +
               fmt_double(p.freq_offset) + "," + (p.flicker ? "1" : "0") + "," +
               std::to_string(r.symbols_tx) + "," + std::to_string(r.bits_tx) + "," +
               std::to_string(r.bit_errors) + "," + fmt_double(r.ber) + "," +
               std::to_string(r.sync_failures) + "," + (r.passes_fec7 ? "1" : "0") +
               "," + (r.passes_fec20 ? "1" : "0") + "," +
               fmt_double(mcap::bit_rate(mc)) + "\n";
        if (!quiet)
            std::fprintf(stderr, "  m=%2d M=%2d snr=%sdB  ber=%s\n", p.m, p.qam_order,
                         fmt_double(p.snr_db).c_str(), fmt_double(r.ber).c_str());
    }
    write_text_file(fs::path(out_dir) / "results.csv", csv);

    json points = json::array();
    for (const auto& p : cfg.grid.points) {
        points.push_back({{"m", p.m},
                          {"qam_order", p.qam_order},
                          {"snr_db", p.snr_db},
                          {"led_f3db_hz", p.led_f3db},
                          {"freq_offset_hz", p.freq_offset},
                          {"flicker", p.flicker}});
    }
    write_manifest(fs::path(out_dir) / "manifest.json", cfg, "sweep",
                   {{"base_seed", cfg.grid.base_seed},
                    {"symbols_per_point", cfg.grid.symbols_per_point},
                    {"points", points}});
    return 0;
}

int cmd_psd(const std::string& config_path, int m_override, const std::string& out_path,
            int64_t seed_override, bool quiet) {
    ToolConfig cfg = load_config(config_path);
    if (m_override > 0) {
        cfg.modem.m = m_override;
        cfg.modem.validate();
    }
    const uint64_t seed = seed_override >= 0 ? static_cast<uint64_t>(seed_override)
                                             : cfg.channel.seed;
    cfg.channel.seed = seed;

    // One frame long enough for a stable Welch estimate (~16k-sample total
    // payload regardless of m).
    const uint64_t total_symbols = 40960;
    const uint64_t per_band = (total_symbols + cfg.modem.m - 1) / cfg.modem.m;
    const int b = cfg.modem.spec.bits_per_symbol;
    const auto bits =
        mcap::prbs(static_cast<uint32_t>((seed % 0x7FFF) + 1),
                   per_band * cfg.modem.m * static_cast<uint64_t>(b));
    const auto bank = mcap::build_filter_bank(cfg.modem);
    const auto tx = mcap::transmit(bits, cfg.modem, bank);
    const auto rx = mcap::apply_channel(tx, cfg.channel);
    const auto psd = mcap::welch_psd(rx, 4096);

    std::string csv = "freq_hz,power_db\n";
    for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
        csv += fmt_double(psd.frequencies[k]) + "," + fmt_double(psd.power_db[k]) + "\n";
    }
    write_text_file(out_path, csv);
    write_manifest(out_path + ".manifest.json", cfg, "psd",
                   {{"base_seed", seed}, {"total_symbols", total_symbols}});
    if (!quiet)
        std::fprintf(stderr, "psd: %zu bins, resolution %.1f Hz -> %s\n",
                     psd.frequencies.size(), psd.resolution_bw, out_path.c_str());
    return 0;
}

std::vector<uint8_t> load_bits(const std::string& source, const mcap::McapConfig& cfg) {
    std::vector<uint8_t> bits;
    if (source.rfind("prbs:", 0) == 0) {
        const auto rest = source.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw ConfigError("bits: expected prbs:<seed>:<count>");
        uint32_t seed = 0;
        uint64_t count = 0;
        try {
            seed = static_cast<uint32_t>(std::stoul(rest.substr(0, colon)));
            count = std::stoull(rest.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bits: expected prbs:<seed>:<count> with integers");
        }
        if (count < 1) throw ConfigError("bits: count must be >= 1");
        bits = mcap::prbs(seed, count);
    } else {
        std::ifstream in(source, std::ios::binary);
        if (!in) throw IoError("cannot open bits file: " + source);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        bits.reserve(bytes.size() * 8);
        for (char c : bytes) {
            for (int j = 7; j >= 0; --j)
                bits.push_back((static_cast<uint8_t>(c) >> j) & 1);
        }
        if (bits.empty()) throw ConfigError("bits: file is empty");
    }
    const std::size_t divisor =
        static_cast<std::size_t>(cfg.m) * cfg.spec.bits_per_symbol;
    if (bits.size() % divisor != 0)
        throw ConfigError("bits: count " + std::to_string(bits.size()) +
                          " not divisible by m*log2(qam_order) = " +
                          std::to_string(divisor));
    return bits;
}

int cmd_txwave(const std::string& config_path, const std::string& bits_source,
               const std::string& out_path, bool quiet) {
    ToolConfig cfg = load_config(config_path);
    const auto bits = load_bits(bits_source, cfg.modem);
    const auto bank = mcap::build_filter_bank(cfg.modem);
    const auto wave = mcap::transmit(bits, cfg.modem, bank);
    try {
        mcap::write_waveform(wave, out_path, "m-CAP transmit waveform, bits=" + bits_source);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
    write_manifest(out_path + ".manifest.json", cfg, "txwave",
                   {{"bits_source", bits_source},
                    {"bit_count", bits.size()},
                    {"samples", wave.size()}});
    if (!quiet)
        std::fprintf(stderr, "txwave: %zu bits -> %zu samples -> %s\n", bits.size(),
                     wave.size(), out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"m-CAP modem toolkit"};
    app.set_version_flag("--version", MCAP_TOOL_VERSION);
    app.require_subcommand(1);

    std::string config_path, out_path, bits_source;
    int64_t seed_override = -1;
    int m_override = 0;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub, bool needs_out = true) {
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        if (needs_out) sub->add_option("--out", out_path, "output path")->required();
        sub->add_flag("--quiet", quiet, "suppress progress output");
    };

    auto* sweep = app.add_subcommand("sweep", "run a BER sweep, write results.csv");
    add_common(sweep);
    sweep->add_option("--seed", seed_override, "override the sweep base seed");

    auto* psd = app.add_subcommand("psd", "received-spectrum estimate as CSV");
    add_common(psd);
    psd->add_option("--m", m_override, "override the subband count");
    psd->add_option("--seed", seed_override, "override the channel/data seed");

    auto* txwave = app.add_subcommand("txwave", "write a transmit waveform");
    add_common(txwave);
    txwave->add_option("--bits", bits_source, "bits file or prbs:<seed>:<count>")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(sweep))
            return cmd_sweep(config_path, out_path, seed_override, quiet);
        if (app.got_subcommand(psd))
            return cmd_psd(config_path, m_override, out_path, seed_override, quiet);
        return cmd_txwave(config_path, bits_source, out_path, quiet);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
