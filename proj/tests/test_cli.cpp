#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kBin = MCAP_TOOL_BIN;

struct CmdResult {
    int exit_code;
    std::string stderr_text;
};

CmdResult run_cmd(const std::string& args) {
    const fs::path err = fs::temp_directory_path() / "mcap_cli_test_stderr.txt";
    const int status = std::system((kBin + " " + args + " 2>" + err.string()).c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(err);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& body) {
    const fs::path p = fs::temp_directory_path() / "mcap_cli_test_cfg.json";
    std::ofstream out(p);
    out << body;
    return p;
}

const char* kSmallSweep = R"({
  "channel": {"snr_db": 16.0, "led_f3db_hz": 4.5e6},
  "sweep": {"base_seed": 1, "symbols_per_point": 20000,
            "points": [{"m": 1, "qam_order": 4},
                       {"m": 4, "qam_order": 16},
                       {"m": 8, "qam_order": 64}]}
})";

}  // namespace

TEST_CASE("sweep writes one CSV row per grid point plus the header") {
    const auto cfg = write_config(kSmallSweep);
    const fs::path out = fs::temp_directory_path() / "mcap_cli_test_sweep";
    fs::remove_all(out);
    const auto r = run_cmd("sweep --config " + cfg.string() + " --out " + out.string() +
                           " --quiet");
    REQUIRE(r.exit_code == 0);

    std::ifstream csv(out / "results.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line ==
          "m,qam_order,snr_db,led_f3db_hz,freq_offset_hz,flicker,symbols,bits_tx,"
          "bit_errors,ber,sync_failures,passes_fec7,passes_fec20,bit_rate_bps");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(out / "manifest.json"));
    fs::remove_all(out);
}

TEST_CASE("invalid subband count exits 2 and names the field") {
    const auto cfg = write_config(R"({"modem": {"m": 0}})");
    const auto r = run_cmd("sweep --config " + cfg.string() + " --out /tmp/unused");
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("m") != std::string::npos);
}

TEST_CASE("unknown config key exits 2 and is named") {
    const auto cfg = write_config(R"({"modem": {"bandwith_hz": 6.5e6}})");
    const auto r = run_cmd("sweep --config " + cfg.string() + " --out /tmp/unused");
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("bandwith_hz") != std::string::npos);
}

TEST_CASE("missing config file exits 3") {
    const auto r = run_cmd("sweep --config /nonexistent/cfg.json --out /tmp/unused");
    CHECK(r.exit_code == 3);
}

TEST_CASE("sweep rerun is byte-identical") {
    const auto cfg = write_config(kSmallSweep);
    const fs::path a = fs::temp_directory_path() / "mcap_cli_test_a";
    const fs::path b = fs::temp_directory_path() / "mcap_cli_test_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(run_cmd("sweep --config " + cfg.string() + " --out " + a.string() +
                    " --quiet").exit_code == 0);
    REQUIRE(run_cmd("sweep --config " + cfg.string() + " --out " + b.string() +
                    " --quiet").exit_code == 0);
    const auto ca = slurp(a / "results.csv");
    CHECK(!ca.empty());
    CHECK(ca == slurp(b / "results.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("txwave rejects a bit count not divisible by m*log2(M)") {
    const auto cfg = write_config(R"({"modem": {"m": 5, "qam_order": 16}})");
    const auto r = run_cmd("txwave --config " + cfg.string() +
                           " --bits prbs:1:1001 --out /tmp/unused.f32");
    CHECK(r.exit_code == 2);
}

TEST_CASE("txwave output length matches the frame-length prediction") {
    const auto cfg = write_config(R"({"modem": {"m": 2, "qam_order": 4}})");
    const fs::path out = fs::temp_directory_path() / "mcap_cli_test_wave.f32";
    const auto r = run_cmd("txwave --config " + cfg.string() +
                           " --bits prbs:1:400 --out " + out.string() + " --quiet");
    REQUIRE(r.exit_code == 0);
    // 400 bits / (2 bits * 2 bands) = 100 payload symbols per band; default
    // modem: train_len 32, span 40, sps 8.
    const std::size_t expected_samples = (32 + 100 - 1) * 8 + (40 * 8 + 1);
    CHECK(fs::file_size(out) == expected_samples * sizeof(float));
    fs::remove(out);
    fs::remove(out.string() + ".json");
    fs::remove(out.string() + ".manifest.json");
}

TEST_CASE("psd writes a two-column CSV covering dc to Nyquist") {
    const auto cfg = write_config(R"({"modem": {"m": 5, "qam_order": 4}})");
    const fs::path out = fs::temp_directory_path() / "mcap_cli_test_psd.csv";
    const auto r = run_cmd("psd --config " + cfg.string() + " --out " + out.string() +
                           " --quiet");
    REQUIRE(r.exit_code == 0);
    std::ifstream csv(out);
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "freq_hz,power_db");
    double last_freq = -1.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double f = std::stod(line.substr(0, comma));
        CHECK(f > last_freq);
        last_freq = f;
        ++rows;
    }
    CHECK(rows > 100);
    // Nyquist for the default 6.5 MHz / 0.15 / 4x configuration.
    CHECK(last_freq == doctest::Approx(4.0 * 6.5e6 / 1.15 / 2.0).epsilon(1e-9));
    fs::remove(out);
    fs::remove(out.string() + ".manifest.json");
}
