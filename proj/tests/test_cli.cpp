#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "sdgs/sha256.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SDGS_SIM_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

// A trimmed campaign so CLI round trips stay fast.
void write_small_config(const fs::path& path, const std::string& extra = "") {
    std::ofstream out(path);
    out << R"([campaign]
stations = ["shenzhen"]
duration_cap_s = 40.0

[handover]
t_warn_s = 18.0
t_warm_s = 8.0
t_switch_s = 0.5

[montecarlo]
n_runs = 30
window_s = 10.0
warmup_s = 2.0

[sweep]
runs_per_row = 3

[sensitivity]
n_draws = 1
)" << extra;
}

}  // namespace

TEST_CASE("validate accepts the bundled default config") {
    CHECK(run_cli(std::string("validate --config ") + SDGS_DEFAULT_CONFIG) == 0);
}

TEST_CASE("missing config file exits 2") {
    CHECK(run_cli("validate --config /nonexistent/sdgs.toml") == 2);
    CHECK(run_cli("run --config /nonexistent/sdgs.toml") == 2);
}

TEST_CASE("validate rejects invariant violations with exit 2") {
    TempDir tmp("sdgs_cli_validate");
    const auto cfg = tmp.path / "bad.toml";
    write_small_config(cfg, "\n[regime]\ntau_cp_s = 0.0\n");
    CHECK(run_cli("validate --config " + cfg.string()) == 2);
}

TEST_CASE("unknown key is a config error") {
    TempDir tmp("sdgs_cli_unknown");
    const auto cfg = tmp.path / "bad.toml";
    std::ofstream(cfg) << "[controller]\nbogus = 1\n";
    CHECK(run_cli("validate --config " + cfg.string()) == 2);
    CHECK(run_cli("montecarlo --config " + cfg.string()) == 2);
}

TEST_CASE("run produces telemetry, sidecars and the four report tables") {
    TempDir tmp("sdgs_cli_run");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    const auto out = tmp.path / "out";
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 0);

    int csv_files = 0;
    int sidecars = 0;
    for (const auto& entry : fs::directory_iterator(out / "telemetry")) {
        if (entry.path().extension() == ".csv") ++csv_files;
        if (entry.path().extension() == ".json") ++sidecars;
    }
    CHECK(csv_files == 7);   // one station x A1-A3,B1-B3,D1
    CHECK(sidecars == 7);
    for (const char* name :
         {"table1_steady_state", "table2_cross_station", "table3_reconciliation",
          "table4_transients"}) {
        CHECK(fs::exists(out / "reports" / (std::string(name) + ".txt")));
        CHECK(fs::exists(out / "reports" / (std::string(name) + ".csv")));
    }
    CHECK(fs::exists(out / "reports" / "probe_check.txt"));

    // report subcommand regenerates from the stored telemetry.
    CHECK(run_cli("report --config " + cfg.string() + " --out " + out.string()) == 0);
}

TEST_CASE("seed override is deterministic across invocations") {
    TempDir tmp("sdgs_cli_seed");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    const auto out_a = tmp.path / "a";
    const auto out_b = tmp.path / "b";
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out_a.string() +
                    " --seed-override 7") == 0);
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out_b.string() +
                    " --seed-override 7 --jobs 1") == 0);
    for (const auto& entry : fs::directory_iterator(out_a / "telemetry")) {
        if (entry.path().extension() != ".csv") continue;
        const auto other = out_b / "telemetry" / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(sdgs::sha256_file_hex(entry.path().string()) ==
              sdgs::sha256_file_hex(other.string()));
    }
}

TEST_CASE("montecarlo and sweep emit their tables") {
    TempDir tmp("sdgs_cli_mc");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    const auto out = tmp.path / "out";
    REQUIRE(run_cli("montecarlo --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "montecarlo.csv"));
    std::ifstream in(out / "montecarlo.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "metric,p50,p95,p99");
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 4);   // TA/CFO x open/closed

    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "sweep.csv"));
    std::ifstream sweep_in(out / "sweep.csv");
    std::getline(sweep_in, header);
    CHECK(header == "t_fb_ms,d_fb_ms,quant_tau_us,quant_f_hz,ta_p95_us,cfo_p95_hz,stable");
}

TEST_CASE("validate reads a config from stdin") {
    TempDir tmp("sdgs_cli_stdin");
    const auto cfg = tmp.path / "ok.toml";
    write_small_config(cfg);
    const std::string cmd = std::string("cat ") + cfg.string() + " | " + SDGS_SIM_BINARY +
                            " validate --config - > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string bad =
        std::string("echo '[regime]' 'tau_cp_s = 0' | tr ' ' '\\n' | ") + SDGS_SIM_BINARY +
        " validate --config - > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}

TEST_CASE("report without stored telemetry is a runtime failure") {
    TempDir tmp("sdgs_cli_noreport");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    CHECK(run_cli("report --config " + cfg.string() + " --out " + (tmp.path / "empty").string()) ==
          3);
}

TEST_CASE("SDGS_SIM_SEED env var seeds the campaign when no override is given") {
    TempDir tmp("sdgs_cli_env");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    const auto out_env = tmp.path / "env";
    const auto out_flag = tmp.path / "flag";
    const std::string env_cmd = std::string("SDGS_SIM_SEED=1234 ") + SDGS_SIM_BINARY +
                                " run --config " + cfg.string() + " --out " + out_env.string() +
                                " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out_flag.string() +
                    " --seed-override 1234") == 0);
    for (const auto& entry : fs::directory_iterator(out_env / "telemetry")) {
        if (entry.path().extension() != ".csv") continue;
        const auto other = out_flag / "telemetry" / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(sdgs::sha256_file_hex(entry.path().string()) ==
              sdgs::sha256_file_hex(other.string()));
    }
}

TEST_CASE("sensitivity with zero draws emits an empty table and exits 0") {
    TempDir tmp("sdgs_cli_sens");
    const auto cfg = tmp.path / "small.toml";
    write_small_config(cfg);
    const auto out = tmp.path / "out";
    REQUIRE(run_cli("sensitivity --config " + cfg.string() + " --out " + out.string() +
                    " --draws 0") == 0);
    std::ifstream in(out / "sensitivity.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "draw,unstable,dev_goodput_uplift,dev_rtt_p95_reduction,dev_residual_p95");
    std::string rest;
    std::getline(in, rest);
    CHECK(rest.empty());
}
