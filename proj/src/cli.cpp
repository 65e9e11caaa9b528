#include "sdgs/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdgs/campaign.hpp"
#include "sdgs/config.hpp"
#include "sdgs/montecarlo.hpp"
#include "sdgs/report.hpp"
#include "sdgs/sensitivity.hpp"
#include "sdgs/sha256.hpp"
#include "sdgs/sweep.hpp"

namespace sdgs::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    int jobs = -1;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_out) {
    cmd->add_option("--config", opts.config_path, "configuration file")->required();
    if (needs_out) {
        cmd->add_option("--out", opts.out_dir, "output directory");
    }
    cmd->add_option("--seed-override", opts.seed_override,
                    "override the campaign seed (SDGS_SIM_SEED is the env fallback)");
    cmd->add_option("--jobs", opts.jobs, "parallel runs (default: min(cores, runs))");
    cmd->add_option("--format", opts.format, "stdout table format")
        ->check(CLI::IsMember({"csv", "text"}));
}

// Loads + validates, applying seed overrides. Throws std::invalid_argument /
// std::runtime_error on config problems.
config::FullConfig load_effective_config(const CommonOptions& opts) {
    if (!fs::exists(opts.config_path)) {
        throw std::invalid_argument("config file does not exist: " + opts.config_path);
    }
    config::FullConfig cfg = config::load_config(opts.config_path);
    if (opts.seed_override.has_value()) {
        cfg.campaign.seed = *opts.seed_override;
    } else if (const char* env = std::getenv("SDGS_SIM_SEED")) {
        cfg.campaign.seed = std::stoull(env);
    }
    if (opts.jobs >= 0) {
        cfg.campaign.jobs = opts.jobs;
    }
    config::validate_or_throw(cfg);
    std::cout << "effective campaign seed: " << cfg.campaign.seed << "\n";
    return cfg;
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

int cmd_validate(const CommonOptions& opts) {
    config::FullConfig cfg;
    try {
        if (opts.config_path == "-") {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            cfg = config::parse_config_text(buf.str());
        } else if (!fs::exists(opts.config_path)) {
            std::cerr << "FAIL config: file does not exist: " << opts.config_path << "\n";
            return kExitConfig;
        } else {
            cfg = config::load_config(opts.config_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "FAIL parse: " << e.what() << "\n";
        return kExitConfig;
    }
    const auto issues = config::validate(cfg);
    const char* sections[] = {"campaign", "orbit",     "link",  "uncertainty", "controller",
                              "regime",   "transport", "handover", "pass",     "montecarlo",
                              "sweep",    "sensitivity"};
    bool any_fail = false;
    for (const char* section : sections) {
        bool failed = false;
        for (const auto& issue : issues) {
            if (issue.section == section) {
                std::cout << "FAIL " << section << ": " << issue.message << "\n";
                failed = true;
                any_fail = true;
            }
        }
        if (!failed) std::cout << "PASS " << section << "\n";
    }
    for (const auto& issue : issues) {
        if (issue.section.rfind("station.", 0) == 0) {
            std::cout << "FAIL " << issue.section << ": " << issue.message << "\n";
            any_fail = true;
        }
    }
    return any_fail ? kExitConfig : kExitOk;
}

int cmd_run(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    const std::string config_hash = sha256_file_hex(opts.config_path);

    const auto ds = campaign::run_campaign(cfg);
    campaign::write_dataset(ds, opts.out_dir, config_hash);

    const auto mc = montecarlo::monte_carlo_residuals(cfg);
    const auto report = report::emit_tables(ds, mc, cfg);
    report::write_report(report, opts.out_dir);
    write_text_file(fs::path(opts.out_dir) / "reports" / "montecarlo.txt",
                    montecarlo::to_text_table(mc));
    write_text_file(fs::path(opts.out_dir) / "reports" / "montecarlo.csv",
                    montecarlo::to_csv_table(mc));

    if (opts.format == "csv") {
        std::cout << report.steady_state.csv << "\n"
                  << report.cross_station.csv << "\n"
                  << report.reconciliation.csv << "\n"
                  << report.transients.csv;
    } else {
        std::cout << report.steady_state.text << "\n"
                  << report.cross_station.text << "\n"
                  << report.reconciliation.text << "\n"
                  << report.transients.text << "\n"
                  << report.probe_check;
    }
    std::cout << "artifacts written under " << opts.out_dir << " (" << ds.runs.size()
              << " runs)\n";
    return kExitOk;
}

int cmd_report(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    const auto ds = campaign::read_dataset(cfg, opts.out_dir);
    const auto mc = montecarlo::monte_carlo_residuals(cfg);
    const auto report = report::emit_tables(ds, mc, cfg);
    report::write_report(report, opts.out_dir);
    std::cout << (opts.format == "csv" ? report.steady_state.csv : report.steady_state.text);
    return kExitOk;
}

int cmd_montecarlo(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    const auto mc = montecarlo::monte_carlo_residuals(cfg);
    write_text_file(fs::path(opts.out_dir) / "montecarlo.txt", montecarlo::to_text_table(mc));
    write_text_file(fs::path(opts.out_dir) / "montecarlo.csv", montecarlo::to_csv_table(mc));
    std::cout << (opts.format == "csv" ? montecarlo::to_csv_table(mc)
                                       : montecarlo::to_text_table(mc));
    return kExitOk;
}

int cmd_sweep(const CommonOptions& opts) {
    const auto cfg = load_effective_config(opts);
    const auto rows = sweep::delay_quantization_sweep(cfg);
    write_text_file(fs::path(opts.out_dir) / "sweep.txt", sweep::to_text_table(rows));
    write_text_file(fs::path(opts.out_dir) / "sweep.csv", sweep::to_csv_table(rows));
    std::cout << (opts.format == "csv" ? sweep::to_csv_table(rows) : sweep::to_text_table(rows));
    return kExitOk;
}

int cmd_sensitivity(const CommonOptions& opts, int draws_override) {
    const auto cfg = load_effective_config(opts);
    const int n_draws = draws_override >= 0 ? draws_override : cfg.sensitivity.n_draws;
    const auto result = sensitivity::sensitivity_check(cfg, n_draws);
    write_text_file(fs::path(opts.out_dir) / "sensitivity.txt",
                    sensitivity::to_text_table(result));
    write_text_file(fs::path(opts.out_dir) / "sensitivity.csv",
                    sensitivity::to_csv_table(result));
    std::cout << (opts.format == "csv" ? sensitivity::to_csv_table(result)
                                       : sensitivity::to_text_table(result));
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"sdgs-sim: LEO uplink residual-control chain simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, mc_opts, sweep_opts, sens_opts, report_opts, validate_opts;
    int draws_override = -1;

    auto* c_run = app.add_subcommand("run", "run the full campaign and emit tables");
    add_common(c_run, run_opts, true);
    auto* c_mc = app.add_subcommand("montecarlo", "residual TA/CFO distribution summary");
    add_common(c_mc, mc_opts, true);
    auto* c_sweep = app.add_subcommand("sweep", "feedback delay/quantization sweep");
    add_common(c_sweep, sweep_opts, true);
    auto* c_sens = app.add_subcommand("sensitivity", "implementation-constant robustness check");
    add_common(c_sens, sens_opts, true);
    c_sens->add_option("--draws", draws_override, "override the number of perturbation draws");
    auto* c_report = app.add_subcommand("report", "regenerate tables from stored telemetry");
    add_common(c_report, report_opts, true);
    auto* c_validate = app.add_subcommand("validate", "check a config file without running");
    add_common(c_validate, validate_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (c_validate->parsed()) return cmd_validate(validate_opts);
        if (c_run->parsed()) return cmd_run(run_opts);
        if (c_mc->parsed()) return cmd_montecarlo(mc_opts);
        if (c_sweep->parsed()) return cmd_sweep(sweep_opts);
        if (c_sens->parsed()) return cmd_sensitivity(sens_opts, draws_override);
        if (c_report->parsed()) return cmd_report(report_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace sdgs::cli
