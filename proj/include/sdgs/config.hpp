#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdgs/controller.hpp"
#include "sdgs/geometry.hpp"
#include "sdgs/link_emulator.hpp"
#include "sdgs/telemetry.hpp"
#include "sdgs/uncertainty.hpp"

namespace sdgs::config {

struct RunSpec {
    std::string id;          // A1..A3, B1..B3, D1
    telemetry::Mode mode = telemetry::Mode::EDGE_CONTROLLED;
};

struct PassConfig {
    double min_elevation_deg = 10.0;
    double search_horizon_s = 86400.0;
};

struct CampaignSection {
    std::uint64_t seed = 20260314;
    double duration_cap_s = 600.0;
    int downsample = 20;          // controller ticks per telemetry row
    int jobs = 0;                 // 0 = min(hardware threads, number of runs)
    std::vector<std::string> stations;
};

struct RegimeSection {
    link_emulator::RegimeThresholds thresholds;
    int window_rows = 40;
};

struct MonteCarloSection {
    int n_runs = 1000;
    double window_s = 30.0;
    double warmup_s = 5.0;
};

struct SweepRow {
    double t_fb_ms = 5.0;
    double d_fb_ms = 5.0;
    double quant_tau_us = 0.1;
    double quant_f_hz = 50.0;
};

struct SweepSection {
    int runs_per_row = 50;
    std::vector<SweepRow> rows;
};

struct SensitivitySection {
    int n_draws = 20;
    std::uint64_t seed = 7;
};

struct FullConfig {
    CampaignSection campaign;
    geometry::OrbitElements orbit;
    geometry::LinkConstants link;
    std::map<std::string, geometry::GroundSite> station_catalog;
    uncertainty::UncertaintyConfig uncertainty;
    controller::PidConfig pid;
    RegimeSection regime;
    link_emulator::TransportParams transport;
    link_emulator::StateDwellConfig dwell;
    PassConfig pass;
    MonteCarloSection montecarlo;
    SweepSection sweep;
    SensitivitySection sensitivity;

    std::vector<geometry::GroundSite> campaign_stations() const;
};

// Frozen defaults: one satellite at 550 km / 53 deg, the four campaign
// stations, and the calibrated model constants.
FullConfig default_config();

// Per-station run matrix: A1-A3 edge-controlled, B1-B3 reference, D1 probe.
std::vector<RunSpec> default_run_matrix();

// Parses the TOML-style key-value config format. Unknown keys are errors so
// typos cannot silently fall back to defaults.
FullConfig parse_config_text(const std::string& text);
FullConfig load_config(const std::string& path);

// Renders a FullConfig in the same format parse_config_text accepts.
std::string to_config_text(const FullConfig& cfg);

struct ValidationIssue {
    std::string section;
    std::string message;
};

// Section-by-section invariant check; empty result means valid.
std::vector<ValidationIssue> validate(const FullConfig& cfg);

// Throws std::invalid_argument listing all violations.
void validate_or_throw(const FullConfig& cfg);

}  // namespace sdgs::config
