#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdgs/config.hpp"
#include "sdgs/stats.hpp"
#include "sdgs/telemetry.hpp"

namespace sdgs::campaign {

// Per-station observation window: the tail of the best pass found in the
// search horizon, capped at the configured duration and ending at loss of
// signal. A/B/D runs of one station share this window exactly.
struct StationWindow {
    std::string station_key;
    geometry::GroundSite site;
    double start_t_s = 0.0;
    double end_t_s = 0.0;      // loss-of-signal time
    double max_elevation_deg = 0.0;
};

StationWindow compute_station_window(const config::FullConfig& cfg,
                                     const std::string& station_key);

struct RunResult {
    std::string station_key;
    config::RunSpec spec;
    std::uint64_t seed = 0;
    std::vector<telemetry::TelemetryRow> rows;
    bool diverged = false;
};

struct CampaignDataset {
    std::vector<StationWindow> windows;
    std::vector<RunResult> runs;   // ordered by station, then run id
};

// Runs the full station x run matrix. Per-run RNG streams derive from the
// campaign seed and the (station, run) id, so results are independent of
// scheduling order and --jobs.
CampaignDataset run_campaign(const config::FullConfig& cfg);

// Writes one CSV + JSON sidecar per run under out_dir/telemetry.
void write_dataset(const CampaignDataset& ds, const std::string& out_dir,
                   const std::string& config_hash);

// Reads a previously written dataset back (for report regeneration).
CampaignDataset read_dataset(const config::FullConfig& cfg, const std::string& out_dir);

// Exactly the NORMAL-handover-state rows, order preserved.
std::vector<telemetry::TelemetryRow> steady_state_filter(
    const std::vector<telemetry::TelemetryRow>& rows);

// Per-run statistics over the steady-state (NORMAL) rows; percentiles are
// nearest-rank. Throws if the run has no steady-state coverage.
struct RunSummary {
    std::string run_id;
    std::string station_key;
    telemetry::Mode mode = telemetry::Mode::EDGE_CONTROLLED;
    std::size_t n_rows_total = 0;
    std::size_t n_rows_normal = 0;
    double goodput_mean = 0.0;
    double goodput_std = 0.0;
    double rtt_mean = 0.0;
    double rtt_p95 = 0.0;
    double rtt_p99 = 0.0;
    double ta_p95_us = 0.0;    // active residual |dtau|
    double cfo_p95_hz = 0.0;   // active residual |dcfo|
};

RunSummary summarize_run(const RunResult& run);

// Group statistics: per-run statistic first, then mean +/- sample std across
// the group's runs (std is NaN for a single-run group).
struct GroupSummary {
    std::size_t n_runs = 0;
    stats::MeanStd goodput_mean;
    stats::MeanStd rtt_mean;
    stats::MeanStd rtt_p95;
    stats::MeanStd rtt_p99;
    stats::MeanStd ta_p95_us;
    stats::MeanStd cfo_p95_hz;
};

GroupSummary summarize_group(const std::vector<RunSummary>& runs);

// Handover-state row counts and percentages for the edge-controlled and
// reference groups (probe runs excluded).
struct TransientCounts {
    std::map<std::string, std::size_t> controlled;
    std::map<std::string, std::size_t> reference;
    std::size_t controlled_total = 0;
    std::size_t reference_total = 0;

    double fraction(telemetry::Mode mode, const std::string& state) const;
};

TransientCounts transient_counts(const CampaignDataset& ds);

// Summaries of one station/mode group; helper for tables and acceptance.
std::vector<RunSummary> summarize_matching(const CampaignDataset& ds,
                                           const std::string& station_key, telemetry::Mode mode);

}  // namespace sdgs::campaign
