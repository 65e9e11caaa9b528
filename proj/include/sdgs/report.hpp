#pragma once

#include <string>
#include <vector>

#include "sdgs/campaign.hpp"
#include "sdgs/montecarlo.hpp"

namespace sdgs::report {

// Headline conclusions of one campaign dataset, computed over steady-state
// rows: artifact-goodput uplift and P95 RTT reduction at the primary
// station, and the cross-station closed-loop residual P95 means.
struct HeadlineMetrics {
    double goodput_uplift = 0.0;        // (controlled - reference) / reference
    double rtt_p95_reduction = 0.0;     // (reference - controlled) / reference
    double ta_closed_p95_us = 0.0;
    double cfo_closed_p95_hz = 0.0;
};

HeadlineMetrics headline_metrics(const campaign::CampaignDataset& ds,
                                 const config::FullConfig& cfg);

struct Table {
    std::string name;
    std::string text;
    std::string csv;
};

struct Report {
    Table steady_state;      // primary-station reference vs edge-controlled
    Table cross_station;     // per-station uplift and closed-loop residuals
    Table reconciliation;    // model-based vs campaign residual P95
    Table transients;        // handover-state row counts per mode
    std::string probe_check; // D1 probe-vs-A-group RTT fidelity line
};

// Requires every station to carry complete A and B groups; refuses to emit
// otherwise, naming the missing run group.
Report emit_tables(const campaign::CampaignDataset& ds,
                   const montecarlo::ResidualDistributions& mc, const config::FullConfig& cfg);

// Writes <name>.txt and <name>.csv per table under out_dir/reports.
void write_report(const Report& report, const std::string& out_dir);

}  // namespace sdgs::report
