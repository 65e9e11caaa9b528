#pragma once

#include <string>
#include <vector>

#include "sdgs/config.hpp"

namespace sdgs::sweep {

struct SweepResultRow {
    config::SweepRow knobs;
    double ta_p95_us = 0.0;
    double cfo_p95_hz = 0.0;
    bool stable = true;
};

// Closed-loop P95 per feedback period / delay / quantization configuration,
// pooled over runs_per_row seeded runs of the model scenario. Rows whose
// loop diverges are marked unstable instead of aborting the sweep.
std::vector<SweepResultRow> delay_quantization_sweep(const config::FullConfig& cfg);

std::string to_text_table(const std::vector<SweepResultRow>& rows);
std::string to_csv_table(const std::vector<SweepResultRow>& rows);

}  // namespace sdgs::sweep
