#pragma once

#include "sdgs/config.hpp"
#include "sdgs/uncertainty.hpp"

namespace sdgs::montecarlo {

// Open- and closed-loop residual distributions pooled over seeded runs of
// the model scenario (first campaign station, window centered on the best
// pass peak). Closed-loop pooling skips the configured warm-up so the
// reported figures describe settled tracking.
struct ResidualDistributions {
    uncertainty::PercentileSummary ta_open_us;
    uncertainty::PercentileSummary cfo_open_hz;
    uncertainty::PercentileSummary ta_closed_us;
    uncertainty::PercentileSummary cfo_closed_hz;
    std::size_t pooled_open = 0;
    std::size_t pooled_closed = 0;
};

uncertainty::McScenario scenario_from_config(const config::FullConfig& cfg);

ResidualDistributions monte_carlo_residuals(const config::FullConfig& cfg);

std::string to_text_table(const ResidualDistributions& d);
std::string to_csv_table(const ResidualDistributions& d);

}  // namespace sdgs::montecarlo
