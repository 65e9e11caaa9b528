#pragma once

#include <string>
#include <vector>

#include "sdgs/config.hpp"
#include "sdgs/report.hpp"

namespace sdgs::sensitivity {

// Implementation constants perturbed by the robustness check: the regime
// thresholds, the handover dwell times, the anti-windup limits, and the loss
// probabilities. These are deployment-internal thresholds whose exact values
// should not drive the headline conclusions. Rate/latency endpoints and the
// loop gains are deliberately not in this vector: the headline metrics are
// first-order proportional to them (the delay sweep exists precisely to map
// the gain/delay dependence), so perturbing them measures the knobs, not the
// robustness of the conclusions.
std::vector<std::string> theta_names();

struct Draw {
    int index = 0;
    std::vector<double> epsilons;
    bool unstable = false;
    double dev_goodput_uplift = 0.0;
    double dev_rtt_p95_reduction = 0.0;
    double dev_residual_p95 = 0.0;   // max of TA and CFO closed-loop P95 deviation
};

struct SensitivityResult {
    report::HeadlineMetrics nominal;
    std::vector<Draw> draws;
    double max_dev_goodput_uplift = 0.0;
    double max_dev_rtt_p95_reduction = 0.0;
    double max_dev_residual_p95 = 0.0;
    int n_unstable = 0;
};

// Re-runs the campaign pipeline under n_draws multiplicative +/-20%
// perturbations of theta and reports relative deviations of the headline
// metrics against the nominal run. Unstable draws are flagged and excluded
// from the maxima.
SensitivityResult sensitivity_check(const config::FullConfig& cfg, int n_draws);

std::string to_text_table(const SensitivityResult& r);
std::string to_csv_table(const SensitivityResult& r);

}  // namespace sdgs::sensitivity
