#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "sdgs/rng.hpp"

namespace sdgs::link_emulator {

struct RegimeThresholds {
    double tau_cp_s = 1.0e-6;
    double f_scs_hz = 300.0;
};

void validate(const RegimeThresholds& th);

enum class Regime { NOMINAL, DEGRADED };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

// Threshold rule, boundary inclusive: NOMINAL iff |dtau| <= tau_cp and
// |dcfo| <= f_scs.
Regime classify_regime(double dtau_s, double dcfo_hz, const RegimeThresholds& th);

// Transport behavior per regime. Degraded adds the retransmission latency
// term and switches to the degraded rate/jitter/loss set.
struct TransportParams {
    double rate_nominal_mbps = 197.6;
    double rate_degraded_mbps = 80.1;
    double goodput_sigma_nominal_mbps = 4.0;
    double goodput_sigma_degraded_mbps = 0.4;
    double latency_base_ms = 25.0;
    double latency_retx_ms = 29.3;
    double jitter_nominal_ms = 9.8;
    double jitter_degraded_ms = 20.3;
    double loss_nominal = 0.001;
    double loss_degraded = 0.05;
};

void validate(const TransportParams& params);

struct TransportSample {
    double goodput_mbps = 0.0;
    double rtt_ms = 0.0;
    bool loss_event = false;
};

TransportSample transport_step(Regime regime, const TransportParams& params, Rng& rng);

enum class HandoverState { NORMAL, PRE_WARN, PRE_WARM, SWITCHING, CLEANUP };

std::string to_string(HandoverState s);
HandoverState handover_state_from_string(const std::string& s);

// Dwell thresholds are times-to-loss-of-signal at which the pass walks
// through its pre-handover sequence; cleanup_dwell_s is the post-switch hold
// before the next pass reads as NORMAL again.
struct StateDwellConfig {
    double t_warn_s = 210.0;
    double t_warm_s = 107.0;
    double t_switch_s = 1.5;
    double cleanup_dwell_s = 5.0;
};

void validate(const StateDwellConfig& dwell);

// Advances the per-pass state machine. time_to_los_s < 0 means the pass has
// ended (loss of signal); time_since_acquisition_s is the time since the
// current pass was acquired, used to hold CLEANUP after a switch.
HandoverState handover_step(HandoverState hs, double elevation_deg, double time_to_los_s,
                            const StateDwellConfig& dwell, double time_since_acquisition_s = 1e9);

// Trailing-window conservative statistic of the active residual: the
// nearest-rank P95 of |dtau| and |dcfo| over the last window_rows logged
// rows (fewer during warm-up). The regime guard classifies this statistic,
// so the transport regime reacts to persistent excursions rather than to a
// single sample; the statistic is recomputable exactly from logged rows.
class RegimeWindow {
public:
    explicit RegimeWindow(std::size_t window_rows);

    struct Stat {
        double tau_p95_s = 0.0;
        double f_p95_hz = 0.0;
    };

    Stat push(double dtau_abs_s, double dcfo_abs_hz);

private:
    std::size_t window_rows_;
    std::deque<double> tau_;
    std::deque<double> f_;
};

}  // namespace sdgs::link_emulator
