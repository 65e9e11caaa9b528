#include "sdgs/link_emulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdgs/stats.hpp"

namespace sdgs::link_emulator {

void validate(const RegimeThresholds& th) {
    if (!(th.tau_cp_s > 0.0) || !(th.f_scs_hz > 0.0)) {
        throw std::invalid_argument("RegimeThresholds: tau_cp_s and f_scs_hz must be > 0");
    }
}

std::string to_string(Regime r) {
    return r == Regime::NOMINAL ? "NOMINAL" : "DEGRADED";
}

Regime regime_from_string(const std::string& s) {
    if (s == "NOMINAL") return Regime::NOMINAL;
    if (s == "DEGRADED") return Regime::DEGRADED;
    throw std::invalid_argument("unknown regime: " + s);
}

Regime classify_regime(double dtau_s, double dcfo_hz, const RegimeThresholds& th) {
    const bool nominal = std::abs(dtau_s) <= th.tau_cp_s && std::abs(dcfo_hz) <= th.f_scs_hz;
    return nominal ? Regime::NOMINAL : Regime::DEGRADED;
}

void validate(const TransportParams& params) {
    if (!(params.rate_degraded_mbps < params.rate_nominal_mbps)) {
        throw std::invalid_argument("TransportParams: rate_degraded must be < rate_nominal");
    }
    if (params.latency_retx_ms < 0.0) {
        throw std::invalid_argument("TransportParams: latency_retx_ms must be >= 0");
    }
    for (double loss : {params.loss_nominal, params.loss_degraded}) {
        if (loss < 0.0 || loss > 1.0) {
            throw std::invalid_argument("TransportParams: losses must be in [0, 1]");
        }
    }
}

TransportSample transport_step(Regime regime, const TransportParams& params, Rng& rng) {
    TransportSample out;
    if (regime == Regime::NOMINAL) {
        out.goodput_mbps = rng.normal(params.rate_nominal_mbps, params.goodput_sigma_nominal_mbps);
        out.rtt_ms = params.latency_base_ms + std::abs(rng.normal(0.0, params.jitter_nominal_ms));
        out.loss_event = rng.uniform01() < params.loss_nominal;
    } else {
        out.goodput_mbps = rng.normal(params.rate_degraded_mbps, params.goodput_sigma_degraded_mbps);
        out.rtt_ms = params.latency_base_ms + params.latency_retx_ms +
                     std::abs(rng.normal(0.0, params.jitter_degraded_ms));
        out.loss_event = rng.uniform01() < params.loss_degraded;
    }
    out.goodput_mbps = std::max(out.goodput_mbps, 0.0);
    return out;
}

std::string to_string(HandoverState s) {
    switch (s) {
        case HandoverState::NORMAL: return "NORMAL";
        case HandoverState::PRE_WARN: return "PRE_WARN";
        case HandoverState::PRE_WARM: return "PRE_WARM";
        case HandoverState::SWITCHING: return "SWITCHING";
        case HandoverState::CLEANUP: return "CLEANUP";
    }
    return "NORMAL";
}

HandoverState handover_state_from_string(const std::string& s) {
    if (s == "NORMAL") return HandoverState::NORMAL;
    if (s == "PRE_WARN") return HandoverState::PRE_WARN;
    if (s == "PRE_WARM") return HandoverState::PRE_WARM;
    if (s == "SWITCHING") return HandoverState::SWITCHING;
    if (s == "CLEANUP") return HandoverState::CLEANUP;
    throw std::invalid_argument("unknown handover state: " + s);
}

void validate(const StateDwellConfig& dwell) {
    if (!(dwell.t_warn_s > dwell.t_warm_s) || !(dwell.t_warm_s > dwell.t_switch_s) ||
        !(dwell.t_switch_s > 0.0)) {
        throw std::invalid_argument(
            "StateDwellConfig: need t_warn_s > t_warm_s > t_switch_s > 0");
    }
    if (dwell.cleanup_dwell_s < 0.0) {
        throw std::invalid_argument("StateDwellConfig: cleanup_dwell_s must be >= 0");
    }
}

HandoverState handover_step(HandoverState hs, double /*elevation_deg*/, double time_to_los_s,
                            const StateDwellConfig& dwell, double time_since_acquisition_s) {
    // Past loss of signal: the session switches, cleans up, then reads NORMAL
    // once the next pass has been held long enough.
    if (time_to_los_s <= 0.0) {
        if (hs == HandoverState::SWITCHING || hs == HandoverState::CLEANUP) {
            return time_since_acquisition_s >= dwell.cleanup_dwell_s ? HandoverState::NORMAL
                                                                     : HandoverState::CLEANUP;
        }
        return HandoverState::SWITCHING;
    }
    if (time_to_los_s < dwell.t_switch_s) return HandoverState::SWITCHING;
    if (time_to_los_s < dwell.t_warm_s) return HandoverState::PRE_WARM;
    if (time_to_los_s < dwell.t_warn_s) return HandoverState::PRE_WARN;
    // Fresh acquisition after a switch holds CLEANUP briefly.
    if ((hs == HandoverState::SWITCHING || hs == HandoverState::CLEANUP) &&
        time_since_acquisition_s < dwell.cleanup_dwell_s) {
        return HandoverState::CLEANUP;
    }
    return HandoverState::NORMAL;
}

RegimeWindow::RegimeWindow(std::size_t window_rows) : window_rows_(window_rows) {
    if (window_rows_ == 0) {
        throw std::invalid_argument("RegimeWindow: window must hold at least one row");
    }
}

RegimeWindow::Stat RegimeWindow::push(double dtau_abs_s, double dcfo_abs_hz) {
    tau_.push_back(dtau_abs_s);
    f_.push_back(dcfo_abs_hz);
    if (tau_.size() > window_rows_) {
        tau_.pop_front();
        f_.pop_front();
    }
    std::vector<double> tau_sorted(tau_.begin(), tau_.end());
    std::vector<double> f_sorted(f_.begin(), f_.end());
    std::sort(tau_sorted.begin(), tau_sorted.end());
    std::sort(f_sorted.begin(), f_sorted.end());
    return {stats::percentile_sorted(tau_sorted, 0.95), stats::percentile_sorted(f_sorted, 0.95)};
}

}  // namespace sdgs::link_emulator
