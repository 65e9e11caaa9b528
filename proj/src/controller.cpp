#include "sdgs/controller.hpp"

#include <algorithm>
#include <cmath>

#include "sdgs/stats.hpp"

namespace sdgs::controller {

void validate(const PidConfig& cfg) {
    if (!(cfg.t_fb_s > 0.0)) {
        throw std::invalid_argument("PidConfig: t_fb_s must be > 0");
    }
    if (cfg.d_fb_s < 0.0) {
        throw std::invalid_argument("PidConfig: d_fb_s must be >= 0");
    }
    if (cfg.quant_tau_s < 0.0 || cfg.quant_f_hz < 0.0) {
        throw std::invalid_argument("PidConfig: quantization steps must be >= 0");
    }
    if (cfg.integral_limit_tau < 0.0 || cfg.integral_limit_f < 0.0) {
        throw std::invalid_argument("PidConfig: integral limits must be >= 0");
    }
}

double controller_step(const PidConfig& cfg, ControllerState& state, double e_k,
                       double integral_limit) {
    const int d = cfg.delay_index();

    state.error_history.push_front(e_k);
    const std::size_t keep = static_cast<std::size_t>(d) + 2;
    while (state.error_history.size() > keep) {
        state.error_history.pop_back();
    }

    // history[d] is e[k-d]; indices past the recorded past read as zero.
    auto delayed = [&](int back) -> double {
        const auto idx = static_cast<std::size_t>(back);
        return idx < state.error_history.size() ? state.error_history[idx] : 0.0;
    };

    const double e_d = state.k - d >= 0 ? delayed(d) : 0.0;
    const double e_d1 = state.k - d - 1 >= 0 ? delayed(d + 1) : 0.0;

    if (state.k - d >= 0) {
        state.integral_acc += cfg.t_fb_s * e_d;
        state.integral_acc = std::clamp(state.integral_acc, -integral_limit, integral_limit);
    }

    const double u = cfg.kp * e_d + cfg.ki * state.integral_acc +
                     cfg.kd * (e_d - e_d1) / cfg.t_fb_s;
    ++state.k;
    return u;
}

double quantize(double value, double step) {
    if (step < 0.0) {
        throw std::invalid_argument("quantize: step must be >= 0");
    }
    if (step == 0.0) return value;
    // std::round halves away from zero, which is exactly the tie rule.
    return step * std::round(value / step);
}

ClosedLoopTracker::ClosedLoopTracker(const PidConfig& cfg) : cfg_(cfg) {
    validate(cfg);
}

void ClosedLoopTracker::set_divergence_guard(double tau_limit_s, double f_limit_hz) {
    tau_guard_ = tau_limit_s;
    f_guard_ = f_limit_hz;
}

ClosedLoopTracker::Output ClosedLoopTracker::step(double dtau_open_s, double dcfo_open_hz) {
    Output out;
    out.dtau_closed_s = dtau_open_s - tau_state_.accumulated_correction;
    out.dcfo_closed_hz = dcfo_open_hz - f_state_.accumulated_correction;

    if (tau_guard_ > 0.0 && std::abs(out.dtau_closed_s) > tau_guard_) {
        throw ControlDivergence("timing loop diverged");
    }
    if (f_guard_ > 0.0 && std::abs(out.dcfo_closed_hz) > f_guard_) {
        throw ControlDivergence("frequency loop diverged");
    }

    const double u_tau = controller_step(cfg_, tau_state_, out.dtau_closed_s,
                                         cfg_.integral_limit_tau);
    tau_state_.accumulated_correction += quantize(u_tau, cfg_.quant_tau_s);

    const double u_f = controller_step(cfg_, f_state_, out.dcfo_closed_hz,
                                       cfg_.integral_limit_f);
    f_state_.accumulated_correction += quantize(u_f, cfg_.quant_f_hz);

    return out;
}

std::vector<uncertainty::ResidualSample> closed_loop_track(
    const PidConfig& cfg, std::vector<uncertainty::ResidualSample> trajectory) {
    ClosedLoopTracker tracker(cfg);

    if (!trajectory.empty()) {
        std::vector<double> tau_abs;
        std::vector<double> f_abs;
        tau_abs.reserve(trajectory.size());
        f_abs.reserve(trajectory.size());
        for (const auto& s : trajectory) {
            tau_abs.push_back(std::abs(s.dtau_open_s));
            f_abs.push_back(std::abs(s.dcfo_open_hz));
        }
        const double tau_p95 = stats::percentile(std::move(tau_abs), 0.95);
        const double f_p95 = stats::percentile(std::move(f_abs), 0.95);
        tracker.set_divergence_guard(tau_p95 > 0.0 ? 100.0 * tau_p95 : 0.0,
                                     f_p95 > 0.0 ? 100.0 * f_p95 : 0.0);
    }

    for (auto& s : trajectory) {
        const auto out = tracker.step(s.dtau_open_s, s.dcfo_open_hz);
        s.dtau_closed_s = out.dtau_closed_s;
        s.dcfo_closed_hz = out.dcfo_closed_hz;
    }
    return trajectory;
}

}  // namespace sdgs::controller
