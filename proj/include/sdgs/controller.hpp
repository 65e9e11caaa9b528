#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <stdexcept>
#include <vector>

#include "sdgs/uncertainty.hpp"

namespace sdgs::controller {

// Discrete PID over delayed residual samples:
//
//   u[k] = kp*e[k-d] + ki*t_fb*sum_{i<=k-d} e[i] + kd*(e[k-d]-e[k-d-1])/t_fb
//
// with d = floor(d_fb/t_fb). Samples with negative index read as zero. The
// integral accumulator (t_fb * running sum) is clamped to +/- the per-loop
// integral limit; saturation is a documented clamp, not an error.
struct PidConfig {
    double kp = 0.6;
    double ki = 6.0;       // 1/s
    double kd = 0.0002;    // s
    double t_fb_s = 0.005;
    double d_fb_s = 0.005;
    double quant_tau_s = 0.1e-6;
    double quant_f_hz = 50.0;
    double integral_limit_tau = 1.0e-5;   // s * s
    double integral_limit_f = 3000.0;     // Hz * s

    // floor(d_fb / t_fb), tolerant of binary rounding in exact ratios.
    int delay_index() const {
        return static_cast<int>(std::floor(d_fb_s / t_fb_s + 1e-9));
    }
};

void validate(const PidConfig& cfg);

struct ControllerState {
    std::deque<double> error_history;   // newest at front, bounded to d + 2
    double integral_acc = 0.0;          // t_fb * sum of admitted delayed samples
    double accumulated_correction = 0.0;
    long k = 0;                         // tick index, counts processed samples
};

// One controller update; pushes e_k, returns u_k. integral_limit is in the
// loop's own error units times seconds.
double controller_step(const PidConfig& cfg, ControllerState& state, double e_k,
                       double integral_limit);

// Round to the nearest multiple of step, ties away from zero. step = 0 is the
// identity.
double quantize(double value, double step);

// Raised when the closed loop exceeds 100x the disturbance's initial P95,
// signaling an unstable gain/delay combination.
struct ControlDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Streaming closed-loop tracker for the two independent residual loops
// (timing and frequency). The applied correction is a pure accumulator:
// c[k+1] = c[k] + quantize(u[k]).
class ClosedLoopTracker {
public:
    explicit ClosedLoopTracker(const PidConfig& cfg);

    struct Output {
        double dtau_closed_s = 0.0;
        double dcfo_closed_hz = 0.0;
    };

    // e[k] = open-loop disturbance minus the correction applied so far.
    Output step(double dtau_open_s, double dcfo_open_hz);

    void set_divergence_guard(double tau_limit_s, double f_limit_hz);

private:
    PidConfig cfg_;
    ControllerState tau_state_;
    ControllerState f_state_;
    double tau_guard_ = 0.0;   // 0 disables
    double f_guard_ = 0.0;
};

// Applies the tracker over a sampled open-loop trajectory, populating the
// closed-loop fields. Throws ControlDivergence on guard violation.
std::vector<uncertainty::ResidualSample> closed_loop_track(
    const PidConfig& cfg, std::vector<uncertainty::ResidualSample> trajectory);

}  // namespace sdgs::controller
