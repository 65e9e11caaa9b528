#pragma once

#include <complex>
#include <vector>

#include "sdgs/controller.hpp"

namespace sdgs::loop_analysis {

// First-order residual-tracking plant P(z) = gain * z^-1 / (1 - pole * z^-1).
// pole = 1 models the pure-accumulator actuation used by the time-domain
// loop; |pole| < 1 is a stable approximation around a settled operating
// point.
struct LoopAnalysisConfig {
    double plant_gain = 1.0;
    double plant_pole = 1.0;
    std::vector<double> eval_frequencies_hz;
};

struct FrequencyResponsePoint {
    double freq_hz = 0.0;
    double magnitude = 0.0;
    double phase_deg = 0.0;
};

struct LoopResponse {
    std::vector<FrequencyResponsePoint> points;
    bool stable = false;
    // Closed-loop characteristic-polynomial root magnitudes, descending.
    std::vector<double> root_magnitudes;
};

// Polynomial in z^-1, ascending powers: c[0] + c[1] z^-1 + ...
using PolyZ = std::vector<double>;

// Rational closed-loop transfer function T_cl = z^-d C(z) P(z) /
// (1 + z^-d C(z) P(z)) built from the PID term
// C(z) = kp + ki*t_fb/(1 - z^-1) + kd*(1 - z^-1)/t_fb.
struct ClosedLoopTf {
    PolyZ numerator;
    PolyZ denominator;

    std::complex<double> eval(std::complex<double> z_inv) const;
};

ClosedLoopTf build_closed_loop_tf(const controller::PidConfig& pid,
                                  const LoopAnalysisConfig& plant);

// Evaluates T_cl on the unit circle at the requested frequencies and judges
// stability from the closed-loop characteristic roots (strictly inside the
// unit circle). Throws if t_fb_s <= 0 or |plant_pole| > 1.
LoopResponse closed_loop_response(const controller::PidConfig& pid,
                                  const LoopAnalysisConfig& plant);

// |T_cl| and |1 - T_cl| at a single frequency.
double closed_loop_magnitude(const controller::PidConfig& pid, const LoopAnalysisConfig& plant,
                             double freq_hz);
double sensitivity_magnitude(const controller::PidConfig& pid, const LoopAnalysisConfig& plant,
                             double freq_hz);

}  // namespace sdgs::loop_analysis
