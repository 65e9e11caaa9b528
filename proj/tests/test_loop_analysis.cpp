#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdgs/controller.hpp"
#include "sdgs/loop_analysis.hpp"

using namespace sdgs;
using namespace sdgs::controller;
using namespace sdgs::loop_analysis;

namespace {

// Time-domain simulation of the linear loop with plant
// P(z) = g z^-1 / (1 - p z^-1) and a unit step disturbance on the residual.
// Returns true when the loop diverges.
bool simulates_unstable(const PidConfig& pid, const LoopAnalysisConfig& plant, int n_steps) {
    ControllerState state;
    double plant_out = 0.0;    // correction seen at the residual
    double plant_state = 0.0;
    double peak = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        const double e = 1.0 - plant_out;
        const double u = controller_step(pid, state, e, 1e18);
        plant_state = plant.plant_pole * plant_state + plant.plant_gain * u;
        plant_out = plant_state;
        peak = std::max(peak, std::abs(e));
        if (!std::isfinite(e) || std::abs(e) > 1e4) return true;
    }
    return peak > 1e4;
}

}  // namespace

TEST_CASE("zero gains give an identically zero closed loop, reported stable") {
    PidConfig pid;
    pid.kp = pid.ki = pid.kd = 0.0;
    LoopAnalysisConfig plant;
    plant.plant_gain = 1.0;
    plant.plant_pole = 0.9;
    plant.eval_frequencies_hz = {0.1, 1.0, 10.0, 50.0};
    const auto resp = closed_loop_response(pid, plant);
    CHECK(resp.stable);
    for (const auto& p : resp.points) {
        CHECK(p.magnitude == 0.0);
    }
}

TEST_CASE("integral action gives exact unity DC tracking") {
    PidConfig pid;   // ki > 0 defaults
    pid.d_fb_s = 0.0;
    LoopAnalysisConfig plant;
    plant.plant_pole = 1.0;   // accumulator actuation
    const auto tf = build_closed_loop_tf(pid, plant);
    const auto dc = tf.eval({1.0, 0.0});
    CHECK(std::abs(std::abs(dc) - 1.0) <= 1e-9);

    // Also at a stable plant pole.
    plant.plant_pole = 0.85;
    plant.plant_gain = 0.7;
    const auto tf2 = build_closed_loop_tf(pid, plant);
    CHECK(std::abs(std::abs(tf2.eval({1.0, 0.0})) - 1.0) <= 1e-9);
}

TEST_CASE("default loop is stable and delay erodes stability at the simulated boundary") {
    PidConfig pid;
    pid.kp = 0.8;
    pid.ki = 2.0;
    pid.kd = 0.0;
    pid.t_fb_s = 0.005;
    LoopAnalysisConfig plant;
    plant.plant_gain = 1.0;
    plant.plant_pole = 0.9;

    int analytic_boundary = -1;
    int simulated_boundary = -1;
    for (int d = 0; d <= 40; ++d) {
        pid.d_fb_s = pid.t_fb_s * d;
        const auto resp = closed_loop_response(pid, plant);
        if (!resp.stable && analytic_boundary < 0) analytic_boundary = d;
        if (simulates_unstable(pid, plant, 60000) && simulated_boundary < 0) {
            simulated_boundary = d;
        }
    }
    REQUIRE(analytic_boundary > 0);
    // The time-domain divergence flips at the same delay index as the
    // characteristic-root check.
    CHECK(analytic_boundary == simulated_boundary);
}

TEST_CASE("characteristic roots stay inside the unit circle for the default loop") {
    PidConfig pid;
    pid.d_fb_s = 0.005;
    LoopAnalysisConfig plant;
    plant.plant_pole = 1.0;
    plant.eval_frequencies_hz = {1.0};
    const auto resp = closed_loop_response(pid, plant);
    CHECK(resp.stable);
    REQUIRE(!resp.root_magnitudes.empty());
    for (double m : resp.root_magnitudes) {
        CHECK(m < 1.0);
    }
}

TEST_CASE("simulated sinusoidal attenuation matches |1 - T_cl| within 10%") {
    PidConfig pid;
    pid.quant_tau_s = 0.0;
    pid.quant_f_hz = 0.0;
    pid.d_fb_s = 0.005;
    LoopAnalysisConfig plant;
    plant.plant_pole = 1.0;   // matches the accumulator actuation of the tracker

    for (double probe_hz : {0.5, 2.0, 8.0}) {
        const double predicted = sensitivity_magnitude(pid, plant, probe_hz);

        // Drive the real tracker with a pure sine disturbance and compare
        // the settled residual amplitude against the prediction.
        std::vector<uncertainty::ResidualSample> traj(40000);
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const double t = 0.005 * static_cast<double>(k);
            traj[k].t_s = t;
            traj[k].dtau_open_s = std::sin(2.0 * geometry::kPi * probe_hz * t);
            traj[k].dcfo_open_hz = 0.0;
        }
        const auto closed = closed_loop_track(pid, traj);
        double amplitude = 0.0;
        for (std::size_t k = traj.size() / 2; k < traj.size(); ++k) {
            amplitude = std::max(amplitude, std::abs(*closed[k].dtau_closed_s));
        }
        CHECK(amplitude == doctest::Approx(predicted).epsilon(0.10));
    }
}

TEST_CASE("rejects non-positive control period and unstable plant poles") {
    PidConfig pid;
    pid.t_fb_s = 0.0;
    LoopAnalysisConfig plant;
    CHECK_THROWS(build_closed_loop_tf(pid, plant));
    PidConfig ok;
    plant.plant_pole = 1.2;
    CHECK_THROWS(build_closed_loop_tf(ok, plant));
}
