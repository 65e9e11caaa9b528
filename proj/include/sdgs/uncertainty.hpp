#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdgs/geometry.hpp"
#include "sdgs/rng.hpp"
#include "sdgs/vec3.hpp"

namespace sdgs::uncertainty {

// Perturbation model driving the open-loop residual budget. Range-domain
// sources map to residual timing through total_dtau = sum(d_rho)/c; velocity
// and oscillator sources map to residual CFO through (f_c/c)*dv_r + d_f_osc.
//
// The along-track ephemeris bias is an equivalent-range magnitude and enters
// the range budget directly. Propagation jitter is a first-order
// Gauss-Markov process with the configured stationary sigma, so its marginal
// at any instant is N(0, sigma^2) while remaining trackable dynamics rather
// than sample-to-sample white noise.
struct UncertaintyConfig {
    double eph_along_track_bias_m = 150.0;      // per-run uniform on [-x, +x]
    double eph_drift_rw_m_per_sqrt_s = 0.2;     // random-walk intensity
    double gnss_sigma_h_m = 5.0;                // horizontal position 1-sigma
    double gnss_sigma_v_m = 10.0;               // vertical position 1-sigma
    double gnss_vel_sigma_ms = 0.05;            // receiver velocity 1-sigma
    double clock_bias_sigma_us = 1.2;           // per-run Gaussian sigma
    double clock_drift_ppm = 0.5;               // accumulates since last resync
    double clock_resync_interval_s = 4.01;
    double prop_jitter_sigma_us = 0.4;          // stationary sigma of the GM process
    double prop_corr_time_s = 0.085;             // GM correlation time
    double osc_static_sigma_hz = 465.0;         // per-run oscillator offset sigma
    double osc_white_sigma_hz = 22.0;           // per-sample measurement-grade noise
    double eph_vel_sigma_ms = 0.2;              // radial velocity error, from RW rate
    double eph_vel_corr_time_s = 30.0;
    std::uint64_t seed = 1;
};

void validate(const UncertaintyConfig& cfg);

// Quantities drawn at run start. Along-track and GNSS errors hold for the
// whole run (quasi-static receiver, one ephemeris product). The clock bias
// and oscillator offset are the residuals of the latest clock discipline and
// are re-estimated at every resync; the values here seed the first segment.
struct RunBiases {
    double along_track_m = 0.0;
    double clock_bias_s = 0.0;
    double osc_static_hz = 0.0;
    Vec3 gnss_enu_m;   // receiver position error, east/north/up
};

RunBiases sample_run_biases(const UncertaintyConfig& cfg, Rng& rng);

struct RangeErrorSample {
    double t_s = 0.0;
    double d_rho_eph_m = 0.0;
    double d_rho_ue_m = 0.0;
    double d_rho_clk_m = 0.0;
    double d_rho_prop_m = 0.0;
    double total_dtau_s = 0.0;
};

struct VelocityErrorSample {
    double t_s = 0.0;
    double d_vr_eph_ms = 0.0;
    double d_vr_ue_ms = 0.0;
    double d_f_osc_hz = 0.0;
    double total_dcfo_hz = 0.0;
};

struct ResidualSample {
    double t_s = 0.0;
    double dtau_open_s = 0.0;
    double dcfo_open_hz = 0.0;
    std::optional<double> dtau_closed_s;
    std::optional<double> dcfo_closed_hz;
};

// Sequential per-run sampler owning the random-walk, Gauss-Markov and resync
// state. Samples must be requested in non-decreasing time order.
class UncertaintyProcess {
public:
    UncertaintyProcess(const UncertaintyConfig& cfg, const RunBiases& biases,
                       const geometry::LinkConstants& link, double t_start_s,
                       std::uint64_t stream_seed);

    // los_enu: unit line-of-sight site -> satellite, for GNSS projection.
    RangeErrorSample range_error_at(double t_s, const Vec3& los_enu);
    VelocityErrorSample velocity_error_at(double t_s);

    ResidualSample open_loop_at(double t_s, const Vec3& los_enu);

    const RunBiases& biases() const { return biases_; }

private:
    void advance_to(double t_s);

    UncertaintyConfig cfg_;
    RunBiases biases_;
    geometry::LinkConstants link_;
    Rng rng_;
    double t_start_s_;
    double t_last_s_;
    double rw_m_ = 0.0;
    double prop_gm_m_ = 0.0;
    double vr_eph_gm_ms_ = 0.0;
    double vr_ue_gm_ms_ = 0.0;
    double clock_bias_s_ = 0.0;    // current resync segment's residual
    double osc_static_hz_ = 0.0;
    long resync_segment_ = 0;
    bool started_ = false;
};

struct PercentileSummary {
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
};

// Scenario for Monte Carlo pooling: a time window over one pass, sampled at
// the control period.
struct McScenario {
    geometry::GroundSite site;
    geometry::OrbitElements orbit;
    geometry::LinkConstants link;
    double t_start_s = 0.0;
    double duration_s = 30.0;
    double t_fb_s = 0.005;
};

struct OpenLoopMcResult {
    PercentileSummary ta_abs_us;    // |dtau_open| in microseconds
    PercentileSummary cfo_abs_hz;   // |dcfo_open| in Hz
    std::size_t pooled_samples = 0;
};

// Pools |dtau| and |dcfo| over n_runs independent runs of the scenario.
// Per-run streams derive from cfg.seed and the run index.
OpenLoopMcResult monte_carlo_open_loop(const UncertaintyConfig& cfg, const McScenario& scenario,
                                       int n_runs);

// One run's open-loop trajectory at the control period.
std::vector<ResidualSample> open_loop_trajectory(const UncertaintyConfig& cfg,
                                                 const McScenario& scenario,
                                                 std::uint64_t stream_seed);

}  // namespace sdgs::uncertainty
