#include "sdgs/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sdgs/stats.hpp"

namespace sdgs::uncertainty {

namespace {

constexpr double kC = geometry::kSpeedOfLightMS;

void require_nonneg(double v, const char* name) {
    if (v < 0.0) {
        throw std::invalid_argument(std::string("UncertaintyConfig: ") + name +
                                    " must be >= 0");
    }
}

// Exact discretization of a stationary first-order Gauss-Markov process.
double gm_step(double x, double sigma, double tau_s, double dt_s, Rng& rng) {
    if (sigma == 0.0) return 0.0;
    if (tau_s <= 0.0) return rng.normal(0.0, sigma);
    const double phi = std::exp(-dt_s / tau_s);
    return x * phi + rng.normal(0.0, sigma * std::sqrt(1.0 - phi * phi));
}

}  // namespace

void validate(const UncertaintyConfig& cfg) {
    require_nonneg(cfg.eph_along_track_bias_m, "eph_along_track_bias_m");
    require_nonneg(cfg.eph_drift_rw_m_per_sqrt_s, "eph_drift_rw_m_per_sqrt_s");
    require_nonneg(cfg.gnss_sigma_h_m, "gnss_sigma_h_m");
    require_nonneg(cfg.gnss_sigma_v_m, "gnss_sigma_v_m");
    require_nonneg(cfg.gnss_vel_sigma_ms, "gnss_vel_sigma_ms");
    require_nonneg(cfg.clock_bias_sigma_us, "clock_bias_sigma_us");
    require_nonneg(cfg.prop_jitter_sigma_us, "prop_jitter_sigma_us");
    require_nonneg(cfg.osc_static_sigma_hz, "osc_static_sigma_hz");
    require_nonneg(cfg.osc_white_sigma_hz, "osc_white_sigma_hz");
    require_nonneg(cfg.eph_vel_sigma_ms, "eph_vel_sigma_ms");
    if (!(cfg.clock_resync_interval_s > 0.0)) {
        throw std::invalid_argument("UncertaintyConfig: clock_resync_interval_s must be > 0");
    }
}

RunBiases sample_run_biases(const UncertaintyConfig& cfg, Rng& rng) {
    RunBiases b;
    b.along_track_m = rng.uniform(-cfg.eph_along_track_bias_m, cfg.eph_along_track_bias_m);
    b.clock_bias_s = rng.normal(0.0, cfg.clock_bias_sigma_us * 1e-6);
    b.osc_static_hz = rng.normal(0.0, cfg.osc_static_sigma_hz);
    const double sigma_axis = cfg.gnss_sigma_h_m / std::sqrt(2.0);
    b.gnss_enu_m = {rng.normal(0.0, sigma_axis), rng.normal(0.0, sigma_axis),
                    rng.normal(0.0, cfg.gnss_sigma_v_m)};
    return b;
}

UncertaintyProcess::UncertaintyProcess(const UncertaintyConfig& cfg, const RunBiases& biases,
                                       const geometry::LinkConstants& link, double t_start_s,
                                       std::uint64_t stream_seed)
    : cfg_(cfg), biases_(biases), link_(link), rng_(stream_seed),
      t_start_s_(t_start_s), t_last_s_(t_start_s),
      clock_bias_s_(biases.clock_bias_s), osc_static_hz_(biases.osc_static_hz) {}

void UncertaintyProcess::advance_to(double t_s) {
    if (!started_) {
        // Stationary initialization keeps the marginal distribution exact at
        // every sample, including the first one.
        prop_gm_m_ = cfg_.prop_jitter_sigma_us == 0.0
                         ? 0.0
                         : rng_.normal(0.0, cfg_.prop_jitter_sigma_us * 1e-6 * kC);
        vr_eph_gm_ms_ = cfg_.eph_vel_sigma_ms == 0.0 ? 0.0 : rng_.normal(0.0, cfg_.eph_vel_sigma_ms);
        vr_ue_gm_ms_ = cfg_.gnss_vel_sigma_ms == 0.0 ? 0.0 : rng_.normal(0.0, cfg_.gnss_vel_sigma_ms);
        started_ = true;
        t_last_s_ = t_s;
        return;
    }
    const double dt = t_s - t_last_s_;
    if (dt < 0.0) {
        throw std::logic_error("UncertaintyProcess: samples must be time-ordered");
    }
    if (dt == 0.0) return;
    if (cfg_.eph_drift_rw_m_per_sqrt_s > 0.0) {
        rw_m_ += rng_.normal(0.0, cfg_.eph_drift_rw_m_per_sqrt_s * std::sqrt(dt));
    }
    prop_gm_m_ = gm_step(prop_gm_m_, cfg_.prop_jitter_sigma_us * 1e-6 * kC,
                         cfg_.prop_corr_time_s, dt, rng_);
    vr_eph_gm_ms_ = gm_step(vr_eph_gm_ms_, cfg_.eph_vel_sigma_ms, cfg_.eph_vel_corr_time_s,
                            dt, rng_);
    vr_ue_gm_ms_ = gm_step(vr_ue_gm_ms_, cfg_.gnss_vel_sigma_ms, 10.0, dt, rng_);

    // Clock discipline: each resync re-estimates the bias and re-trims the
    // oscillator, leaving fresh residuals for the new segment.
    const auto segment = static_cast<long>(
        std::floor((t_s - t_start_s_) / cfg_.clock_resync_interval_s));
    if (segment != resync_segment_) {
        resync_segment_ = segment;
        if (cfg_.clock_bias_sigma_us > 0.0) {
            clock_bias_s_ = rng_.normal(0.0, cfg_.clock_bias_sigma_us * 1e-6);
        }
        if (cfg_.osc_static_sigma_hz > 0.0) {
            osc_static_hz_ = rng_.normal(0.0, cfg_.osc_static_sigma_hz);
        }
    }
    t_last_s_ = t_s;
}

RangeErrorSample UncertaintyProcess::range_error_at(double t_s, const Vec3& los_enu) {
    advance_to(t_s);
    RangeErrorSample s;
    s.t_s = t_s;
    s.d_rho_eph_m = biases_.along_track_m + rw_m_;
    // Predicted range uses the GNSS-estimated site position; the error
    // projects onto the line of sight.
    s.d_rho_ue_m = -dot(biases_.gnss_enu_m, los_enu);
    const double since_resync = std::fmod(t_s - t_start_s_, cfg_.clock_resync_interval_s);
    s.d_rho_clk_m = kC * (clock_bias_s_ + cfg_.clock_drift_ppm * 1e-6 * since_resync);
    s.d_rho_prop_m = prop_gm_m_;
    s.total_dtau_s = (s.d_rho_eph_m + s.d_rho_ue_m + s.d_rho_clk_m + s.d_rho_prop_m) / kC;
    return s;
}

VelocityErrorSample UncertaintyProcess::velocity_error_at(double t_s) {
    advance_to(t_s);
    VelocityErrorSample s;
    s.t_s = t_s;
    s.d_vr_eph_ms = vr_eph_gm_ms_;
    s.d_vr_ue_ms = vr_ue_gm_ms_;
    const double white = cfg_.osc_white_sigma_hz == 0.0 ? 0.0
                                                        : rng_.normal(0.0, cfg_.osc_white_sigma_hz);
    s.d_f_osc_hz = osc_static_hz_ + white;
    s.total_dcfo_hz = (link_.f_c_hz / kC) * (s.d_vr_eph_ms + s.d_vr_ue_ms) + s.d_f_osc_hz;
    return s;
}

ResidualSample UncertaintyProcess::open_loop_at(double t_s, const Vec3& los_enu) {
    ResidualSample r;
    r.t_s = t_s;
    r.dtau_open_s = range_error_at(t_s, los_enu).total_dtau_s;
    r.dcfo_open_hz = velocity_error_at(t_s).total_dcfo_hz;
    return r;
}

std::vector<ResidualSample> open_loop_trajectory(const UncertaintyConfig& cfg,
                                                 const McScenario& scenario,
                                                 std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    const RunBiases biases = sample_run_biases(cfg, rng);
    UncertaintyProcess proc(cfg, biases, scenario.link, scenario.t_start_s, rng.next_u64());

    const auto n_ticks = static_cast<std::size_t>(scenario.duration_s / scenario.t_fb_s);
    std::vector<ResidualSample> out;
    out.reserve(n_ticks);
    for (std::size_t k = 0; k < n_ticks; ++k) {
        const double t = scenario.t_start_s + static_cast<double>(k) * scenario.t_fb_s;
        const auto sat = geometry::propagate(scenario.orbit, t);
        const Vec3 los = geometry::los_unit_enu(scenario.site, sat);
        out.push_back(proc.open_loop_at(t, los));
    }
    return out;
}

OpenLoopMcResult monte_carlo_open_loop(const UncertaintyConfig& cfg, const McScenario& scenario,
                                       int n_runs) {
    if (n_runs < 1) {
        throw std::invalid_argument("monte_carlo_open_loop: n_runs must be >= 1");
    }
    std::vector<double> ta_us;
    std::vector<double> cfo_hz;
    for (int run = 0; run < n_runs; ++run) {
        const auto seed = derive_stream_seed(cfg.seed, "mc_open:" + std::to_string(run));
        for (const auto& s : open_loop_trajectory(cfg, scenario, seed)) {
            ta_us.push_back(std::abs(s.dtau_open_s) * 1e6);
            cfo_hz.push_back(std::abs(s.dcfo_open_hz));
        }
    }
    OpenLoopMcResult res;
    res.pooled_samples = ta_us.size();
    std::sort(ta_us.begin(), ta_us.end());
    std::sort(cfo_hz.begin(), cfo_hz.end());
    res.ta_abs_us = {stats::percentile_sorted(ta_us, 0.50), stats::percentile_sorted(ta_us, 0.95),
                     stats::percentile_sorted(ta_us, 0.99)};
    res.cfo_abs_hz = {stats::percentile_sorted(cfo_hz, 0.50),
                      stats::percentile_sorted(cfo_hz, 0.95),
                      stats::percentile_sorted(cfo_hz, 0.99)};
    return res;
}

}  // namespace sdgs::uncertainty
