#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sdgs/link_emulator.hpp"
#include "sdgs/stats.hpp"
#include "sdgs/telemetry.hpp"

using namespace sdgs;
using namespace sdgs::link_emulator;

TEST_CASE("regime classification thresholds, boundary inclusive") {
    const RegimeThresholds th;   // 1.0 us, 300 Hz
    CHECK(classify_regime(0.0, 0.0, th) == Regime::NOMINAL);
    CHECK(classify_regime(1.0e-6, 0.0, th) == Regime::NOMINAL);
    CHECK(classify_regime(-1.0e-6, 300.0, th) == Regime::NOMINAL);
    CHECK(classify_regime(std::nextafter(1.0e-6, 1.0), 0.0, th) == Regime::DEGRADED);
    CHECK(classify_regime(0.0, 300.1, th) == Regime::DEGRADED);
    // Open-loop scale residuals sit degraded.
    CHECK(classify_regime(3.65e-6, 76.0, th) == Regime::DEGRADED);
    CHECK(classify_regime(0.49e-6, 76.0, th) == Regime::NOMINAL);
}

TEST_CASE("transport endpoints match the configured regimes") {
    const TransportParams params;
    Rng rng(404);
    double nominal_goodput = 0.0, nominal_rtt = 0.0;
    double degraded_goodput = 0.0, degraded_rtt = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto a = transport_step(Regime::NOMINAL, params, rng);
        nominal_goodput += a.goodput_mbps;
        nominal_rtt += a.rtt_ms;
        const auto b = transport_step(Regime::DEGRADED, params, rng);
        degraded_goodput += b.goodput_mbps;
        degraded_rtt += b.rtt_ms;
    }
    nominal_goodput /= n;
    nominal_rtt /= n;
    degraded_goodput /= n;
    degraded_rtt /= n;

    CHECK(nominal_goodput == doctest::Approx(params.rate_nominal_mbps).epsilon(0.01));
    CHECK(degraded_goodput == doctest::Approx(params.rate_degraded_mbps).epsilon(0.01));
    // Half-normal jitter adds sigma * sqrt(2/pi) to the base latency.
    const double half_normal = std::sqrt(2.0 / 3.14159265358979323846);
    CHECK(nominal_rtt ==
          doctest::Approx(params.latency_base_ms + params.jitter_nominal_ms * half_normal)
              .epsilon(0.02));
    CHECK(degraded_rtt ==
          doctest::Approx(params.latency_base_ms + params.latency_retx_ms +
                          params.jitter_degraded_ms * half_normal)
              .epsilon(0.02));
}

TEST_CASE("zero jitter and loss give an exact deterministic RTT") {
    TransportParams params;
    params.jitter_nominal_ms = 0.0;
    params.jitter_degraded_ms = 0.0;
    params.loss_nominal = 0.0;
    params.loss_degraded = 0.0;
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto a = transport_step(Regime::NOMINAL, params, rng);
        CHECK(a.rtt_ms == params.latency_base_ms);
        CHECK_FALSE(a.loss_event);
        const auto b = transport_step(Regime::DEGRADED, params, rng);
        CHECK(b.rtt_ms == params.latency_base_ms + params.latency_retx_ms);
        CHECK_FALSE(b.loss_event);
    }
}

TEST_CASE("goodput never goes negative even with huge noise") {
    TransportParams params;
    params.rate_degraded_mbps = 1.0;
    params.goodput_sigma_degraded_mbps = 50.0;
    Rng rng(11);
    for (int i = 0; i < 5000; ++i) {
        CHECK(transport_step(Regime::DEGRADED, params, rng).goodput_mbps >= 0.0);
    }
}

TEST_CASE("degraded RTT first-order dominates nominal RTT") {
    const TransportParams params;
    Rng rng(2025);
    std::vector<double> nominal, degraded;
    for (int i = 0; i < 10000; ++i) {
        nominal.push_back(transport_step(Regime::NOMINAL, params, rng).rtt_ms);
        degraded.push_back(transport_step(Regime::DEGRADED, params, rng).rtt_ms);
    }
    std::sort(nominal.begin(), nominal.end());
    std::sort(degraded.begin(), degraded.end());
    // Empirical CDF comparison at every decile.
    for (int q = 1; q <= 9; ++q) {
        const auto idx = static_cast<std::size_t>(q * 1000) - 1;
        CHECK(degraded[idx] >= nominal[idx]);
    }
}

TEST_CASE("handover walks the full state sequence over a pass") {
    const StateDwellConfig dwell;
    auto hs = HandoverState::NORMAL;
    std::vector<HandoverState> seen{hs};
    const double pass_len = 460.0;
    for (double t = 0.0; t < pass_len; t += 0.1) {
        const double time_to_los = pass_len - t;
        hs = handover_step(hs, 45.0, time_to_los, dwell, t);
        if (hs != seen.back()) seen.push_back(hs);
    }
    const std::vector<HandoverState> expected{
        HandoverState::NORMAL, HandoverState::PRE_WARN, HandoverState::PRE_WARM,
        HandoverState::SWITCHING};
    CHECK(seen == expected);

    // Post-LOS: switch, cleanup, then NORMAL on the next acquired pass.
    hs = handover_step(hs, 0.0, -1.0, dwell, 0.0);
    CHECK(hs == HandoverState::CLEANUP);
    hs = handover_step(hs, 10.0, 400.0, dwell, dwell.cleanup_dwell_s / 2.0);
    CHECK(hs == HandoverState::CLEANUP);
    hs = handover_step(hs, 10.0, 400.0, dwell, dwell.cleanup_dwell_s + 0.1);
    CHECK(hs == HandoverState::NORMAL);
}

TEST_CASE("mid-pass state stays NORMAL and thresholds trigger exactly") {
    const StateDwellConfig dwell;
    CHECK(handover_step(HandoverState::NORMAL, 60.0, 300.0, dwell) == HandoverState::NORMAL);
    CHECK(handover_step(HandoverState::NORMAL, 60.0, dwell.t_warn_s - 0.01, dwell) ==
          HandoverState::PRE_WARN);
    CHECK(handover_step(HandoverState::PRE_WARN, 30.0, dwell.t_warm_s - 0.01, dwell) ==
          HandoverState::PRE_WARM);
    CHECK(handover_step(HandoverState::PRE_WARM, 10.0, dwell.t_switch_s - 0.01, dwell) ==
          HandoverState::SWITCHING);
}

TEST_CASE("regime window reports the nearest-rank P95 of the trailing rows") {
    RegimeWindow window(4);
    // Window fills up; P95 of n<=4 samples is the max.
    auto s1 = window.push(1.0, 10.0);
    CHECK(s1.tau_p95_s == 1.0);
    auto s2 = window.push(3.0, 5.0);
    CHECK(s2.tau_p95_s == 3.0);
    CHECK(s2.f_p95_hz == 10.0);
    window.push(2.0, 20.0);
    auto s4 = window.push(0.5, 1.0);
    CHECK(s4.tau_p95_s == 3.0);
    // Sliding: the oldest (1.0, 10.0) drops out.
    auto s5 = window.push(0.1, 2.0);
    CHECK(s5.tau_p95_s == 3.0);
    auto s6 = window.push(0.1, 2.0);
    CHECK(s6.tau_p95_s == 2.0);
    CHECK(s6.f_p95_hz == 20.0);
}

TEST_CASE("link_tick: sub-threshold closed residuals give NOMINAL rows") {
    const RegimeThresholds th;
    const TransportParams params;
    RegimeWindow window(40);
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        telemetry::LinkTickInputs in;
        in.t_s = 0.1 * i;
        in.mode = telemetry::Mode::EDGE_CONTROLLED;
        in.dtau_open_s = 2.5e-6;
        in.dcfo_open_hz = 700.0;
        in.dtau_closed_s = 0.3e-6;   // well inside both thresholds
        in.dcfo_closed_hz = 60.0;
        const auto row = telemetry::link_tick(in, window, th, params, rng);
        CHECK(row.regime == Regime::NOMINAL);
        CHECK(row.goodput_mbps > 150.0);
    }
}

TEST_CASE("link_tick: reference mode with open-loop magnitudes sits DEGRADED") {
    const RegimeThresholds th;
    const TransportParams params;
    RegimeWindow window(40);
    Rng rng(10);
    Rng noise(11);
    int degraded = 0;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
        telemetry::LinkTickInputs in;
        in.t_s = 0.1 * i;
        in.mode = telemetry::Mode::REFERENCE;
        // Open-loop scale draws around the observed distribution.
        in.dtau_open_s = noise.normal(1.0e-6, 1.4e-6);
        in.dcfo_open_hz = noise.normal(0.0, 460.0);
        const auto row = telemetry::link_tick(in, window, th, params, rng);
        if (row.regime == Regime::DEGRADED) ++degraded;
        CHECK_FALSE(row.dtau_closed_us.has_value());
    }
    CHECK(degraded > n * 9 / 10);
}

TEST_CASE("link_tick row fields equal an independent recomposition") {
    const RegimeThresholds th;
    const TransportParams params;
    Rng noise(123);
    std::vector<telemetry::LinkTickInputs> inputs;
    for (int i = 0; i < 200; ++i) {
        telemetry::LinkTickInputs in;
        in.t_s = 100.0 + 0.1 * i;
        in.station = "shenzhen";
        in.run_id = "A1";
        in.mode = telemetry::Mode::EDGE_CONTROLLED;
        in.elevation_deg = 10.0 + 0.1 * i;
        in.slant_range_km = 1500.0 - i;
        in.doppler_hz = noise.normal(0.0, 30000.0);
        in.dtau_open_s = noise.normal(1e-6, 1.4e-6);
        in.dcfo_open_hz = noise.normal(0.0, 460.0);
        in.dtau_closed_s = noise.normal(0.0, 0.25e-6);
        in.dcfo_closed_hz = noise.normal(0.0, 42.0);
        in.handover_state = HandoverState::NORMAL;
        inputs.push_back(in);
    }

    RegimeWindow window(40);
    Rng rng(55);
    std::vector<telemetry::TelemetryRow> rows;
    for (const auto& in : inputs) {
        rows.push_back(telemetry::link_tick(in, window, th, params, rng));
    }

    // Oracle: recompose each row from the same inputs with fresh state.
    RegimeWindow window2(40);
    Rng rng2(55);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto expected = telemetry::link_tick(inputs[i], window2, th, params, rng2);
        CHECK(rows[i].t_s == expected.t_s);
        CHECK(rows[i].dtau_open_us == expected.dtau_open_us);
        CHECK(*rows[i].dtau_closed_us == *expected.dtau_closed_us);
        CHECK(rows[i].regime == expected.regime);
        CHECK(rows[i].goodput_mbps == expected.goodput_mbps);
        CHECK(rows[i].rtt_ms == expected.rtt_ms);
        CHECK(rows[i].loss_event == expected.loss_event);
        // Residual columns carry exactly their logged precision.
        CHECK(rows[i].dtau_open_us == telemetry::round_logged(inputs[i].dtau_open_s * 1e6, 6));
        CHECK(rows[i].dcfo_open_hz == telemetry::round_logged(inputs[i].dcfo_open_hz, 4));
    }
}

TEST_CASE("dwell and threshold validation") {
    StateDwellConfig bad;
    bad.t_warm_s = bad.t_warn_s + 1.0;
    CHECK_THROWS(validate(bad));
    RegimeThresholds th;
    th.tau_cp_s = 0.0;
    CHECK_THROWS(validate(th));
    TransportParams tp;
    tp.rate_degraded_mbps = tp.rate_nominal_mbps + 1.0;
    CHECK_THROWS(validate(tp));
    TransportParams tp2;
    tp2.loss_degraded = 1.5;
    CHECK_THROWS(validate(tp2));
}
