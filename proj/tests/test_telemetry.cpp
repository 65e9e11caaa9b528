#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "sdgs/rng.hpp"
#include "sdgs/telemetry.hpp"

using namespace sdgs;
using namespace sdgs::telemetry;

namespace {

TelemetryRow sample_row() {
    TelemetryRow row;
    row.t_s = 123.4;
    row.station = "shenzhen";
    row.run_id = "A1";
    row.mode = Mode::EDGE_CONTROLLED;
    row.handover_state = link_emulator::HandoverState::PRE_WARN;
    row.elevation_deg = 42.1234;
    row.slant_range_km = 812.345678;
    row.doppler_hz = -23456.789;
    row.dtau_open_us = 1.234567;
    row.dcfo_open_hz = -345.6789;
    row.dtau_closed_us = 0.123456;
    row.dcfo_closed_hz = 45.6789;
    row.regime = link_emulator::Regime::NOMINAL;
    row.goodput_mbps = 196.1234;
    row.rtt_ms = 32.5678;
    row.loss_event = true;
    return row;
}

}  // namespace

TEST_CASE("csv line round-trips every field") {
    const auto row = sample_row();
    const auto parsed = row_from_csv_line(to_csv_line(row));
    CHECK(parsed.t_s == row.t_s);
    CHECK(parsed.station == row.station);
    CHECK(parsed.run_id == row.run_id);
    CHECK(parsed.mode == row.mode);
    CHECK(parsed.handover_state == row.handover_state);
    CHECK(parsed.elevation_deg == row.elevation_deg);
    CHECK(parsed.slant_range_km == row.slant_range_km);
    CHECK(parsed.doppler_hz == row.doppler_hz);
    CHECK(parsed.dtau_open_us == row.dtau_open_us);
    CHECK(parsed.dcfo_open_hz == row.dcfo_open_hz);
    CHECK(parsed.dtau_closed_us == row.dtau_closed_us);
    CHECK(parsed.dcfo_closed_hz == row.dcfo_closed_hz);
    CHECK(parsed.regime == row.regime);
    CHECK(parsed.goodput_mbps == row.goodput_mbps);
    CHECK(parsed.rtt_ms == row.rtt_ms);
    CHECK(parsed.loss_event == row.loss_event);
}

TEST_CASE("reference rows leave closed-loop fields empty") {
    auto row = sample_row();
    row.mode = Mode::REFERENCE;
    row.dtau_closed_us.reset();
    row.dcfo_closed_hz.reset();
    const auto line = to_csv_line(row);
    // Two consecutive empty fields between the open-loop CFO and the regime.
    CHECK(line.find(",,,NOMINAL") != std::string::npos);
    const auto parsed = row_from_csv_line(line);
    CHECK_FALSE(parsed.dtau_closed_us.has_value());
    CHECK_FALSE(parsed.dcfo_closed_hz.has_value());
    CHECK(parsed.active_dtau_abs_us() == row.dtau_open_us);
}

TEST_CASE("active residual picks closed-loop when present") {
    const auto row = sample_row();
    CHECK(row.active_dtau_abs_us() == 0.123456);
    CHECK(row.active_dcfo_abs_hz() == 45.6789);
}

TEST_CASE("random rounded rows round-trip bit-exactly through text") {
    Rng rng(88);
    auto round_to = [](double v, int decimals) {
        const double scale = std::pow(10.0, decimals);
        return std::round(v * scale) / scale;
    };
    for (int i = 0; i < 2000; ++i) {
        TelemetryRow row = sample_row();
        row.dtau_open_us = round_to(rng.normal(0.0, 3.0), 6);
        row.dcfo_open_hz = round_to(rng.normal(0.0, 800.0), 4);
        row.dtau_closed_us = round_to(rng.normal(0.0, 0.5), 6);
        row.dcfo_closed_hz = round_to(rng.normal(0.0, 90.0), 4);
        row.goodput_mbps = round_to(rng.uniform(0.0, 200.0), 4);
        row.rtt_ms = round_to(rng.uniform(20.0, 120.0), 4);
        const auto parsed = row_from_csv_line(to_csv_line(row));
        CHECK(parsed.dtau_open_us == row.dtau_open_us);
        CHECK(parsed.dcfo_open_hz == row.dcfo_open_hz);
        CHECK(*parsed.dtau_closed_us == *row.dtau_closed_us);
        CHECK(*parsed.dcfo_closed_hz == *row.dcfo_closed_hz);
        CHECK(parsed.goodput_mbps == row.goodput_mbps);
        CHECK(parsed.rtt_ms == row.rtt_ms);
    }
}

TEST_CASE("csv file write/read preserves order and header") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "sdgs_telemetry_test";
    fs::create_directories(dir);
    const auto path = (dir / "rows.csv").string();

    std::vector<TelemetryRow> rows;
    for (int i = 0; i < 10; ++i) {
        auto row = sample_row();
        row.t_s = 100.0 + i;
        rows.push_back(row);
    }
    write_csv(rows, path);
    const auto back = read_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].t_s == rows[i].t_s);
    }
    fs::remove_all(dir);
}
