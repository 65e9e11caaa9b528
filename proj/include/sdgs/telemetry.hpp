#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdgs/link_emulator.hpp"
#include "sdgs/rng.hpp"

namespace sdgs::telemetry {

enum class Mode { EDGE_CONTROLLED, REFERENCE, PROBE };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// One logged tick. Closed-loop residual fields are absent in REFERENCE mode.
struct TelemetryRow {
    double t_s = 0.0;
    std::string station;
    std::string run_id;
    Mode mode = Mode::EDGE_CONTROLLED;
    link_emulator::HandoverState handover_state = link_emulator::HandoverState::NORMAL;
    double elevation_deg = 0.0;
    double slant_range_km = 0.0;
    double doppler_hz = 0.0;
    double dtau_open_us = 0.0;
    double dcfo_open_hz = 0.0;
    std::optional<double> dtau_closed_us;
    std::optional<double> dcfo_closed_hz;
    link_emulator::Regime regime = link_emulator::Regime::NOMINAL;
    double goodput_mbps = 0.0;
    double rtt_ms = 0.0;
    bool loss_event = false;

    // Residual magnitudes the regime guard acts on: closed-loop when the edge
    // loop runs, open-loop in reference mode.
    double active_dtau_abs_us() const;
    double active_dcfo_abs_hz() const;
};

// One emulator tick: classifies the transport regime from the trailing
// window of the active residual, draws the transport sample, and assembles
// the telemetry row. Residuals and geometry are rounded to their logged
// precision first, so the stored regime is recomputable from the file text.
// Rows are always produced.
struct LinkTickInputs {
    double t_s = 0.0;
    std::string station;
    std::string run_id;
    Mode mode = Mode::EDGE_CONTROLLED;
    double elevation_deg = 0.0;
    double slant_range_km = 0.0;
    double doppler_hz = 0.0;
    double dtau_open_s = 0.0;
    double dcfo_open_hz = 0.0;
    std::optional<double> dtau_closed_s;
    std::optional<double> dcfo_closed_hz;
    link_emulator::HandoverState handover_state = link_emulator::HandoverState::NORMAL;
};

TelemetryRow link_tick(const LinkTickInputs& in, link_emulator::RegimeWindow& window,
                       const link_emulator::RegimeThresholds& thresholds,
                       const link_emulator::TransportParams& transport, Rng& rng);

// Rounds to the CSV precision of the corresponding column.
double round_logged(double v, int decimals);

// CSV header, exactly the row field names in order.
extern const char* const kCsvHeader;

std::string to_csv_line(const TelemetryRow& row);
TelemetryRow row_from_csv_line(const std::string& line);

void write_csv(const std::vector<TelemetryRow>& rows, const std::string& path);
std::vector<TelemetryRow> read_csv(const std::string& path);

}  // namespace sdgs::telemetry
