#include "sdgs/telemetry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdgs::telemetry {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::EDGE_CONTROLLED: return "EDGE_CONTROLLED";
        case Mode::REFERENCE: return "REFERENCE";
        case Mode::PROBE: return "PROBE";
    }
    return "EDGE_CONTROLLED";
}

Mode mode_from_string(const std::string& s) {
    if (s == "EDGE_CONTROLLED") return Mode::EDGE_CONTROLLED;
    if (s == "REFERENCE") return Mode::REFERENCE;
    if (s == "PROBE") return Mode::PROBE;
    throw std::invalid_argument("unknown mode: " + s);
}

double TelemetryRow::active_dtau_abs_us() const {
    return dtau_closed_us.has_value() ? std::abs(*dtau_closed_us) : std::abs(dtau_open_us);
}

double TelemetryRow::active_dcfo_abs_hz() const {
    return dcfo_closed_hz.has_value() ? std::abs(*dcfo_closed_hz) : std::abs(dcfo_open_hz);
}

double round_logged(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

TelemetryRow link_tick(const LinkTickInputs& in, link_emulator::RegimeWindow& window,
                       const link_emulator::RegimeThresholds& thresholds,
                       const link_emulator::TransportParams& transport, Rng& rng) {
    TelemetryRow row;
    row.t_s = round_logged(in.t_s, 3);
    row.station = in.station;
    row.run_id = in.run_id;
    row.mode = in.mode;
    row.handover_state = in.handover_state;
    row.elevation_deg = round_logged(in.elevation_deg, 4);
    row.slant_range_km = round_logged(in.slant_range_km, 6);
    row.doppler_hz = round_logged(in.doppler_hz, 3);
    row.dtau_open_us = round_logged(in.dtau_open_s * 1e6, 6);
    row.dcfo_open_hz = round_logged(in.dcfo_open_hz, 4);
    if (in.dtau_closed_s.has_value()) {
        row.dtau_closed_us = round_logged(*in.dtau_closed_s * 1e6, 6);
    }
    if (in.dcfo_closed_hz.has_value()) {
        row.dcfo_closed_hz = round_logged(*in.dcfo_closed_hz, 4);
    }

    const auto stat = window.push(row.active_dtau_abs_us() * 1e-6, row.active_dcfo_abs_hz());
    row.regime = link_emulator::classify_regime(stat.tau_p95_s, stat.f_p95_hz, thresholds);

    const auto sample = link_emulator::transport_step(row.regime, transport, rng);
    row.goodput_mbps = round_logged(sample.goodput_mbps, 4);
    row.rtt_ms = round_logged(sample.rtt_ms, 4);
    row.loss_event = sample.loss_event;
    return row;
}

const char* const kCsvHeader =
    "t_s,station,run_id,mode,handover_state,elevation_deg,slant_range_km,doppler_hz,"
    "dtau_open_us,dcfo_open_hz,dtau_closed_us,dcfo_closed_hz,regime,goodput_mbps,rtt_ms,"
    "loss_event";

namespace {

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec) {
    return v.has_value() ? fmt(*v, spec) : std::string{};
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

}  // namespace

std::string to_csv_line(const TelemetryRow& row) {
    std::ostringstream os;
    os << fmt(row.t_s, "%.3f") << ',' << row.station << ',' << row.run_id << ','
       << to_string(row.mode) << ',' << link_emulator::to_string(row.handover_state) << ','
       << fmt(row.elevation_deg, "%.4f") << ',' << fmt(row.slant_range_km, "%.6f") << ','
       << fmt(row.doppler_hz, "%.3f") << ',' << fmt(row.dtau_open_us, "%.6f") << ','
       << fmt(row.dcfo_open_hz, "%.4f") << ',' << fmt_opt(row.dtau_closed_us, "%.6f") << ','
       << fmt_opt(row.dcfo_closed_hz, "%.4f") << ',' << link_emulator::to_string(row.regime)
       << ',' << fmt(row.goodput_mbps, "%.4f") << ',' << fmt(row.rtt_ms, "%.4f") << ','
       << (row.loss_event ? 1 : 0);
    return os.str();
}

TelemetryRow row_from_csv_line(const std::string& line) {
    const auto f = split_csv(line);
    if (f.size() != 16) {
        throw std::runtime_error("telemetry row has wrong field count: " + line);
    }
    TelemetryRow row;
    row.t_s = std::stod(f[0]);
    row.station = f[1];
    row.run_id = f[2];
    row.mode = mode_from_string(f[3]);
    row.handover_state = link_emulator::handover_state_from_string(f[4]);
    row.elevation_deg = std::stod(f[5]);
    row.slant_range_km = std::stod(f[6]);
    row.doppler_hz = std::stod(f[7]);
    row.dtau_open_us = std::stod(f[8]);
    row.dcfo_open_hz = std::stod(f[9]);
    row.dtau_closed_us = parse_opt(f[10]);
    row.dcfo_closed_hz = parse_opt(f[11]);
    row.regime = link_emulator::regime_from_string(f[12]);
    row.goodput_mbps = std::stod(f[13]);
    row.rtt_ms = std::stod(f[14]);
    row.loss_event = f[15] == "1";
    return row;
}

void write_csv(const std::vector<TelemetryRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);   // LF line endings everywhere
    if (!out) {
        throw std::runtime_error("cannot open telemetry file for writing: " + path);
    }
    out << kCsvHeader << '\n';
    for (const auto& row : rows) {
        out << to_csv_line(row) << '\n';
    }
}

std::vector<TelemetryRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open telemetry file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("telemetry file is empty: " + path);
    }
    if (line != kCsvHeader) {
        throw std::runtime_error("unexpected telemetry header in " + path);
    }
    std::vector<TelemetryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(row_from_csv_line(line));
    }
    return rows;
}

}  // namespace sdgs::telemetry
