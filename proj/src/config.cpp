#include "sdgs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sdgs::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

// Raw parsed file: section -> key -> value token.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            raw[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": key outside a [section]");
        }
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        }
        raw[section][key] = value;
    }
    return raw;
}

double parse_number(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + where + ": not a number: " + token);
    }
}

std::string parse_string(const std::string& token, const std::string& where) {
    if (token.size() < 2 || token.front() != '"' || token.back() != '"') {
        throw std::invalid_argument("config: " + where + ": expected \"string\"");
    }
    return token.substr(1, token.size() - 2);
}

std::vector<std::string> parse_array_tokens(const std::string& token, const std::string& where) {
    if (token.size() < 2 || token.front() != '[' || token.back() != ']') {
        throw std::invalid_argument("config: " + where + ": expected [array]");
    }
    std::vector<std::string> items;
    std::string cur;
    for (char c : token.substr(1, token.size() - 2)) {
        if (c == ',') {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cur = trim(cur);
    if (!cur.empty()) items.push_back(cur);
    return items;
}

// Typed accessor that tracks which keys were consumed, so leftovers can be
// reported as unknown keys.
class SectionReader {
public:
    SectionReader(RawConfig& raw, std::string section)
        : raw_(raw), section_(std::move(section)) {}

    bool present() const { return raw_.count(section_) > 0; }

    double number(const std::string& key, double fallback) {
        const auto* token = take(key);
        return token ? parse_number(*token, section_ + "." + key) : fallback;
    }

    int integer(const std::string& key, int fallback) {
        const auto* token = take(key);
        if (!token) return fallback;
        const double v = parse_number(*token, section_ + "." + key);
        if (v != std::floor(v)) {
            throw std::invalid_argument("config: " + section_ + "." + key +
                                        ": expected an integer");
        }
        return static_cast<int>(v);
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        const auto* token = take(key);
        if (!token) return fallback;
        try {
            return std::stoull(*token);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: " + section_ + "." + key +
                                        ": expected an unsigned integer");
        }
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const auto* token = take(key);
        return token ? parse_string(*token, section_ + "." + key) : fallback;
    }

    std::vector<std::string> string_array(const std::string& key,
                                          std::vector<std::string> fallback) {
        const auto* token = take(key);
        if (!token) return fallback;
        std::vector<std::string> out;
        for (const auto& item : parse_array_tokens(*token, section_ + "." + key)) {
            out.push_back(parse_string(item, section_ + "." + key));
        }
        return out;
    }

    std::vector<double> number_array(const std::string& key) {
        const auto* token = take(key);
        if (!token) return {};
        std::vector<double> out;
        for (const auto& item : parse_array_tokens(*token, section_ + "." + key)) {
            out.push_back(parse_number(item, section_ + "." + key));
        }
        return out;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        auto it = raw_.find(section_);
        if (it == raw_.end()) return out;
        for (const auto& [k, v] : it->second) out.push_back(k);
        return out;
    }

private:
    const std::string* take(const std::string& key) {
        auto it = raw_.find(section_);
        if (it == raw_.end()) return nullptr;
        auto kit = it->second.find(key);
        if (kit == it->second.end()) return nullptr;
        consumed_[key] = kit->second;
        it->second.erase(kit);
        return &consumed_[key];
    }

    RawConfig& raw_;
    std::string section_;
    std::map<std::string, std::string> consumed_;
};

geometry::GroundSite make_site(const std::string& name, double lat, double lon, double alt_m) {
    geometry::GroundSite s;
    s.name = name;
    s.lat_deg = lat;
    s.lon_deg = lon;
    s.alt_m = alt_m;
    return s;
}

}  // namespace

std::vector<geometry::GroundSite> FullConfig::campaign_stations() const {
    std::vector<geometry::GroundSite> out;
    for (const auto& key : campaign.stations) {
        auto it = station_catalog.find(key);
        if (it == station_catalog.end()) {
            throw std::invalid_argument("campaign references unknown station: " + key);
        }
        out.push_back(it->second);
    }
    return out;
}

FullConfig default_config() {
    FullConfig cfg;
    cfg.campaign.stations = {"shenzhen", "beijing", "tokyo", "los_angeles"};
    cfg.station_catalog = {
        {"shenzhen", make_site("Shenzhen", 22.5, 114.0, 0.0)},
        {"beijing", make_site("Beijing", 39.9, 116.4, 0.0)},
        {"tokyo", make_site("Tokyo", 35.7, 139.7, 0.0)},
        {"los_angeles", make_site("Los Angeles", 34.1, -118.2, 0.0)},
    };
    cfg.sweep.rows = {
        {5.0, 5.0, 0.1, 50.0},
        {10.0, 15.0, 0.5, 100.0},
        {20.0, 30.0, 1.0, 200.0},
    };
    return cfg;
}

std::vector<RunSpec> default_run_matrix() {
    return {
        {"A1", telemetry::Mode::EDGE_CONTROLLED}, {"A2", telemetry::Mode::EDGE_CONTROLLED},
        {"A3", telemetry::Mode::EDGE_CONTROLLED}, {"B1", telemetry::Mode::REFERENCE},
        {"B2", telemetry::Mode::REFERENCE},       {"B3", telemetry::Mode::REFERENCE},
        {"D1", telemetry::Mode::PROBE},
    };
}

FullConfig parse_config_text(const std::string& text) {
    RawConfig raw = parse_raw(text);
    FullConfig cfg = default_config();

    {
        SectionReader r(raw, "campaign");
        cfg.campaign.seed = r.seed("seed", cfg.campaign.seed);
        cfg.campaign.duration_cap_s = r.number("duration_cap_s", cfg.campaign.duration_cap_s);
        cfg.campaign.downsample = r.integer("downsample", cfg.campaign.downsample);
        cfg.campaign.jobs = r.integer("jobs", cfg.campaign.jobs);
        cfg.campaign.stations = r.string_array("stations", cfg.campaign.stations);
    }
    {
        SectionReader r(raw, "orbit");
        cfg.orbit.altitude_km = r.number("altitude_km", cfg.orbit.altitude_km);
        cfg.orbit.inclination_deg = r.number("inclination_deg", cfg.orbit.inclination_deg);
        cfg.orbit.raan_deg = r.number("raan_deg", cfg.orbit.raan_deg);
        cfg.orbit.phase_deg = r.number("phase_deg", cfg.orbit.phase_deg);
        cfg.orbit.epoch_s = r.number("epoch_s", cfg.orbit.epoch_s);
    }
    {
        SectionReader r(raw, "link");
        cfg.link.f_c_hz = r.number("f_c_hz", cfg.link.f_c_hz);
    }

    // Station sections, e.g. [station.shenzhen].
    std::vector<std::string> station_sections;
    for (const auto& [section, kv] : raw) {
        if (section.rfind("station.", 0) == 0) station_sections.push_back(section);
    }
    for (const auto& section : station_sections) {
        const std::string key = section.substr(std::string("station.").size());
        SectionReader r(raw, section);
        geometry::GroundSite base;
        auto it = cfg.station_catalog.find(key);
        if (it != cfg.station_catalog.end()) base = it->second;
        if (base.name.empty()) base.name = key;
        base.name = r.text("name", base.name);
        base.lat_deg = r.number("lat_deg", base.lat_deg);
        base.lon_deg = r.number("lon_deg", base.lon_deg);
        base.alt_m = r.number("alt_m", base.alt_m);
        cfg.station_catalog[key] = base;
    }

    {
        SectionReader r(raw, "uncertainty");
        auto& u = cfg.uncertainty;
        u.eph_along_track_bias_m = r.number("eph_along_track_bias_m", u.eph_along_track_bias_m);
        u.eph_drift_rw_m_per_sqrt_s =
            r.number("eph_drift_rw_m_per_sqrt_s", u.eph_drift_rw_m_per_sqrt_s);
        u.gnss_sigma_h_m = r.number("gnss_sigma_h_m", u.gnss_sigma_h_m);
        u.gnss_sigma_v_m = r.number("gnss_sigma_v_m", u.gnss_sigma_v_m);
        u.gnss_vel_sigma_ms = r.number("gnss_vel_sigma_ms", u.gnss_vel_sigma_ms);
        u.clock_bias_sigma_us = r.number("clock_bias_sigma_us", u.clock_bias_sigma_us);
        u.clock_drift_ppm = r.number("clock_drift_ppm", u.clock_drift_ppm);
        u.clock_resync_interval_s = r.number("clock_resync_interval_s", u.clock_resync_interval_s);
        u.prop_jitter_sigma_us = r.number("prop_jitter_sigma_us", u.prop_jitter_sigma_us);
        u.prop_corr_time_s = r.number("prop_corr_time_s", u.prop_corr_time_s);
        u.osc_static_sigma_hz = r.number("osc_static_sigma_hz", u.osc_static_sigma_hz);
        u.osc_white_sigma_hz = r.number("osc_white_sigma_hz", u.osc_white_sigma_hz);
        u.eph_vel_sigma_ms = r.number("eph_vel_sigma_ms", u.eph_vel_sigma_ms);
        u.eph_vel_corr_time_s = r.number("eph_vel_corr_time_s", u.eph_vel_corr_time_s);
        u.seed = r.seed("seed", u.seed);
    }
    {
        SectionReader r(raw, "controller");
        auto& p = cfg.pid;
        p.kp = r.number("kp", p.kp);
        p.ki = r.number("ki", p.ki);
        p.kd = r.number("kd", p.kd);
        p.t_fb_s = r.number("t_fb_s", p.t_fb_s);
        p.d_fb_s = r.number("d_fb_s", p.d_fb_s);
        p.quant_tau_s = r.number("quant_tau_s", p.quant_tau_s);
        p.quant_f_hz = r.number("quant_f_hz", p.quant_f_hz);
        p.integral_limit_tau = r.number("integral_limit_tau", p.integral_limit_tau);
        p.integral_limit_f = r.number("integral_limit_f", p.integral_limit_f);
    }
    {
        SectionReader r(raw, "regime");
        cfg.regime.thresholds.tau_cp_s = r.number("tau_cp_s", cfg.regime.thresholds.tau_cp_s);
        cfg.regime.thresholds.f_scs_hz = r.number("f_scs_hz", cfg.regime.thresholds.f_scs_hz);
        cfg.regime.window_rows = r.integer("window_rows", cfg.regime.window_rows);
    }
    {
        SectionReader r(raw, "transport");
        auto& t = cfg.transport;
        t.rate_nominal_mbps = r.number("rate_nominal_mbps", t.rate_nominal_mbps);
        t.rate_degraded_mbps = r.number("rate_degraded_mbps", t.rate_degraded_mbps);
        t.goodput_sigma_nominal_mbps =
            r.number("goodput_sigma_nominal_mbps", t.goodput_sigma_nominal_mbps);
        t.goodput_sigma_degraded_mbps =
            r.number("goodput_sigma_degraded_mbps", t.goodput_sigma_degraded_mbps);
        t.latency_base_ms = r.number("latency_base_ms", t.latency_base_ms);
        t.latency_retx_ms = r.number("latency_retx_ms", t.latency_retx_ms);
        t.jitter_nominal_ms = r.number("jitter_nominal_ms", t.jitter_nominal_ms);
        t.jitter_degraded_ms = r.number("jitter_degraded_ms", t.jitter_degraded_ms);
        t.loss_nominal = r.number("loss_nominal", t.loss_nominal);
        t.loss_degraded = r.number("loss_degraded", t.loss_degraded);
    }
    {
        SectionReader r(raw, "handover");
        auto& d = cfg.dwell;
        d.t_warn_s = r.number("t_warn_s", d.t_warn_s);
        d.t_warm_s = r.number("t_warm_s", d.t_warm_s);
        d.t_switch_s = r.number("t_switch_s", d.t_switch_s);
        d.cleanup_dwell_s = r.number("cleanup_dwell_s", d.cleanup_dwell_s);
    }
    {
        SectionReader r(raw, "pass");
        cfg.pass.min_elevation_deg = r.number("min_elevation_deg", cfg.pass.min_elevation_deg);
        cfg.pass.search_horizon_s = r.number("search_horizon_s", cfg.pass.search_horizon_s);
    }
    {
        SectionReader r(raw, "montecarlo");
        cfg.montecarlo.n_runs = r.integer("n_runs", cfg.montecarlo.n_runs);
        cfg.montecarlo.window_s = r.number("window_s", cfg.montecarlo.window_s);
        cfg.montecarlo.warmup_s = r.number("warmup_s", cfg.montecarlo.warmup_s);
    }
    {
        SectionReader r(raw, "sweep");
        cfg.sweep.runs_per_row = r.integer("runs_per_row", cfg.sweep.runs_per_row);
        std::vector<SweepRow> rows;
        for (int i = 1;; ++i) {
            const auto values = r.number_array("row_" + std::to_string(i));
            if (values.empty()) break;
            if (values.size() != 4) {
                throw std::invalid_argument(
                    "config: sweep.row_" + std::to_string(i) +
                    ": expected [t_fb_ms, d_fb_ms, quant_tau_us, quant_f_hz]");
            }
            rows.push_back({values[0], values[1], values[2], values[3]});
        }
        if (!rows.empty()) cfg.sweep.rows = rows;
    }
    {
        SectionReader r(raw, "sensitivity");
        cfg.sensitivity.n_draws = r.integer("n_draws", cfg.sensitivity.n_draws);
        cfg.sensitivity.seed = r.seed("seed", cfg.sensitivity.seed);
    }

    // Reject leftovers: every key must belong to the schema.
    for (const auto& [section, kv] : raw) {
        if (!kv.empty()) {
            throw std::invalid_argument("config: unknown key '" + kv.begin()->first +
                                        "' in section [" + section + "]");
        }
    }
    return cfg;
}

FullConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

// Shortest round-trip decimal form, so emitted configs stay readable while
// reparsing to the identical double.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_config_text(const FullConfig& cfg) {
    std::ostringstream os;
    os << "[campaign]\n"
       << "seed = " << cfg.campaign.seed << "\n"
       << "duration_cap_s = " << num(cfg.campaign.duration_cap_s) << "\n"
       << "downsample = " << cfg.campaign.downsample << "\n"
       << "jobs = " << cfg.campaign.jobs << "\n"
       << "stations = [";
    for (std::size_t i = 0; i < cfg.campaign.stations.size(); ++i) {
        os << (i ? ", " : "") << '"' << cfg.campaign.stations[i] << '"';
    }
    os << "]\n\n";

    os << "[orbit]\n"
       << "altitude_km = " << num(cfg.orbit.altitude_km) << "\n"
       << "inclination_deg = " << num(cfg.orbit.inclination_deg) << "\n"
       << "raan_deg = " << num(cfg.orbit.raan_deg) << "\n"
       << "phase_deg = " << num(cfg.orbit.phase_deg) << "\n"
       << "epoch_s = " << num(cfg.orbit.epoch_s) << "\n\n";

    os << "[link]\n"
       << "f_c_hz = " << num(cfg.link.f_c_hz) << "\n\n";

    for (const auto& [key, site] : cfg.station_catalog) {
        os << "[station." << key << "]\n"
           << "name = \"" << site.name << "\"\n"
           << "lat_deg = " << num(site.lat_deg) << "\n"
           << "lon_deg = " << num(site.lon_deg) << "\n"
           << "alt_m = " << num(site.alt_m) << "\n\n";
    }

    const auto& u = cfg.uncertainty;
    os << "[uncertainty]\n"
       << "eph_along_track_bias_m = " << num(u.eph_along_track_bias_m) << "\n"
       << "eph_drift_rw_m_per_sqrt_s = " << num(u.eph_drift_rw_m_per_sqrt_s) << "\n"
       << "gnss_sigma_h_m = " << num(u.gnss_sigma_h_m) << "\n"
       << "gnss_sigma_v_m = " << num(u.gnss_sigma_v_m) << "\n"
       << "gnss_vel_sigma_ms = " << num(u.gnss_vel_sigma_ms) << "\n"
       << "clock_bias_sigma_us = " << num(u.clock_bias_sigma_us) << "\n"
       << "clock_drift_ppm = " << num(u.clock_drift_ppm) << "\n"
       << "clock_resync_interval_s = " << num(u.clock_resync_interval_s) << "\n"
       << "prop_jitter_sigma_us = " << num(u.prop_jitter_sigma_us) << "\n"
       << "prop_corr_time_s = " << num(u.prop_corr_time_s) << "\n"
       << "osc_static_sigma_hz = " << num(u.osc_static_sigma_hz) << "\n"
       << "osc_white_sigma_hz = " << num(u.osc_white_sigma_hz) << "\n"
       << "eph_vel_sigma_ms = " << num(u.eph_vel_sigma_ms) << "\n"
       << "eph_vel_corr_time_s = " << num(u.eph_vel_corr_time_s) << "\n"
       << "seed = " << u.seed << "\n\n";

    const auto& p = cfg.pid;
    os << "[controller]\n"
       << "kp = " << num(p.kp) << "\n"
       << "ki = " << num(p.ki) << "\n"
       << "kd = " << num(p.kd) << "\n"
       << "t_fb_s = " << num(p.t_fb_s) << "\n"
       << "d_fb_s = " << num(p.d_fb_s) << "\n"
       << "quant_tau_s = " << num(p.quant_tau_s) << "\n"
       << "quant_f_hz = " << num(p.quant_f_hz) << "\n"
       << "integral_limit_tau = " << num(p.integral_limit_tau) << "\n"
       << "integral_limit_f = " << num(p.integral_limit_f) << "\n\n";

    os << "[regime]\n"
       << "tau_cp_s = " << num(cfg.regime.thresholds.tau_cp_s) << "\n"
       << "f_scs_hz = " << num(cfg.regime.thresholds.f_scs_hz) << "\n"
       << "window_rows = " << cfg.regime.window_rows << "\n\n";

    const auto& t = cfg.transport;
    os << "[transport]\n"
       << "rate_nominal_mbps = " << num(t.rate_nominal_mbps) << "\n"
       << "rate_degraded_mbps = " << num(t.rate_degraded_mbps) << "\n"
       << "goodput_sigma_nominal_mbps = " << num(t.goodput_sigma_nominal_mbps) << "\n"
       << "goodput_sigma_degraded_mbps = " << num(t.goodput_sigma_degraded_mbps) << "\n"
       << "latency_base_ms = " << num(t.latency_base_ms) << "\n"
       << "latency_retx_ms = " << num(t.latency_retx_ms) << "\n"
       << "jitter_nominal_ms = " << num(t.jitter_nominal_ms) << "\n"
       << "jitter_degraded_ms = " << num(t.jitter_degraded_ms) << "\n"
       << "loss_nominal = " << num(t.loss_nominal) << "\n"
       << "loss_degraded = " << num(t.loss_degraded) << "\n\n";

    os << "[handover]\n"
       << "t_warn_s = " << num(cfg.dwell.t_warn_s) << "\n"
       << "t_warm_s = " << num(cfg.dwell.t_warm_s) << "\n"
       << "t_switch_s = " << num(cfg.dwell.t_switch_s) << "\n"
       << "cleanup_dwell_s = " << num(cfg.dwell.cleanup_dwell_s) << "\n\n";

    os << "[pass]\n"
       << "min_elevation_deg = " << num(cfg.pass.min_elevation_deg) << "\n"
       << "search_horizon_s = " << num(cfg.pass.search_horizon_s) << "\n\n";

    os << "[montecarlo]\n"
       << "n_runs = " << cfg.montecarlo.n_runs << "\n"
       << "window_s = " << num(cfg.montecarlo.window_s) << "\n"
       << "warmup_s = " << num(cfg.montecarlo.warmup_s) << "\n\n";

    os << "[sweep]\n"
       << "runs_per_row = " << cfg.sweep.runs_per_row << "\n";
    for (std::size_t i = 0; i < cfg.sweep.rows.size(); ++i) {
        const auto& row = cfg.sweep.rows[i];
        os << "row_" << (i + 1) << " = [" << num(row.t_fb_ms) << ", " << num(row.d_fb_ms)
           << ", " << num(row.quant_tau_us) << ", " << num(row.quant_f_hz) << "]\n";
    }
    os << "\n[sensitivity]\n"
       << "n_draws = " << cfg.sensitivity.n_draws << "\n"
       << "seed = " << cfg.sensitivity.seed << "\n";
    return os.str();
}

std::vector<ValidationIssue> validate(const FullConfig& cfg) {
    std::vector<ValidationIssue> issues;
    auto check = [&issues](const std::string& section, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            issues.push_back({section, e.what()});
        }
    };

    check("orbit", [&] { geometry::validate(cfg.orbit); });
    check("link", [&] {
        if (!(cfg.link.f_c_hz > 0.0)) throw std::invalid_argument("f_c_hz must be > 0");
    });
    check("campaign", [&] {
        if (cfg.campaign.stations.empty()) {
            throw std::invalid_argument("campaign needs at least one station");
        }
        if (cfg.campaign.downsample < 1) {
            throw std::invalid_argument("downsample must be >= 1");
        }
        if (!(cfg.campaign.duration_cap_s > 0.0)) {
            throw std::invalid_argument("duration_cap_s must be > 0");
        }
        if (cfg.campaign.jobs < 0) {
            throw std::invalid_argument("jobs must be >= 0");
        }
        (void)cfg.campaign_stations();
        // A-runs are edge-controlled and B-runs are reference by
        // construction of the run matrix.
        for (const auto& spec : default_run_matrix()) {
            if (spec.id.front() == 'A' && spec.mode != telemetry::Mode::EDGE_CONTROLLED) {
                throw std::invalid_argument("run " + spec.id + " must be EDGE_CONTROLLED");
            }
            if (spec.id.front() == 'B' && spec.mode != telemetry::Mode::REFERENCE) {
                throw std::invalid_argument("run " + spec.id + " must be REFERENCE");
            }
        }
    });
    for (const auto& [key, site] : cfg.station_catalog) {
        check("station." + key, [&, site = site] { geometry::validate(site); });
    }
    check("uncertainty", [&] { uncertainty::validate(cfg.uncertainty); });
    check("controller", [&] { controller::validate(cfg.pid); });
    check("regime", [&] {
        link_emulator::validate(cfg.regime.thresholds);
        if (cfg.regime.window_rows < 1) {
            throw std::invalid_argument("window_rows must be >= 1");
        }
    });
    check("transport", [&] { link_emulator::validate(cfg.transport); });
    check("handover", [&] { link_emulator::validate(cfg.dwell); });
    check("pass", [&] {
        if (cfg.pass.min_elevation_deg < -90.0 || cfg.pass.min_elevation_deg > 90.0) {
            throw std::invalid_argument("min_elevation_deg must be in [-90, 90]");
        }
        if (!(cfg.pass.search_horizon_s > 0.0)) {
            throw std::invalid_argument("search_horizon_s must be > 0");
        }
    });
    check("montecarlo", [&] {
        if (cfg.montecarlo.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
        if (!(cfg.montecarlo.window_s > 0.0)) {
            throw std::invalid_argument("window_s must be > 0");
        }
        if (cfg.montecarlo.warmup_s < 0.0 ||
            cfg.montecarlo.warmup_s >= cfg.montecarlo.window_s) {
            throw std::invalid_argument("warmup_s must be in [0, window_s)");
        }
    });
    check("sweep", [&] {
        if (cfg.sweep.runs_per_row < 1) throw std::invalid_argument("runs_per_row must be >= 1");
        for (const auto& row : cfg.sweep.rows) {
            if (!(row.t_fb_ms > 0.0) || row.d_fb_ms < 0.0 || row.quant_tau_us < 0.0 ||
                row.quant_f_hz < 0.0) {
                throw std::invalid_argument("sweep rows need t_fb > 0 and non-negative knobs");
            }
        }
    });
    check("sensitivity", [&] {
        if (cfg.sensitivity.n_draws < 0) throw std::invalid_argument("n_draws must be >= 0");
    });
    return issues;
}

void validate_or_throw(const FullConfig& cfg) {
    const auto issues = validate(cfg);
    if (issues.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& issue : issues) {
        os << "\n  [" << issue.section << "] " << issue.message;
    }
    throw std::invalid_argument(os.str());
}

}  // namespace sdgs::config
