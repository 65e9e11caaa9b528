#include "sdgs/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sdgs/controller.hpp"
#include "sdgs/link_emulator.hpp"

namespace sdgs::campaign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t run_stream_seed(const config::FullConfig& cfg, const std::string& station_key,
                              const std::string& run_id) {
    return derive_stream_seed(cfg.campaign.seed, station_key + ":" + run_id);
}

// One full run: tick the uncertainty process and (in controlled modes) the
// residual loops at the control period; log every downsample-th tick through
// the regime guard and transport model.
RunResult simulate_run(const config::FullConfig& cfg, const StationWindow& window,
                       const config::RunSpec& spec) {
    RunResult result;
    result.station_key = window.station_key;
    result.spec = spec;
    result.seed = run_stream_seed(cfg, window.station_key, spec.id);

    const bool closed_loop = spec.mode != telemetry::Mode::REFERENCE;
    const double t_fb = cfg.pid.t_fb_s;
    const auto n_ticks =
        static_cast<std::size_t>((window.end_t_s - window.start_t_s) / t_fb);

    Rng bias_rng(derive_stream_seed(result.seed, "biases"));
    const auto biases = uncertainty::sample_run_biases(cfg.uncertainty, bias_rng);
    uncertainty::UncertaintyProcess process(cfg.uncertainty, biases, cfg.link,
                                            window.start_t_s,
                                            derive_stream_seed(result.seed, "uncertainty"));
    // The probe run samples its transport observations through an
    // independent stream, mirroring out-of-band RTT probing.
    const char* transport_stream = spec.mode == telemetry::Mode::PROBE ? "probe" : "transport";
    Rng transport_rng(derive_stream_seed(result.seed, transport_stream));

    controller::ClosedLoopTracker tracker(cfg.pid);
    link_emulator::RegimeWindow regime_window(
        static_cast<std::size_t>(cfg.regime.window_rows));
    auto handover = link_emulator::HandoverState::NORMAL;

    result.rows.reserve(n_ticks / static_cast<std::size_t>(cfg.campaign.downsample) + 1);
    for (std::size_t k = 0; k < n_ticks; ++k) {
        const double t = window.start_t_s + static_cast<double>(k) * t_fb;
        const auto sat = geometry::propagate(cfg.orbit, t);
        const auto geo = geometry::geometry_at(window.site, sat, cfg.link);
        const Vec3 los = geometry::los_unit_enu(window.site, sat);

        auto sample = process.open_loop_at(t, los);
        if (closed_loop) {
            try {
                const auto out = tracker.step(sample.dtau_open_s, sample.dcfo_open_hz);
                sample.dtau_closed_s = out.dtau_closed_s;
                sample.dcfo_closed_hz = out.dcfo_closed_hz;
            } catch (const controller::ControlDivergence&) {
                result.diverged = true;
                break;
            }
        }

        if (k % static_cast<std::size_t>(cfg.campaign.downsample) != 0) continue;

        const double time_to_los = window.end_t_s - t;
        handover = link_emulator::handover_step(handover, geo.elevation_deg, time_to_los,
                                                cfg.dwell, t - window.start_t_s);

        telemetry::LinkTickInputs tick;
        tick.t_s = t;
        tick.station = window.station_key;
        tick.run_id = spec.id;
        tick.mode = spec.mode;
        tick.elevation_deg = geo.elevation_deg;
        tick.slant_range_km = geo.slant_range_km;
        tick.doppler_hz = geo.doppler_hz;
        tick.dtau_open_s = sample.dtau_open_s;
        tick.dcfo_open_hz = sample.dcfo_open_hz;
        tick.dtau_closed_s = sample.dtau_closed_s;
        tick.dcfo_closed_hz = sample.dcfo_closed_hz;
        tick.handover_state = handover;

        result.rows.push_back(telemetry::link_tick(tick, regime_window,
                                                   cfg.regime.thresholds, cfg.transport,
                                                   transport_rng));
    }
    return result;
}

json sidecar_json(const RunResult& run, const StationWindow& window,
                  const std::string& config_hash) {
    json state_counts = json::object();
    for (const auto& row : run.rows) {
        const auto key = link_emulator::to_string(row.handover_state);
        state_counts[key] = state_counts.value(key, 0) + 1;
    }
    return json{{"run_id", run.spec.id},
                {"mode", telemetry::to_string(run.spec.mode)},
                {"station", run.station_key},
                {"seed", run.seed},
                {"config_hash", config_hash},
                {"start_t_s", window.start_t_s},
                {"end_t_s", window.end_t_s},
                {"row_counts", {{"total", run.rows.size()}, {"by_state", state_counts}}},
                {"diverged", run.diverged}};
}

}  // namespace

StationWindow compute_station_window(const config::FullConfig& cfg,
                                     const std::string& station_key) {
    auto it = cfg.station_catalog.find(station_key);
    if (it == cfg.station_catalog.end()) {
        throw std::invalid_argument("unknown station: " + station_key);
    }
    const auto& site = it->second;

    const auto passes = geometry::pass_window(site, cfg.orbit, 0.0, cfg.pass.search_horizon_s,
                                              cfg.pass.min_elevation_deg, cfg.link);
    if (passes.empty()) {
        throw std::runtime_error("no pass above " +
                                 std::to_string(cfg.pass.min_elevation_deg) +
                                 " deg for station " + station_key + " in the search horizon");
    }

    double best_el = -90.0;
    geometry::PassWindow best = passes.front();
    for (const auto& pass : passes) {
        const double t_peak = geometry::max_elevation_time(site, cfg.orbit, pass, cfg.link);
        const double el =
            geometry::geometry_at(site, geometry::propagate(cfg.orbit, t_peak), cfg.link)
                .elevation_deg;
        if (el > best_el) {
            best_el = el;
            best = pass;
        }
    }

    StationWindow window;
    window.station_key = station_key;
    window.site = site;
    window.end_t_s = best.set_t_s;
    window.start_t_s = std::max(best.rise_t_s, best.set_t_s - cfg.campaign.duration_cap_s);
    window.max_elevation_deg = best_el;
    return window;
}

CampaignDataset run_campaign(const config::FullConfig& cfg) {
    config::validate_or_throw(cfg);

    CampaignDataset ds;
    for (const auto& station_key : cfg.campaign.stations) {
        ds.windows.push_back(compute_station_window(cfg, station_key));
    }

    struct Task {
        const StationWindow* window;
        config::RunSpec spec;
    };
    std::vector<Task> tasks;
    const auto matrix = config::default_run_matrix();
    for (const auto& window : ds.windows) {
        for (const auto& spec : matrix) {
            tasks.push_back({&window, spec});
        }
    }

    std::set<std::uint64_t> seeds;
    for (const auto& task : tasks) {
        seeds.insert(run_stream_seed(cfg, task.window->station_key, task.spec.id));
    }
    if (seeds.size() != tasks.size()) {
        throw std::runtime_error("derived run seeds collide; choose a different campaign seed");
    }

    ds.runs.resize(tasks.size());
    int jobs = cfg.campaign.jobs;
    if (jobs <= 0) {
        jobs = static_cast<int>(std::min<std::size_t>(
            std::max(1u, std::thread::hardware_concurrency()), tasks.size()));
    }

    std::size_t next = 0;
    while (next < tasks.size()) {
        std::vector<std::pair<std::size_t, std::future<RunResult>>> batch;
        for (int j = 0; j < jobs && next < tasks.size(); ++j, ++next) {
            const auto& task = tasks[next];
            batch.emplace_back(next, std::async(std::launch::async, [&cfg, &task] {
                                   return simulate_run(cfg, *task.window, task.spec);
                               }));
        }
        for (auto& [idx, fut] : batch) {
            ds.runs[idx] = fut.get();
        }
    }
    return ds;
}

void write_dataset(const CampaignDataset& ds, const std::string& out_dir,
                   const std::string& config_hash) {
    const fs::path dir = fs::path(out_dir) / "telemetry";
    fs::create_directories(dir);
    for (const auto& run : ds.runs) {
        const std::string stem = "telemetry_" + run.station_key + "_" + run.spec.id;
        telemetry::write_csv(run.rows, (dir / (stem + ".csv")).string());

        const auto* window = &ds.windows.front();
        for (const auto& w : ds.windows) {
            if (w.station_key == run.station_key) window = &w;
        }
        std::ofstream side(dir / ("run_" + run.station_key + "_" + run.spec.id + ".json"));
        side << sidecar_json(run, *window, config_hash).dump(2) << '\n';
    }
}

CampaignDataset read_dataset(const config::FullConfig& cfg, const std::string& out_dir) {
    CampaignDataset ds;
    const fs::path dir = fs::path(out_dir) / "telemetry";
    if (!fs::exists(dir)) {
        throw std::runtime_error("no telemetry directory under " + out_dir);
    }
    for (const auto& station_key : cfg.campaign.stations) {
        ds.windows.push_back(compute_station_window(cfg, station_key));
        for (const auto& spec : config::default_run_matrix()) {
            const std::string stem = "telemetry_" + station_key + "_" + spec.id;
            const fs::path csv = dir / (stem + ".csv");
            if (!fs::exists(csv)) {
                throw std::runtime_error("missing telemetry for run group " + spec.id +
                                         " at station " + station_key);
            }
            RunResult run;
            run.station_key = station_key;
            run.spec = spec;
            run.rows = telemetry::read_csv(csv.string());
            const fs::path side = dir / ("run_" + station_key + "_" + spec.id + ".json");
            if (fs::exists(side)) {
                std::ifstream in(side);
                json j;
                in >> j;
                run.seed = j.value("seed", 0ull);
                run.diverged = j.value("diverged", false);
            }
            ds.runs.push_back(std::move(run));
        }
    }
    return ds;
}

std::vector<telemetry::TelemetryRow> steady_state_filter(
    const std::vector<telemetry::TelemetryRow>& rows) {
    std::vector<telemetry::TelemetryRow> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.handover_state == link_emulator::HandoverState::NORMAL) {
            out.push_back(row);
        }
    }
    return out;
}

RunSummary summarize_run(const RunResult& run) {
    const auto steady = steady_state_filter(run.rows);
    if (steady.empty()) {
        throw std::runtime_error("run " + run.spec.id + " at " + run.station_key +
                                 " has no steady-state coverage");
    }
    RunSummary s;
    s.run_id = run.spec.id;
    s.station_key = run.station_key;
    s.mode = run.spec.mode;
    s.n_rows_total = run.rows.size();
    s.n_rows_normal = steady.size();

    std::vector<double> goodput, rtt, ta, cfo;
    goodput.reserve(steady.size());
    rtt.reserve(steady.size());
    ta.reserve(steady.size());
    cfo.reserve(steady.size());
    for (const auto& row : steady) {
        goodput.push_back(row.goodput_mbps);
        rtt.push_back(row.rtt_ms);
        ta.push_back(row.active_dtau_abs_us());
        cfo.push_back(row.active_dcfo_abs_hz());
    }
    s.goodput_mean = stats::mean(goodput);
    s.goodput_std = goodput.size() >= 2 ? stats::sample_std(goodput)
                                        : std::numeric_limits<double>::quiet_NaN();
    s.rtt_mean = stats::mean(rtt);
    std::sort(rtt.begin(), rtt.end());
    s.rtt_p95 = stats::percentile_sorted(rtt, 0.95);
    s.rtt_p99 = stats::percentile_sorted(rtt, 0.99);
    s.ta_p95_us = stats::percentile(std::move(ta), 0.95);
    s.cfo_p95_hz = stats::percentile(std::move(cfo), 0.95);
    return s;
}

GroupSummary summarize_group(const std::vector<RunSummary>& runs) {
    if (runs.empty()) {
        throw std::runtime_error("cannot summarize an empty run group");
    }
    auto collect = [&runs](auto member) {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(r.*member);
        return stats::mean_std(v);
    };
    GroupSummary g;
    g.n_runs = runs.size();
    g.goodput_mean = collect(&RunSummary::goodput_mean);
    g.rtt_mean = collect(&RunSummary::rtt_mean);
    g.rtt_p95 = collect(&RunSummary::rtt_p95);
    g.rtt_p99 = collect(&RunSummary::rtt_p99);
    g.ta_p95_us = collect(&RunSummary::ta_p95_us);
    g.cfo_p95_hz = collect(&RunSummary::cfo_p95_hz);
    return g;
}

double TransientCounts::fraction(telemetry::Mode mode, const std::string& state) const {
    const auto& counts = mode == telemetry::Mode::REFERENCE ? reference : controlled;
    const auto total = mode == telemetry::Mode::REFERENCE ? reference_total : controlled_total;
    if (total == 0) return 0.0;
    auto it = counts.find(state);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(total);
}

TransientCounts transient_counts(const CampaignDataset& ds) {
    TransientCounts out;
    for (const auto& run : ds.runs) {
        if (run.spec.mode == telemetry::Mode::PROBE) continue;
        auto& counts =
            run.spec.mode == telemetry::Mode::REFERENCE ? out.reference : out.controlled;
        auto& total =
            run.spec.mode == telemetry::Mode::REFERENCE ? out.reference_total : out.controlled_total;
        for (const auto& row : run.rows) {
            ++counts[link_emulator::to_string(row.handover_state)];
            ++total;
        }
    }
    return out;
}

std::vector<RunSummary> summarize_matching(const CampaignDataset& ds,
                                           const std::string& station_key,
                                           telemetry::Mode mode) {
    std::vector<RunSummary> out;
    for (const auto& run : ds.runs) {
        if (run.station_key == station_key && run.spec.mode == mode) {
            out.push_back(summarize_run(run));
        }
    }
    return out;
}

}  // namespace sdgs::campaign
