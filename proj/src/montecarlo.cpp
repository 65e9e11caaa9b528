#include "sdgs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

#include "sdgs/campaign.hpp"
#include "sdgs/controller.hpp"
#include "sdgs/stats.hpp"

namespace sdgs::montecarlo {

namespace {

uncertainty::PercentileSummary summarize_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    return {stats::percentile_sorted(v, 0.50), stats::percentile_sorted(v, 0.95),
            stats::percentile_sorted(v, 0.99)};
}

struct Pool {
    std::vector<double> ta_open, cfo_open, ta_closed, cfo_closed;

    void append(Pool&& other) {
        auto move_into = [](std::vector<double>& dst, std::vector<double>& src) {
            dst.insert(dst.end(), src.begin(), src.end());
        };
        move_into(ta_open, other.ta_open);
        move_into(cfo_open, other.cfo_open);
        move_into(ta_closed, other.ta_closed);
        move_into(cfo_closed, other.cfo_closed);
    }
};

Pool run_chunk(const config::FullConfig& cfg, const uncertainty::McScenario& scenario,
               int first_run, int last_run) {
    Pool pool;
    const double warmup_end = scenario.t_start_s + cfg.montecarlo.warmup_s;
    for (int run = first_run; run < last_run; ++run) {
        const auto seed =
            derive_stream_seed(cfg.uncertainty.seed, "mc_open:" + std::to_string(run));
        auto traj = uncertainty::open_loop_trajectory(cfg.uncertainty, scenario, seed);
        for (const auto& s : traj) {
            pool.ta_open.push_back(std::abs(s.dtau_open_s) * 1e6);
            pool.cfo_open.push_back(std::abs(s.dcfo_open_hz));
        }
        const auto closed = controller::closed_loop_track(cfg.pid, std::move(traj));
        for (const auto& s : closed) {
            if (s.t_s < warmup_end) continue;
            pool.ta_closed.push_back(std::abs(*s.dtau_closed_s) * 1e6);
            pool.cfo_closed.push_back(std::abs(*s.dcfo_closed_hz));
        }
    }
    return pool;
}

}  // namespace

uncertainty::McScenario scenario_from_config(const config::FullConfig& cfg) {
    if (cfg.campaign.stations.empty()) {
        throw std::invalid_argument("montecarlo scenario needs at least one station");
    }
    const auto window = campaign::compute_station_window(cfg, cfg.campaign.stations.front());

    uncertainty::McScenario sc;
    sc.site = window.site;
    sc.orbit = cfg.orbit;
    sc.link = cfg.link;
    sc.t_fb_s = cfg.pid.t_fb_s;
    sc.duration_s = cfg.montecarlo.window_s;
    // Center the sampling window on the pass midpoint.
    const double mid = 0.5 * (window.start_t_s + window.end_t_s);
    sc.t_start_s = mid - 0.5 * cfg.montecarlo.window_s;
    return sc;
}

ResidualDistributions monte_carlo_residuals(const config::FullConfig& cfg) {
    const auto scenario = scenario_from_config(cfg);
    const int n_runs = cfg.montecarlo.n_runs;

    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int jobs = std::clamp(cfg.campaign.jobs > 0 ? cfg.campaign.jobs : hw, 1, 16);
    const int chunk = std::max(1, (n_runs + jobs - 1) / jobs);

    std::vector<std::future<Pool>> futures;
    for (int first = 0; first < n_runs; first += chunk) {
        const int last = std::min(n_runs, first + chunk);
        futures.push_back(std::async(std::launch::async, [&cfg, &scenario, first, last] {
            return run_chunk(cfg, scenario, first, last);
        }));
    }
    Pool pool;
    for (auto& fut : futures) {
        pool.append(fut.get());
    }

    ResidualDistributions out;
    out.pooled_open = pool.ta_open.size();
    out.pooled_closed = pool.ta_closed.size();
    out.ta_open_us = summarize_sorted(pool.ta_open);
    out.cfo_open_hz = summarize_sorted(pool.cfo_open);
    out.ta_closed_us = summarize_sorted(pool.ta_closed);
    out.cfo_closed_hz = summarize_sorted(pool.cfo_closed);
    return out;
}

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string to_text_table(const ResidualDistributions& d) {
    auto line = [](const char* label, const uncertainty::PercentileSummary& p, int decimals) {
        std::ostringstream os;
        os << label << std::string(38 - std::string(label).size(), ' ');
        os << std::setw(9) << fmt(p.p50, decimals) << std::setw(9) << fmt(p.p95, decimals)
           << std::setw(9) << fmt(p.p99, decimals) << "\n";
        return os.str();
    };
    std::ostringstream os;
    os << "Residual TA/CFO distribution summary\n"
       << "metric                                      P50      P95      P99\n"
       << line("residual TA after open-loop (us)", d.ta_open_us, 3)
       << line("residual TA after closed-loop (us)", d.ta_closed_us, 3)
       << line("residual CFO after open-loop (Hz)", d.cfo_open_hz, 1)
       << line("residual CFO after closed-loop (Hz)", d.cfo_closed_hz, 1)
       << "pooled samples: open=" << d.pooled_open << " closed=" << d.pooled_closed << "\n";
    return os.str();
}

std::string to_csv_table(const ResidualDistributions& d) {
    std::ostringstream os;
    os << "metric,p50,p95,p99\n"
       << "ta_open_us," << fmt(d.ta_open_us.p50, 6) << ',' << fmt(d.ta_open_us.p95, 6) << ','
       << fmt(d.ta_open_us.p99, 6) << "\n"
       << "ta_closed_us," << fmt(d.ta_closed_us.p50, 6) << ',' << fmt(d.ta_closed_us.p95, 6)
       << ',' << fmt(d.ta_closed_us.p99, 6) << "\n"
       << "cfo_open_hz," << fmt(d.cfo_open_hz.p50, 4) << ',' << fmt(d.cfo_open_hz.p95, 4) << ','
       << fmt(d.cfo_open_hz.p99, 4) << "\n"
       << "cfo_closed_hz," << fmt(d.cfo_closed_hz.p50, 4) << ',' << fmt(d.cfo_closed_hz.p95, 4)
       << ',' << fmt(d.cfo_closed_hz.p99, 4) << "\n";
    return os.str();
}

}  // namespace sdgs::montecarlo
