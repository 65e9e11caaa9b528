#include "sdgs/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sdgs/controller.hpp"
#include "sdgs/montecarlo.hpp"
#include "sdgs/stats.hpp"

namespace sdgs::sweep {

std::vector<SweepResultRow> delay_quantization_sweep(const config::FullConfig& cfg) {
    auto scenario = montecarlo::scenario_from_config(cfg);

    std::vector<SweepResultRow> out;
    for (std::size_t row_idx = 0; row_idx < cfg.sweep.rows.size(); ++row_idx) {
        const auto& knobs = cfg.sweep.rows[row_idx];

        controller::PidConfig pid = cfg.pid;
        pid.t_fb_s = knobs.t_fb_ms * 1e-3;
        pid.d_fb_s = knobs.d_fb_ms * 1e-3;
        pid.quant_tau_s = knobs.quant_tau_us * 1e-6;
        pid.quant_f_hz = knobs.quant_f_hz;

        auto row_scenario = scenario;
        row_scenario.t_fb_s = pid.t_fb_s;

        SweepResultRow result;
        result.knobs = knobs;

        std::vector<double> ta_abs_us;
        std::vector<double> cfo_abs_hz;
        const double warmup_end = row_scenario.t_start_s + cfg.montecarlo.warmup_s;
        for (int run = 0; run < cfg.sweep.runs_per_row; ++run) {
            const auto seed = derive_stream_seed(
                cfg.uncertainty.seed,
                "sweep:" + std::to_string(row_idx) + ":" + std::to_string(run));
            auto traj = uncertainty::open_loop_trajectory(cfg.uncertainty, row_scenario, seed);
            try {
                const auto closed = controller::closed_loop_track(pid, std::move(traj));
                for (const auto& s : closed) {
                    if (s.t_s < warmup_end) continue;
                    ta_abs_us.push_back(std::abs(*s.dtau_closed_s) * 1e6);
                    cfo_abs_hz.push_back(std::abs(*s.dcfo_closed_hz));
                }
            } catch (const controller::ControlDivergence&) {
                result.stable = false;
                break;
            }
        }
        if (result.stable && !ta_abs_us.empty()) {
            result.ta_p95_us = stats::percentile(std::move(ta_abs_us), 0.95);
            result.cfo_p95_hz = stats::percentile(std::move(cfo_abs_hz), 0.95);
        }
        out.push_back(result);
    }
    return out;
}

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string to_text_table(const std::vector<SweepResultRow>& rows) {
    std::ostringstream os;
    os << "Feedback delay/quantization sensitivity sweep\n"
       << "t_fb(ms)  d_fb(ms)  quant_tau(us)  quant_f(Hz)  TA P95(us)  CFO P95(Hz)  status\n";
    for (const auto& row : rows) {
        os << fmt(row.knobs.t_fb_ms, 1) << "       " << fmt(row.knobs.d_fb_ms, 1) << "       "
           << fmt(row.knobs.quant_tau_us, 2) << "           " << fmt(row.knobs.quant_f_hz, 0)
           << "          ";
        if (row.stable) {
            os << fmt(row.ta_p95_us, 3) << "       " << fmt(row.cfo_p95_hz, 1) << "       ok";
        } else {
            os << "-           -           UNSTABLE";
        }
        os << "\n";
    }
    return os.str();
}

std::string to_csv_table(const std::vector<SweepResultRow>& rows) {
    std::ostringstream os;
    os << "t_fb_ms,d_fb_ms,quant_tau_us,quant_f_hz,ta_p95_us,cfo_p95_hz,stable\n";
    for (const auto& row : rows) {
        os << fmt(row.knobs.t_fb_ms, 3) << ',' << fmt(row.knobs.d_fb_ms, 3) << ','
           << fmt(row.knobs.quant_tau_us, 3) << ',' << fmt(row.knobs.quant_f_hz, 1) << ',';
        if (row.stable) {
            os << fmt(row.ta_p95_us, 6) << ',' << fmt(row.cfo_p95_hz, 4) << ",1\n";
        } else {
            os << ",,0\n";
        }
    }
    return os.str();
}

}  // namespace sdgs::sweep
