#include "sdgs/sensitivity.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sdgs/campaign.hpp"
#include "sdgs/rng.hpp"

namespace sdgs::sensitivity {

namespace {

std::vector<double*> theta_slots(config::FullConfig& cfg) {
    return {
        &cfg.regime.thresholds.tau_cp_s,
        &cfg.regime.thresholds.f_scs_hz,
        &cfg.dwell.t_warn_s,
        &cfg.dwell.t_warm_s,
        &cfg.dwell.t_switch_s,
        &cfg.dwell.cleanup_dwell_s,
        &cfg.pid.integral_limit_tau,
        &cfg.pid.integral_limit_f,
        &cfg.transport.loss_nominal,
        &cfg.transport.loss_degraded,
    };
}

double rel_dev(double perturbed, double nominal) {
    return std::abs(perturbed - nominal) / std::abs(nominal);
}

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::vector<std::string> theta_names() {
    return {"tau_cp_s",       "f_scs_hz",       "t_warn_s",
            "t_warm_s",       "t_switch_s",     "cleanup_dwell_s",
            "integral_limit_tau", "integral_limit_f", "loss_nominal",
            "loss_degraded"};
}

SensitivityResult sensitivity_check(const config::FullConfig& cfg, int n_draws) {
    if (n_draws < 0) {
        throw std::invalid_argument("sensitivity_check: n_draws must be >= 0");
    }

    SensitivityResult result;
    {
        const auto nominal_ds = campaign::run_campaign(cfg);
        result.nominal = report::headline_metrics(nominal_ds, cfg);
    }

    Rng rng(derive_stream_seed(cfg.sensitivity.seed, "sensitivity"));
    const std::size_t n_theta = theta_names().size();

    for (int draw_idx = 0; draw_idx < n_draws; ++draw_idx) {
        Draw draw;
        draw.index = draw_idx;
        draw.epsilons.reserve(n_theta);
        for (std::size_t i = 0; i < n_theta; ++i) {
            draw.epsilons.push_back(rng.uniform(-0.2, 0.2));
        }

        config::FullConfig perturbed = cfg;
        auto slots = theta_slots(perturbed);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            *slots[i] *= 1.0 + draw.epsilons[i];
        }

        try {
            const auto ds = campaign::run_campaign(perturbed);
            for (const auto& run : ds.runs) {
                if (run.diverged) {
                    throw std::runtime_error("perturbed run diverged");
                }
            }
            const auto metrics = report::headline_metrics(ds, perturbed);
            draw.dev_goodput_uplift = rel_dev(metrics.goodput_uplift, result.nominal.goodput_uplift);
            draw.dev_rtt_p95_reduction =
                rel_dev(metrics.rtt_p95_reduction, result.nominal.rtt_p95_reduction);
            draw.dev_residual_p95 =
                std::max(rel_dev(metrics.ta_closed_p95_us, result.nominal.ta_closed_p95_us),
                         rel_dev(metrics.cfo_closed_p95_hz, result.nominal.cfo_closed_p95_hz));

            result.max_dev_goodput_uplift =
                std::max(result.max_dev_goodput_uplift, draw.dev_goodput_uplift);
            result.max_dev_rtt_p95_reduction =
                std::max(result.max_dev_rtt_p95_reduction, draw.dev_rtt_p95_reduction);
            result.max_dev_residual_p95 =
                std::max(result.max_dev_residual_p95, draw.dev_residual_p95);
        } catch (const std::exception&) {
            draw.unstable = true;
            ++result.n_unstable;
        }
        result.draws.push_back(std::move(draw));
    }
    return result;
}

std::string to_text_table(const SensitivityResult& r) {
    std::ostringstream os;
    os << "Implementation-constant sensitivity (+/-20% multiplicative perturbations)\n"
       << "draws: " << r.draws.size() << ", unstable flagged: " << r.n_unstable << "\n"
       << "metric                          max relative deviation\n"
       << "goodput uplift                  " << fmt(r.max_dev_goodput_uplift * 100.0, 2) << "%\n"
       << "P95 RTT reduction               " << fmt(r.max_dev_rtt_p95_reduction * 100.0, 2)
       << "%\n"
       << "closed-loop TA/CFO P95          " << fmt(r.max_dev_residual_p95 * 100.0, 2) << "%\n";
    return os.str();
}

std::string to_csv_table(const SensitivityResult& r) {
    std::ostringstream os;
    os << "draw,unstable,dev_goodput_uplift,dev_rtt_p95_reduction,dev_residual_p95\n";
    for (const auto& d : r.draws) {
        os << d.index << ',' << (d.unstable ? 1 : 0) << ',';
        if (d.unstable) {
            os << ",,\n";
        } else {
            os << fmt(d.dev_goodput_uplift, 6) << ',' << fmt(d.dev_rtt_p95_reduction, 6) << ','
               << fmt(d.dev_residual_p95, 6) << "\n";
        }
    }
    return os.str();
}

}  // namespace sdgs::sensitivity
