#include "sdgs/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdgs::report {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string mean_std_str(const stats::MeanStd& m, int decimals) {
    if (std::isnan(m.std)) return fmt(m.mean, decimals);
    return fmt(m.mean, decimals) + " +/- " + fmt(m.std, decimals);
}

double pct_change(double reference, double controlled) {
    return (controlled - reference) / reference * 100.0;
}

struct StationGroups {
    std::string station_key;
    campaign::GroupSummary controlled;
    campaign::GroupSummary reference;
    std::vector<campaign::RunSummary> probe;
};

std::vector<StationGroups> collect_groups(const campaign::CampaignDataset& ds,
                                          const config::FullConfig& cfg) {
    std::vector<StationGroups> out;
    for (const auto& station_key : cfg.campaign.stations) {
        StationGroups g;
        g.station_key = station_key;
        const auto controlled =
            campaign::summarize_matching(ds, station_key, telemetry::Mode::EDGE_CONTROLLED);
        if (controlled.empty()) {
            throw std::runtime_error("cannot emit tables: missing edge-controlled (A) runs for "
                                     "station " + station_key);
        }
        const auto reference =
            campaign::summarize_matching(ds, station_key, telemetry::Mode::REFERENCE);
        if (reference.empty()) {
            throw std::runtime_error("cannot emit tables: missing reference (B) runs for "
                                     "station " + station_key);
        }
        g.controlled = campaign::summarize_group(controlled);
        g.reference = campaign::summarize_group(reference);
        g.probe = campaign::summarize_matching(ds, station_key, telemetry::Mode::PROBE);
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace

HeadlineMetrics headline_metrics(const campaign::CampaignDataset& ds,
                                 const config::FullConfig& cfg) {
    const auto groups = collect_groups(ds, cfg);
    const auto& primary = groups.front();

    HeadlineMetrics m;
    m.goodput_uplift = (primary.controlled.goodput_mean.mean - primary.reference.goodput_mean.mean) /
                       primary.reference.goodput_mean.mean;
    m.rtt_p95_reduction =
        (primary.reference.rtt_p95.mean - primary.controlled.rtt_p95.mean) /
        primary.reference.rtt_p95.mean;

    double ta = 0.0;
    double cfo = 0.0;
    for (const auto& g : groups) {
        ta += g.controlled.ta_p95_us.mean;
        cfo += g.controlled.cfo_p95_hz.mean;
    }
    m.ta_closed_p95_us = ta / static_cast<double>(groups.size());
    m.cfo_closed_p95_hz = cfo / static_cast<double>(groups.size());
    return m;
}

Report emit_tables(const campaign::CampaignDataset& ds,
                   const montecarlo::ResidualDistributions& mc, const config::FullConfig& cfg) {
    const auto groups = collect_groups(ds, cfg);
    const auto& primary = groups.front();

    Report report;

    {
        std::ostringstream text;
        std::ostringstream csv;
        text << "Steady-state comparison, primary station (" << primary.station_key
             << "), NORMAL rows, n=" << primary.reference.n_runs << " per group\n";
        text << "metric                     reference            edge-controlled      change\n";
        csv << "metric,reference_mean,reference_std,controlled_mean,controlled_std,change_pct\n";

        struct Line {
            const char* label;
            const char* key;
            const stats::MeanStd* ref;
            const stats::MeanStd* ctl;
            int decimals;
        };
        const Line lines[] = {
            {"artifact goodput (Mbps)", "goodput_mbps", &primary.reference.goodput_mean,
             &primary.controlled.goodput_mean, 2},
            {"mean RTT (ms)", "rtt_mean_ms", &primary.reference.rtt_mean,
             &primary.controlled.rtt_mean, 2},
            {"P95 RTT (ms)", "rtt_p95_ms", &primary.reference.rtt_p95,
             &primary.controlled.rtt_p95, 2},
            {"P99 RTT (ms)", "rtt_p99_ms", &primary.reference.rtt_p99,
             &primary.controlled.rtt_p99, 2},
        };
        for (const auto& line : lines) {
            const double change = pct_change(line.ref->mean, line.ctl->mean);
            text << line.label << std::string(27 - std::string(line.label).size(), ' ')
                 << mean_std_str(*line.ref, line.decimals) << std::string(8, ' ')
                 << mean_std_str(*line.ctl, line.decimals) << std::string(8, ' ')
                 << (change >= 0 ? "+" : "") << fmt(change, 1) << "%\n";
            csv << line.key << ',' << fmt(line.ref->mean, 4) << ','
                << (std::isnan(line.ref->std) ? "" : fmt(line.ref->std, 4)) << ','
                << fmt(line.ctl->mean, 4) << ','
                << (std::isnan(line.ctl->std) ? "" : fmt(line.ctl->std, 4)) << ','
                << fmt(change, 2) << "\n";
        }
        report.steady_state = {"table1_steady_state", text.str(), csv.str()};
    }

    {
        std::ostringstream text;
        std::ostringstream csv;
        text << "Cross-station summary, NORMAL rows\n"
             << "station        ref goodput  ctl goodput  change     TA P95(us)  CFO P95(Hz)\n";
        csv << "station,reference_goodput_mbps,controlled_goodput_mbps,change_pct,"
               "ta_closed_p95_us,cfo_closed_p95_hz\n";
        for (const auto& g : groups) {
            const double change =
                pct_change(g.reference.goodput_mean.mean, g.controlled.goodput_mean.mean);
            text << g.station_key << std::string(15 - g.station_key.size(), ' ')
                 << fmt(g.reference.goodput_mean.mean, 2) << "        "
                 << fmt(g.controlled.goodput_mean.mean, 2) << "       +" << fmt(change, 1)
                 << "%    " << fmt(g.controlled.ta_p95_us.mean, 2) << "        "
                 << fmt(g.controlled.cfo_p95_hz.mean, 0) << "\n";
            csv << g.station_key << ',' << fmt(g.reference.goodput_mean.mean, 4) << ','
                << fmt(g.controlled.goodput_mean.mean, 4) << ',' << fmt(change, 2) << ','
                << fmt(g.controlled.ta_p95_us.mean, 4) << ','
                << fmt(g.controlled.cfo_p95_hz.mean, 2) << "\n";
        }
        report.cross_station = {"table2_cross_station", text.str(), csv.str()};
    }

    {
        // Campaign side: open-loop percentiles from the reference group,
        // closed-loop from the edge-controlled group, averaged over stations.
        double ta_open = 0.0, ta_closed = 0.0, cfo_open = 0.0, cfo_closed = 0.0;
        for (const auto& g : groups) {
            ta_open += g.reference.ta_p95_us.mean;
            cfo_open += g.reference.cfo_p95_hz.mean;
            ta_closed += g.controlled.ta_p95_us.mean;
            cfo_closed += g.controlled.cfo_p95_hz.mean;
        }
        const double n = static_cast<double>(groups.size());
        ta_open /= n; cfo_open /= n; ta_closed /= n; cfo_closed /= n;

        std::ostringstream text;
        std::ostringstream csv;
        text << "Reconciliation of model-based and campaign residual evidence (P95)\n"
             << "metric                     model-based   campaign\n"
             << "residual TA open (us)      " << fmt(mc.ta_open_us.p95, 2) << "          "
             << fmt(ta_open, 2) << "\n"
             << "residual TA closed (us)    " << fmt(mc.ta_closed_us.p95, 2) << "          "
             << fmt(ta_closed, 2) << "\n"
             << "residual CFO open (Hz)     " << fmt(mc.cfo_open_hz.p95, 0) << "           "
             << fmt(cfo_open, 0) << "\n"
             << "residual CFO closed (Hz)   " << fmt(mc.cfo_closed_hz.p95, 0) << "            "
             << fmt(cfo_closed, 0) << "\n";
        csv << "metric,model_based_p95,campaign_p95\n"
            << "ta_open_us," << fmt(mc.ta_open_us.p95, 4) << ',' << fmt(ta_open, 4) << "\n"
            << "ta_closed_us," << fmt(mc.ta_closed_us.p95, 4) << ',' << fmt(ta_closed, 4) << "\n"
            << "cfo_open_hz," << fmt(mc.cfo_open_hz.p95, 2) << ',' << fmt(cfo_open, 2) << "\n"
            << "cfo_closed_hz," << fmt(mc.cfo_closed_hz.p95, 2) << ',' << fmt(cfo_closed, 2)
            << "\n";
        report.reconciliation = {"table3_reconciliation", text.str(), csv.str()};
    }

    {
        const auto counts = campaign::transient_counts(ds);
        const char* states[] = {"NORMAL", "PRE_WARN", "PRE_WARM", "SWITCHING", "CLEANUP"};
        std::ostringstream text;
        std::ostringstream csv;
        text << "Handover-state row accounting (probe runs excluded)\n"
             << "state       controlled rows (frac)    reference rows (frac)\n";
        csv << "state,controlled_rows,controlled_fraction,reference_rows,reference_fraction\n";
        for (const char* state : states) {
            const auto c_it = counts.controlled.find(state);
            const auto r_it = counts.reference.find(state);
            const std::size_t c = c_it == counts.controlled.end() ? 0 : c_it->second;
            const std::size_t r = r_it == counts.reference.end() ? 0 : r_it->second;
            const double cf = counts.fraction(telemetry::Mode::EDGE_CONTROLLED, state) * 100.0;
            const double rf = counts.fraction(telemetry::Mode::REFERENCE, state) * 100.0;
            text << state << std::string(12 - std::string(state).size(), ' ') << c << " ("
                 << fmt(cf, 1) << "%)" << std::string(12, ' ') << r << " (" << fmt(rf, 1)
                 << "%)\n";
            csv << state << ',' << c << ',' << fmt(cf, 3) << ',' << r << ',' << fmt(rf, 3)
                << "\n";
        }
        text << "total       " << counts.controlled_total << std::string(18, ' ')
             << counts.reference_total << "\n";
        report.transients = {"table4_transients", text.str(), csv.str()};
    }

    {
        // D1 fidelity: probe-stream RTT must agree with the A-group mean.
        double probe_rtt = 0.0;
        double a_rtt = 0.0;
        std::size_t n_probe = 0;
        std::size_t n_a = 0;
        for (const auto& g : groups) {
            for (const auto& p : g.probe) {
                probe_rtt += p.rtt_mean;
                ++n_probe;
            }
            a_rtt += g.controlled.rtt_mean.mean;
            ++n_a;
        }
        std::ostringstream os;
        if (n_probe == 0) {
            os << "probe check: no probe (D) runs in dataset\n";
        } else {
            probe_rtt /= static_cast<double>(n_probe);
            a_rtt /= static_cast<double>(n_a);
            const double rel = std::abs(probe_rtt - a_rtt) / a_rtt;
            os << "probe check: D1 mean RTT " << fmt(probe_rtt, 2) << " ms vs A-group "
               << fmt(a_rtt, 2) << " ms, relative gap " << fmt(rel * 100.0, 2) << "% ("
               << (rel <= 0.10 ? "PASS" : "FAIL") << ", tolerance 10%)\n";
        }
        report.probe_check = os.str();
    }

    return report;
}

void write_report(const Report& report, const std::string& out_dir) {
    const fs::path dir = fs::path(out_dir) / "reports";
    fs::create_directories(dir);
    for (const auto* table :
         {&report.steady_state, &report.cross_station, &report.reconciliation,
          &report.transients}) {
        std::ofstream text(dir / (table->name + ".txt"), std::ios::binary);
        text << table->text;
        std::ofstream csv(dir / (table->name + ".csv"), std::ios::binary);
        csv << table->csv;
    }
    std::ofstream probe(dir / "probe_check.txt", std::ios::binary);
    probe << report.probe_check;
}

}  // namespace sdgs::report
