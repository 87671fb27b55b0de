#include "gridshaver/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>

namespace gridshaver {

std::string format_value(double value) {
    if (value == 0.0) return "0";  // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ';';
        out += item;
    }
    return out;
}

}  // namespace

void write_timeseries_csv(std::ostream& out, const RunResult& result) {
    out << kTimeseriesHeader << '\n';
    for (const auto& r : result.records) {
        out << format_value(r.t_s) << ',' << format_value(r.irradiance) << ','
            << format_value(r.pv_dc_kw) << ',' << format_value(r.pv_ac_kw) << ','
            << format_value(r.demand_kw) << ',' << format_value(r.served_kw) << ','
            << join(r.shed_ids) << ',' << format_value(r.decision.export_kw()) << ','
            << format_value(r.decision.import_kw()) << ',' << join(r.alarms) << ','
            << r.msgs_dropped << '\n';
    }
}

RunSummary summarize(const RunResult& result, const Scenario& scenario) {
    RunSummary s;
    s.energy_imported_kwh = result.ledger.energy_imported_kwh;
    s.energy_exported_kwh = result.ledger.energy_exported_kwh;
    s.shed_events = result.shed_events;
    s.restore_events = result.restore_events;
    s.channel = result.channel;
    const double hours = scenario.dt_s / 3600.0;
    for (const auto& r : result.records) {
        s.energy_served_kwh += r.served_kw * hours;
        s.energy_pv_ac_kwh += r.pv_ac_kw * hours;
        if (r.isolator == IsolatorState::Open) {
            s.islanded_beyond_pv_kwh += std::max(r.served_kw - r.pv_available_ac_kw, 0.0) * hours;
        }
        if (r.served_kw > s.peak_served_kw) {
            s.peak_served_kw = r.served_kw;
            s.peak_served_t_s = r.t_s;
        }
        s.peak_demand_kw = std::max(s.peak_demand_kw, r.demand_kw);
        for (const auto& alarm : r.alarms) {
            ++s.alarm_count;
            ++s.alarms_by_kind[alarm.substr(0, alarm.find(':'))];
        }
    }
    return s;
}

void write_summary(std::ostream& out, const RunSummary& s) {
    out << std::fixed << std::setprecision(2);
    out << "energy_imported_kwh: " << s.energy_imported_kwh << '\n'
        << "energy_exported_kwh: " << s.energy_exported_kwh << '\n'
        << "energy_served_kwh: " << s.energy_served_kwh << '\n'
        << "energy_pv_ac_kwh: " << s.energy_pv_ac_kwh << '\n'
        << "islanded_beyond_pv_kwh: " << s.islanded_beyond_pv_kwh << '\n'
        << "peak_served_kw: " << s.peak_served_kw << '\n'
        << "peak_served_t_s: " << s.peak_served_t_s << '\n'
        << "peak_demand_kw: " << s.peak_demand_kw << '\n'
        << "shed_events: " << s.shed_events << '\n'
        << "restore_events: " << s.restore_events << '\n'
        << "alarms: " << s.alarm_count << '\n';
    for (const auto& [kind, count] : s.alarms_by_kind) out << "alarms." << kind << ": " << count << '\n';
    out << "msgs_published: " << s.channel.published << '\n'
        << "msgs_delivered: " << s.channel.delivered << '\n'
        << "msgs_dropped: " << s.channel.dropped << '\n'
        << "msgs_queued: " << s.channel.queued << '\n';
}

}  // namespace gridshaver
