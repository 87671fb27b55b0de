#pragma once

#include "gridshaver/engine.hpp"

#include <map>
#include <ostream>
#include <string>

namespace gridshaver {

/// Six significant digits, as printed in every CSV column.
std::string format_value(double value);

inline constexpr const char* kTimeseriesHeader =
    "t_s,irradiance_wm2,pv_dc_kw,pv_ac_kw,demand_kw,served_kw,shed_ids,export_kw,import_kw,"
    "alarms,msgs_dropped";

void write_timeseries_csv(std::ostream& out, const RunResult& result);

struct RunSummary {
    double energy_imported_kwh = 0.0;
    double energy_exported_kwh = 0.0;
    double energy_served_kwh = 0.0;
    double energy_pv_ac_kwh = 0.0;
    double islanded_beyond_pv_kwh = 0.0;  // islanded demand not covered by tracked PV
    double peak_served_kw = 0.0;
    double peak_served_t_s = 0.0;
    double peak_demand_kw = 0.0;
    std::uint64_t shed_events = 0;
    std::uint64_t restore_events = 0;
    std::uint64_t alarm_count = 0;
    std::map<std::string, std::uint64_t> alarms_by_kind;
    ChannelStats channel;
};

/// Computed from the in-memory records.
RunSummary summarize(const RunResult& result, const Scenario& scenario);

void write_summary(std::ostream& out, const RunSummary& summary);

}  // namespace gridshaver
