#pragma once

#include "gridshaver/ami.hpp"
#include "gridshaver/errors.hpp"
#include "gridshaver/grid.hpp"
#include "gridshaver/han.hpp"
#include "gridshaver/mppt.hpp"
#include "gridshaver/power_stage.hpp"
#include "gridshaver/profile.hpp"
#include "gridshaver/pv_model.hpp"
#include "gridshaver/scu.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gridshaver {

struct PvPlant {
    ModuleSpec module = ModuleSpec::from_datasheet(64.2, 5.96, 54.7, 5.58, 96);
    ArrayTopology topology{13, 5};
    int arrays = 5;
};

struct Scenario {
    double duration_s = 0.0;
    double dt_s = 60.0;
    double start_time_s = 0.0;  // time of day at t = 0, for reporting
    Profile irradiance;          // W/m^2 over scenario time
    Profile temperature = Profile::constant(kStcTemperature);  // degC
    Han han;
    std::vector<std::pair<double, IsolatorState>> mode_schedule{{0.0, IsolatorState::Closed}};
    PvPlant pv;
    MpptConfig mppt;
    InverterModel inverter;
    SibcParams converter;
    ShedPolicy policy;
    ChannelConfig ami;
    double meter_interval_s = 60.0;
    bool scu_enabled = true;
    std::uint64_t seed = 0;

    std::int64_t step_count() const;
    IsolatorState isolator_at(double t) const;
};

struct StepRecord {
    std::int64_t step = 0;
    double t_s = 0.0;
    double irradiance = 0.0;
    double temperature = 0.0;
    IsolatorState isolator = IsolatorState::Closed;
    double pv_dc_kw = 0.0;            // tracked DC power, all arrays
    double pv_available_ac_kw = 0.0;  // inverter output at the tracked DC power
    double pv_ac_kw = 0.0;            // AC power delivered to the microgrid bus
    double demand_kw = 0.0;           // demand with every load connected
    double served_kw = 0.0;           // demand of the loads actually connected
    std::vector<std::string> shed_ids;
    PowerFlowDecision decision;
    std::vector<std::string> alarms;
    std::uint64_t msgs_published = 0;
    std::uint64_t msgs_delivered = 0;
    std::uint64_t msgs_dropped = 0;
};

struct RunResult {
    std::vector<StepRecord> records;
    GridLedger ledger;
    ChannelStats channel;
    std::uint64_t shed_events = 0;
    std::uint64_t restore_events = 0;
};

/// Solver failure inside a run, tagged with the step it happened at.
class SimulationError : public Error {
public:
    SimulationError(std::int64_t step, const std::string& what);
    std::int64_t step() const { return step_; }

private:
    std::int64_t step_;
};

inline constexpr const char* kOverload = "Overload";
inline constexpr const char* kMpptNotSettled = "MpptNotSettled";

/// Fixed-step run: environment, PV tracking, inversion, metering, AMI delivery,
/// SCU decision, then grid settlement. SCU commands reach the load relays no
/// earlier than the next step.
RunResult run_scenario(const Scenario& s);

}  // namespace gridshaver
