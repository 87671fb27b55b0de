#include "gridshaver/engine.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <type_traits>

namespace gridshaver {

SimulationError::SimulationError(std::int64_t step, const std::string& what)
    : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

std::int64_t Scenario::step_count() const {
    return static_cast<std::int64_t>(std::ceil(duration_s / dt_s - 1e-9));
}

IsolatorState Scenario::isolator_at(double t) const {
    IsolatorState state = IsolatorState::Closed;
    for (const auto& [time, mode] : mode_schedule) {
        if (time <= t) state = mode;
    }
    return state;
}

namespace {

// Everything the head end has heard so far.
struct HeadEnd {
    std::map<std::string, double> meter_kw;
    std::map<std::string, double> gen_kw;

    double reported_demand() const {
        double total = 0.0;
        for (const auto& [id, kw] : meter_kw) total += kw;
        return total;
    }
};

class Run {
public:
    explicit Run(const Scenario& s) : s_(s), channel_(channel_config(s)) {
        params_stc_ = fit_two_diode(s.pv.module);
        trackers_.assign(static_cast<std::size_t>(s.pv.arrays), MpptState::at_duty(s.mppt.d_min));
    }

    RunResult execute() {
        RunResult out;
        const std::int64_t n = s_.step_count();
        out.records.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            try {
                out.records.push_back(step(k, out));
            } catch (const SimulationError&) {
                throw;
            } catch (const Error& e) {
                throw SimulationError(k, e.what());
            }
        }
        out.channel = channel_.stats();
        return out;
    }

private:
    static ChannelConfig channel_config(const Scenario& s) {
        ChannelConfig cfg = s.ami;
        cfg.seed = s.seed;
        return cfg;
    }

    void deliver(std::int64_t k) {
        for (auto& msg : channel_.poll_due(k)) {
            std::visit(
                [&](auto& m) {
                    using T = std::decay_t<decltype(m)>;
                    if constexpr (std::is_same_v<T, MeterReport>) {
                        head_end_.meter_kw[m.reading.meter_id] = m.reading.active_kw;
                    } else if constexpr (std::is_same_v<T, GenReport>) {
                        head_end_.gen_kw[m.site_id] = m.kw;
                    } else if constexpr (std::is_same_v<T, ShedCommand>) {
                        relays_open_.insert(m.load_id);
                    } else {
                        relays_open_.erase(m.load_id);
                    }
                },
                msg);
        }
    }

    StepRecord step(std::int64_t k, RunResult& out) {
        StepRecord rec;
        rec.step = k;
        rec.t_s = static_cast<double>(k) * s_.dt_s;
        rec.isolator = s_.isolator_at(rec.t_s);
        if (k > 0 && previous_isolator_ == IsolatorState::Open &&
            rec.isolator == IsolatorState::Closed) {
            // Reconnection recloses every relay.
            relays_open_.clear();
            scu_.shed.clear();
        }
        previous_isolator_ = rec.isolator;

        // Environment and generation.
        const Environment env{s_.irradiance.at(rec.t_s), s_.temperature.at(rec.t_s)};
        rec.irradiance = env.irradiance;
        rec.temperature = env.temperature;
        std::vector<double> site_ac(trackers_.size(), 0.0);
        for (std::size_t a = 0; a < trackers_.size(); ++a) {
            double dc_kw = 0.0;
            if (env.irradiance > 0.0) {
                const TrackResult tr = track_quasi_static(params_stc_, s_.pv.topology, env, s_.mppt,
                                                          s_.inverter.v_dc_target, trackers_[a]);
                trackers_[a] = tr.state;
                dc_kw = std::max(tr.point.p, 0.0) / 1000.0;
                if (!tr.settled) rec.alarms.push_back(std::string(kMpptNotSettled) + ":array" +
                                                      std::to_string(a + 1));
            }
            site_ac[a] = inverter_ac_power(dc_kw, s_.inverter);
            rec.pv_dc_kw += dc_kw;
            rec.pv_available_ac_kw += site_ac[a];
        }

        // Relays act on commands issued in earlier steps.
        deliver(k);
        rec.shed_ids.assign(relays_open_.begin(), relays_open_.end());
        rec.demand_kw = aggregate_demand(s_.han, rec.t_s);
        rec.served_kw = aggregate_demand(s_.han, rec.t_s, relays_open_);

        // Metering.
        const double periods = rec.t_s / s_.meter_interval_s;
        if (std::abs(periods - std::round(periods)) < 1e-9) {
            for (const auto& home : s_.han.homes()) {
                channel_.publish(
                    MeterReport{meter_sample(home, rec.t_s, s_.meter_interval_s, relays_open_)}, k);
            }
            for (std::size_t a = 0; a < site_ac.size(); ++a) {
                channel_.publish(
                    GenReport{"array" + std::to_string(a + 1), quantize_kw(site_ac[a]), rec.t_s}, k);
            }
        }
        deliver(k);

        // Control and power flow.
        if (rec.isolator == IsolatorState::Open) {
            if (s_.scu_enabled && !head_end_.meter_kw.empty()) {
                IslandedStep decision =
                    step_islanded(head_end_.reported_demand(), s_.han, s_.policy, scu_, k, rec.t_s);
                scu_ = std::move(decision.state);
                for (auto& cmd : decision.commands) {
                    if (std::holds_alternative<ShedCommand>(cmd)) {
                        ++out.shed_events;
                    } else {
                        ++out.restore_events;
                    }
                    channel_.publish(std::move(cmd), k);
                }
                for (auto& alarm : decision.new_alarms) rec.alarms.push_back(std::move(alarm));
            }
            // An islanded bus is balanced by the local generation.
            rec.pv_ac_kw = rec.served_kw;
            if (rec.served_kw > s_.policy.capacity_kw) rec.alarms.emplace_back(kOverload);
        } else {
            rec.pv_ac_kw = rec.pv_available_ac_kw;
            rec.decision = step_grid_connected(rec.pv_ac_kw, rec.served_kw);
            out.ledger = settle_exchange(out.ledger, rec.decision, s_.dt_s, rec.isolator);
        }

        const ChannelStats& stats = channel_.stats();
        rec.msgs_published = stats.published;
        rec.msgs_delivered = stats.delivered;
        rec.msgs_dropped = stats.dropped;
        return rec;
    }

    const Scenario& s_;
    Channel channel_;
    CellParams params_stc_;
    std::vector<MpptState> trackers_;
    HeadEnd head_end_;
    LoadIdSet relays_open_;
    ScuState scu_;
    IsolatorState previous_isolator_ = IsolatorState::Closed;
};

}  // namespace

RunResult run_scenario(const Scenario& s) {
    if (!(s.duration_s > 0.0 && s.dt_s > 0.0)) throw DomainError("duration and dt must be positive");
    check_mppt_config(s.mppt);
    check_inverter(s.inverter);
    check_policy(s.policy);
    return Run(s).execute();
}

}  // namespace gridshaver
