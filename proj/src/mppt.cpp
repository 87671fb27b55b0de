#include "gridshaver/mppt.hpp"

#include "gridshaver/errors.hpp"
#include "gridshaver/power_stage.hpp"

#include <algorithm>
#include <cmath>

namespace gridshaver {

void check_mppt_config(const MpptConfig& cfg) {
    if (!(cfg.d_min >= 0.0 && cfg.d_min < cfg.d_max && cfg.d_max < 1.0)) {
        throw DomainError("MPPT duty bounds must satisfy 0 <= d_min < d_max < 1");
    }
    if (!(cfg.base_step > 0.0 && cfg.dv_epsilon > 0.0 && cfg.scale_factor >= 0.0 &&
          cfg.max_step_factor >= 1.0 && cfg.conductance_tolerance >= 0.0)) {
        throw DomainError("MPPT step settings must be positive");
    }
}

IcStep ic_step(const MpptState& state, double v, double i, const MpptConfig& cfg) {
    v = std::max(v, 0.0);
    i = std::max(i, 0.0);

    MpptState next{v, i, std::clamp(state.duty, cfg.d_min, cfg.d_max), true};
    if (!state.primed) {
        next.duty = std::clamp(next.duty + cfg.base_step, cfg.d_min, cfg.d_max);
        return {next, next.duty};
    }

    const double dv = v - state.prev_v;
    const double di = i - state.prev_i;
    int raise_voltage = 0;  // +1 raise PV voltage, -1 lower it, 0 hold
    double step = cfg.base_step;

    if (i <= 0.0) {
        // Open circuit: right of the MPP, and dI/dV carries no information.
        raise_voltage = v > 0.0 ? -1 : 0;
        step = cfg.max_step();
    } else if (std::abs(dv) < cfg.dv_epsilon) {
        if (di > 0.0) raise_voltage = 1;
        if (di < 0.0) raise_voltage = -1;
    } else if (v <= 0.0) {
        raise_voltage = 1;
    } else {
        const double residual = (di / dv + i / v) * v / i;
        if (std::abs(residual) > cfg.conductance_tolerance) {
            raise_voltage = residual > 0.0 ? 1 : -1;
        }
        const double dp_dv = (v * i - state.prev_v * state.prev_i) / dv;
        step = std::clamp(cfg.scale_factor * std::abs(dp_dv), cfg.base_step, cfg.max_step());
    }

    // A higher duty means a higher boost ratio and a lower PV voltage.
    next.duty = std::clamp(next.duty - raise_voltage * step, cfg.d_min, cfg.d_max);
    return {next, next.duty};
}

OperatingPoint plant_point(const CellParams& params_env, const ArrayTopology& topo, double v_dc,
                           double duty, double v_oc_module) {
    const double v_module = v_dc / sibc_gain(duty) / topo.modules_per_string;
    if (v_module >= v_oc_module) {
        return OperatingPoint::at(v_oc_module * topo.modules_per_string, 0.0);
    }
    return array_point(params_env, topo, v_module * topo.modules_per_string);
}

TrackResult track_quasi_static(const CellParams& params_stc, const ArrayTopology& topo,
                               const Environment& env, const MpptConfig& cfg, double v_dc,
                               const MpptState& start) {
    check_mppt_config(cfg);
    if (!(env.irradiance > 0.0)) throw ZeroIrradiance("nothing to track in the dark");
    if (!(v_dc > 0.0)) throw DomainError("DC link voltage must be positive");

    const CellParams p = apply_environment(params_stc, env);
    const double voc = open_circuit_voltage(p);

    TrackResult result;
    result.state = start;
    result.state.duty = std::clamp(start.duty, cfg.d_min, cfg.d_max);
    int quiet = 0;
    // Rounding can shave a hair off a genuine base_step move.
    const double still = 0.5 * cfg.base_step;
    while (result.steps < kTrackStepBudget) {
        result.point = plant_point(p, topo, v_dc, result.state.duty, voc);
        const double before = result.state.duty;
        result.state = ic_step(result.state, result.point.v, result.point.i, cfg).state;
        ++result.steps;
        quiet = std::abs(result.state.duty - before) < still ? quiet + 1 : 0;
        if (quiet >= kSettleWindow) {
            result.settled = true;
            break;
        }
    }
    result.point = plant_point(p, topo, v_dc, result.state.duty, voc);
    return result;
}

TrackResult track_quasi_static(const CellParams& params_stc, const ArrayTopology& topo,
                               const Environment& env, const MpptConfig& cfg, double v_dc) {
    return track_quasi_static(params_stc, topo, env, cfg, v_dc, MpptState::at_duty(cfg.d_min));
}

}  // namespace gridshaver
