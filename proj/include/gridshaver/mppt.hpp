#pragma once

#include "gridshaver/pv_model.hpp"

namespace gridshaver {

/// Variable-step incremental-conductance tracker settings.
///
/// The tracker drives a boost stage whose output is held at a fixed DC link,
/// so the PV voltage is v_dc / gain(duty): raising the duty lowers the PV
/// voltage.
struct MpptConfig {
    double d_min = 0.0;
    double d_max = 0.9;
    double base_step = 1e-4;
    double scale_factor = 4e-5;  // duty per W/V of |dP/dV|
    double dv_epsilon = 1e-4;    // V
    double max_step_factor = 32.0;
    /// Dead band on the relative conductance residual (dI/dV + I/V) * V/I.
    double conductance_tolerance = 0.01;

    double max_step() const { return max_step_factor * base_step; }
};

void check_mppt_config(const MpptConfig& cfg);

struct MpptState {
    double prev_v = 0.0;
    double prev_i = 0.0;
    double duty = 0.0;
    bool primed = false;  // false until the first measurement has been seen

    static MpptState at_duty(double duty) { return {0.0, 0.0, duty, false}; }
};

struct IcStep {
    MpptState state;
    double duty = 0.0;
};

/// One incremental-conductance decision from the measured PV voltage/current.
IcStep ic_step(const MpptState& state, double v, double i, const MpptConfig& cfg);

struct TrackResult {
    OperatingPoint point;
    MpptState state;
    int steps = 0;
    bool settled = false;  // false: budget exhausted, `point` is the last one seen
};

inline constexpr int kTrackStepBudget = 2000;
inline constexpr int kSettleWindow = 10;

/// PV operating point reached by a boost stage at `duty` feeding a DC link held
/// at `v_dc`. Above open circuit the array sits at Voc with zero current.
OperatingPoint plant_point(const CellParams& params_env, const ArrayTopology& topo, double v_dc,
                           double duty, double v_oc_module);

/// Runs ic_step against the static curve until the duty stops moving.
TrackResult track_quasi_static(const CellParams& params_stc, const ArrayTopology& topo,
                               const Environment& env, const MpptConfig& cfg, double v_dc,
                               const MpptState& start);

TrackResult track_quasi_static(const CellParams& params_stc, const ArrayTopology& topo,
                               const Environment& env, const MpptConfig& cfg,
                               double v_dc = 500.0);

}  // namespace gridshaver
