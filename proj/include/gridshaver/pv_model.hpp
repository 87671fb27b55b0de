#pragma once

#include <cstddef>
#include <vector>

namespace gridshaver {

inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kZeroCelsius = 273.15;
inline constexpr double kStcIrradiance = 1000.0;  // W/m^2
inline constexpr double kStcTemperature = 25.0;   // degC

/// Thermal voltage kT/e of a single junction at the given absolute temperature.
double thermal_voltage(double temperature_k);

struct Environment {
    double irradiance = kStcIrradiance;  // W/m^2
    double temperature = kStcTemperature;  // degC

    static Environment stc() { return {}; }
    bool operator==(const Environment&) const = default;
};

/// Two-diode parameters of one module. The cells of a module are in series,
/// so the junction voltage of each exponential is scaled by `cells_in_series`.
struct CellParams {
    double i_ph = 0.0;        // photo-generated current (A)
    double i_s1 = 0.0;        // saturation current, first diode (A)
    double i_s2 = 0.0;        // saturation current, second diode (A)
    double a_ideality = 0.0;  // ideality of the second diode; the first is unity
    double r_s = 0.0;         // series resistance (ohm)
    double r_p = 0.0;         // parallel resistance (ohm)
    double v_t = 0.0;         // kT/e at `temperature_k` (V)
    double temperature_k = 0.0;
    int cells_in_series = 1;

    bool operator==(const CellParams&) const = default;
};

/// Throws InvalidSpec when a CellParams invariant does not hold.
void check_params(const CellParams& params);

struct ModuleSpec {
    double v_oc = 0.0;
    double i_sc = 0.0;
    double v_mp = 0.0;
    double i_mp = 0.0;
    int cells_per_module = 0;
    double p_rated = 0.0;  // W

    /// Datasheet vector with the rated power taken as v_mp * i_mp.
    static ModuleSpec from_datasheet(double v_oc, double i_sc, double v_mp, double i_mp,
                                     int cells);
};

void check_spec(const ModuleSpec& spec);

struct ArrayTopology {
    int strings_parallel = 1;
    int modules_per_string = 1;

    int module_count() const { return strings_parallel * modules_per_string; }
};

struct OperatingPoint {
    double v = 0.0;
    double i = 0.0;
    double p = 0.0;

    static OperatingPoint at(double v, double i) { return {v, i, v * i}; }
};

/// Coefficients of the irradiance/temperature laws applied by apply_environment.
struct EnvironmentLaw {
    double isc_temp_coeff = 0.0006;  // relative change of i_ph per degC
    double band_gap_ev = 1.12;       // silicon
    double min_irradiance_for_rp = 1e-3;  // W/m^2, keeps r_p finite in the dark
};

/// Fits the two-diode parameters to a module datasheet at STC.
///
/// The saturation currents of both diodes are taken equal and the second
/// ideality is fixed, so for a given series resistance the short-circuit,
/// open-circuit and maximum-power anchors are linear in
/// (i_ph, i_s, 1/r_p). The series resistance is then searched so that the
/// power curve is stationary at v_mp.
CellParams fit_two_diode(const ModuleSpec& spec, const Environment& env_stc = Environment::stc(),
                         double second_ideality = 1.2);

/// Moves reference-condition parameters to another irradiance/temperature.
/// Identity when `env` is STC.
CellParams apply_environment(const CellParams& params_stc, const Environment& env,
                             const EnvironmentLaw& law = {});

/// Residual of the two-diode current equation at module voltage v and current i.
double current_residual(const CellParams& params, double v, double i);

/// Module current at module voltage v for parameters already at the operating
/// environment. Bracketed root solve; throws NoConvergence on failure.
double solve_current(const CellParams& params, double v);

/// Same, starting from reference-condition parameters.
double solve_current(const CellParams& params_stc, double v, const Environment& env);

/// dI/dV of the module curve at (v, i), parameters at the operating environment.
double current_slope(const CellParams& params, double v, double i);

/// Module open-circuit voltage, parameters at the operating environment.
double open_circuit_voltage(const CellParams& params);

/// Array point at array voltage `v_array`; parameters at the operating environment.
OperatingPoint array_point(const CellParams& params, const ArrayTopology& topo, double v_array);

/// n_points evenly spaced from 0 V to the array open-circuit voltage.
std::vector<OperatingPoint> sweep_curve(const CellParams& params_stc, const ArrayTopology& topo,
                                        const Environment& env, std::size_t n_points);

/// Maximum power point of the array. Throws ZeroIrradiance when dark.
OperatingPoint true_mpp(const CellParams& params_stc, const ArrayTopology& topo,
                        const Environment& env);

}  // namespace gridshaver
