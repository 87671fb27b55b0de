#include "gridshaver/pv_model.hpp"

#include "detail/roots.hpp"
#include "gridshaver/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace gridshaver {

namespace {

constexpr double kResidualTolerance = 1e-9;  // relative to the photo current
constexpr double kMinCurrentScale = 1e-3;    // A, floor for the dark curve

double diode_current(const CellParams& p, double junction_v) {
    const double vt1 = p.cells_in_series * p.v_t;
    const double vt2 = p.a_ideality * vt1;
    return p.i_s1 * std::expm1(junction_v / vt1) + p.i_s2 * std::expm1(junction_v / vt2);
}

double diode_conductance(const CellParams& p, double junction_v) {
    const double vt1 = p.cells_in_series * p.v_t;
    const double vt2 = p.a_ideality * vt1;
    return p.i_s1 * std::exp(junction_v / vt1) / vt1 + p.i_s2 * std::exp(junction_v / vt2) / vt2;
}

double current_scale(const CellParams& p) { return std::max(p.i_ph, kMinCurrentScale); }

// Solves the 3x3 system m * x = b with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        if (m[col][col] == 0.0) throw FitDiverged("singular anchor system");
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int k = col; k < 3; ++k) m[row][k] -= f * m[col][k];
            b[row] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * x[k];
        x[row] = acc / m[row][row];
    }
    return x;
}

struct AnchorSolution {
    double i_ph;
    double i_s;
    double g_p;  // 1 / r_p
};

// Given r_s, the three datasheet anchors fix (i_ph, i_s, 1/r_p) linearly.
AnchorSolution solve_anchors(const ModuleSpec& s, const CellParams& shape, double r_s) {
    CellParams unit = shape;
    unit.i_s1 = 1.0;
    unit.i_s2 = 1.0;
    const double x_sc = s.i_sc * r_s;
    const double x_oc = s.v_oc;
    const double x_mp = s.v_mp + s.i_mp * r_s;
    // Columns are scaled so the diode column is O(1).
    const double d_scale = diode_current(unit, x_oc);
    const std::array<std::array<double, 3>, 3> m{{
        {1.0, -diode_current(unit, x_sc) / d_scale, -x_sc},
        {1.0, -1.0, -x_oc},
        {1.0, -diode_current(unit, x_mp) / d_scale, -x_mp},
    }};
    const auto x = solve3(m, {s.i_sc, 0.0, s.i_mp});
    return {x[0], x[1] / d_scale, x[2]};
}

CellParams with_anchors(const CellParams& shape, const AnchorSolution& a, double r_s) {
    CellParams p = shape;
    p.i_ph = a.i_ph;
    p.i_s1 = a.i_s;
    p.i_s2 = a.i_s;
    p.r_s = r_s;
    p.r_p = 1.0 / a.g_p;
    return p;
}

}  // namespace

double thermal_voltage(double temperature_k) {
    return kBoltzmann * temperature_k / kElectronCharge;
}

void check_params(const CellParams& p) {
    const bool positive = p.i_ph > 0 && p.i_s1 > 0 && p.i_s2 > 0 && p.a_ideality > 0 &&
                          p.r_s > 0 && p.r_p > 0 && p.v_t > 0 && p.temperature_k > 0 &&
                          p.cells_in_series > 0;
    if (!positive) throw InvalidSpec("cell parameters must be strictly positive");
    if (!(p.r_p > p.r_s)) throw InvalidSpec("parallel resistance must exceed series resistance");
    const double vt = thermal_voltage(p.temperature_k);
    if (std::abs(p.v_t - vt) > 1e-12 * vt) {
        throw InvalidSpec("thermal voltage does not match the stored temperature");
    }
}

ModuleSpec ModuleSpec::from_datasheet(double v_oc, double i_sc, double v_mp, double i_mp,
                                      int cells) {
    return {v_oc, i_sc, v_mp, i_mp, cells, v_mp * i_mp};
}

void check_spec(const ModuleSpec& s) {
    if (!(s.v_mp > 0 && s.v_mp < s.v_oc)) throw InvalidSpec("require 0 < v_mp < v_oc");
    if (!(s.i_mp > 0 && s.i_mp < s.i_sc)) throw InvalidSpec("require 0 < i_mp < i_sc");
    if (s.cells_per_module < 1) throw InvalidSpec("cells_per_module must be at least 1");
    const double p_mp = s.v_mp * s.i_mp;
    if (!(s.p_rated > 0) || std::abs(s.p_rated - p_mp) > 0.01 * p_mp) {
        throw InvalidSpec("p_rated must agree with v_mp * i_mp within 1%");
    }
}

CellParams fit_two_diode(const ModuleSpec& spec, const Environment& env_stc,
                         double second_ideality) {
    check_spec(spec);
    if (env_stc != Environment::stc()) {
        throw InvalidSpec("datasheet fit requires standard test conditions");
    }
    if (!(second_ideality > 0)) throw InvalidSpec("second ideality must be positive");

    CellParams shape;
    shape.a_ideality = second_ideality;
    shape.temperature_k = env_stc.temperature + kZeroCelsius;
    shape.v_t = thermal_voltage(shape.temperature_k);
    shape.cells_in_series = spec.cells_per_module;

    // Mismatch between the model's conductance at the MPP anchor and the
    // conductance that makes dP/dV vanish there; increasing in r_s.
    const double target = spec.i_mp / spec.v_mp;
    auto stationarity = [&](double r_s) {
        const auto a = solve_anchors(spec, shape, r_s);
        const CellParams p = with_anchors(shape, a, r_s);
        const double g = diode_conductance(p, spec.v_mp + spec.i_mp * r_s) + a.g_p;
        return g / (1.0 + r_s * g) - target;
    };

    if (!(stationarity(0.0) < 0.0)) {
        throw FitDiverged("datasheet is not reachable by the two-diode model (fill factor too low)");
    }
    const double r_max = spec.v_oc / spec.i_sc;
    constexpr int kScanPoints = 400;
    double lo = 0.0;
    std::optional<double> r_s;
    for (int k = 1; k <= kScanPoints; ++k) {
        const double hi = r_max * k / kScanPoints;
        if (stationarity(hi) >= 0.0) {
            r_s = detail::bracketed_root(stationarity, lo, hi);
            break;
        }
        lo = hi;
    }
    if (!r_s) throw FitDiverged("series-resistance search did not converge");

    const auto anchors = solve_anchors(spec, shape, *r_s);
    if (!(anchors.i_s > 0 && anchors.g_p > 0 && anchors.i_ph > 0)) {
        throw FitDiverged("fitted parameters are not physical");
    }
    CellParams fitted = with_anchors(shape, anchors, *r_s);
    check_params(fitted);

    const double tol = 0.005 * spec.i_sc;
    const bool anchors_hold = std::abs(solve_current(fitted, 0.0) - spec.i_sc) <= tol &&
                              std::abs(solve_current(fitted, spec.v_oc)) <= tol &&
                              std::abs(solve_current(fitted, spec.v_mp) - spec.i_mp) <= tol;
    if (!anchors_hold) throw FitDiverged("fitted model misses a datasheet anchor");
    return fitted;
}

CellParams apply_environment(const CellParams& stc, const Environment& env,
                             const EnvironmentLaw& law) {
    if (!(env.irradiance >= 0.0)) throw DomainError("irradiance must be non-negative");
    if (!(env.temperature >= -40.0 && env.temperature <= 90.0)) {
        throw DomainError("temperature must lie in [-40, 90] degC");
    }
    const double g = env.irradiance;
    const double t = env.temperature + kZeroCelsius;
    const double dt = t - stc.temperature_k;

    CellParams p = stc;
    p.i_ph = stc.i_ph * (1.0 + law.isc_temp_coeff * dt) * (g / kStcIrradiance);

    const double band = law.band_gap_ev * kElectronCharge / kBoltzmann;
    const double cube = std::pow(t / stc.temperature_k, 3);
    const double inv_dt = 1.0 / stc.temperature_k - 1.0 / t;
    p.i_s1 = stc.i_s1 * cube * std::exp(band * inv_dt);
    p.i_s2 = stc.i_s2 * cube * std::exp(band / stc.a_ideality * inv_dt);

    p.r_p = stc.r_p * (kStcIrradiance / std::max(g, law.min_irradiance_for_rp));
    p.v_t = thermal_voltage(t);
    p.temperature_k = t;
    return p;
}

double current_residual(const CellParams& p, double v, double i) {
    const double junction = v + i * p.r_s;
    return p.i_ph - diode_current(p, junction) - junction / p.r_p - i;
}

double solve_current(const CellParams& p, double v) {
    if (!(v >= 0.0)) throw DomainError("module voltage must be non-negative");
    // The residual decreases strictly in i. At i = -v/r_s the junction is
    // unbiased so the residual is >= 0; at i = i_ph it is <= 0.
    const double lo = -v / p.r_s;
    const double hi = p.i_ph;
    if (lo == hi) return lo;
    auto f = [&](double i) { return current_residual(p, v, i); };
    const auto root = detail::bracketed_root(f, lo, hi);
    if (!root || std::abs(f(*root)) >= kResidualTolerance * current_scale(p)) {
        std::ostringstream msg;
        msg << "current solve did not converge at v = " << v << " V";
        throw NoConvergence(msg.str());
    }
    return *root;
}

double solve_current(const CellParams& params_stc, double v, const Environment& env) {
    return solve_current(apply_environment(params_stc, env), v);
}

double current_slope(const CellParams& p, double v, double i) {
    const double g = diode_conductance(p, v + i * p.r_s) + 1.0 / p.r_p;
    return -g / (1.0 + p.r_s * g);
}

double open_circuit_voltage(const CellParams& p) {
    if (p.i_ph <= 0.0) return 0.0;
    auto f = [&](double v) { return current_residual(p, v, 0.0); };
    // The first diode alone carries i_ph at this voltage.
    const double hi = p.cells_in_series * p.v_t * std::log1p(p.i_ph / p.i_s1);
    const auto root = detail::bracketed_root(f, 0.0, hi);
    if (!root) throw NoConvergence("open-circuit voltage solve did not converge");
    return *root;
}

OperatingPoint array_point(const CellParams& p, const ArrayTopology& topo, double v_array) {
    const double v_module = v_array / topo.modules_per_string;
    return OperatingPoint::at(v_array, solve_current(p, v_module) * topo.strings_parallel);
}

std::vector<OperatingPoint> sweep_curve(const CellParams& params_stc, const ArrayTopology& topo,
                                        const Environment& env, std::size_t n_points) {
    if (n_points < 2) throw DomainError("a sweep needs at least two points");
    if (topo.strings_parallel < 1 || topo.modules_per_string < 1) {
        throw DomainError("array topology counts must be at least 1");
    }
    const CellParams p = apply_environment(params_stc, env);
    const double voc = open_circuit_voltage(p);
    std::vector<OperatingPoint> curve;
    curve.reserve(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double v_module = voc * static_cast<double>(k) / static_cast<double>(n_points - 1);
        curve.push_back(OperatingPoint::at(v_module * topo.modules_per_string,
                                           solve_current(p, v_module) * topo.strings_parallel));
    }
    return curve;
}

OperatingPoint true_mpp(const CellParams& params_stc, const ArrayTopology& topo,
                        const Environment& env) {
    if (!(env.irradiance > 0.0)) throw ZeroIrradiance("maximum power point undefined in the dark");
    const CellParams p = apply_environment(params_stc, env);
    const double voc = open_circuit_voltage(p);

    constexpr int kSweep = 200;
    auto power = [&](double v) { return v * solve_current(p, v); };
    int best = 0;
    double best_p = -1.0;
    for (int k = 0; k <= kSweep; ++k) {
        const double pk = power(voc * k / kSweep);
        if (pk > best_p) {
            best_p = pk;
            best = k;
        }
    }
    double a = voc * std::max(best - 1, 0) / kSweep;
    double b = voc * std::min(best + 1, kSweep) / kSweep;

    // Golden-section narrowing of the bracket around the best sweep point.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double pc = power(c);
    double pd = power(d);
    for (int iter = 0; iter < 40 && (b - a) > 1e-9 * voc; ++iter) {
        if (pc > pd) {
            b = d;
            d = c;
            pd = pc;
            c = b - inv_phi * (b - a);
            pc = power(c);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + inv_phi * (b - a);
            pd = power(d);
        }
    }

    // Polish on the analytic derivative dP/dV = I + V dI/dV.
    auto dp_dv = [&](double v) {
        const double i = solve_current(p, v);
        return i + v * current_slope(p, v, i);
    };
    double v_mp = 0.5 * (a + b);
    if (const auto root = detail::bracketed_root(dp_dv, a, b)) v_mp = *root;

    return OperatingPoint::at(v_mp * topo.modules_per_string,
                              solve_current(p, v_mp) * topo.strings_parallel);
}

}  // namespace gridshaver
