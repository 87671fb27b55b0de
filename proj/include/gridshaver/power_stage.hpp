#pragma once

#include <array>
#include <complex>
#include <functional>

namespace gridshaver {

struct SibcParams {
    double l = 1e-3;  // H
    double c = 1e-3;  // F
    double r = 12.5;  // ohm
};

struct SibcState {
    double i_l = 0.0;  // inductor current (A)
    double v_o = 0.0;  // output voltage (V)
};

struct SibcInputs {
    double v_g = 0.0;    // input voltage (V)
    double d_hat = 0.0;  // duty perturbation
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Switched-inductor boost conversion ratio Vo/Vin = (1 + d) / (1 - d).
double sibc_gain(double d);

/// Duty that produces the given conversion ratio (>= 1).
double sibc_duty_for_gain(double gain);

/// State matrix of the averaged converter model at operating duty d_op.
Matrix2 sibc_state_matrix(double d_op, const SibcParams& p);

/// Input matrix evaluated at the current state. The first row is
/// [(1+D)/2L, (v_o+v_g)/2L]. The second row is [0, -i_l/C]: the duty
/// perturbation diverts inductor current away from the output capacitor.
Matrix2 sibc_input_matrix(const SibcState& x, const SibcInputs& u, double d_op,
                          const SibcParams& p);

SibcState small_signal_derivative(const SibcState& x, const SibcInputs& u, double d_op,
                                  const SibcParams& p);

/// Steady state for constant v_g and zero duty perturbation.
SibcState sibc_equilibrium(double v_g, double d_op, const SibcParams& p);

std::array<std::complex<double>, 2> sibc_eigenvalues(double d_op, const SibcParams& p);

/// Largest step for which dt * spectral radius stays within 2.
double sibc_max_step(const SibcInputs& u, double d_op, const SibcParams& p);

using SibcObserver = std::function<void(int step, const SibcState&)>;

/// Fixed-step trapezoidal integration with constant inputs.
/// Throws UnstableStep when dt exceeds sibc_max_step.
SibcState integrate_small_signal(SibcState x, const SibcInputs& u, double d_op,
                                 const SibcParams& p, double dt, int n_steps,
                                 const SibcObserver& observer = {});

struct InverterModel {
    double efficiency = 0.97;
    double p_rating_kw = 25.0;
    double v_dc_target = 500.0;  // V
    double v_ac_nominal = 220.0;  // V, at the HAN

    static InverterModel boost_500v() { return {}; }
    static InverterModel dc_link_250v() { return {0.97, 25.0, 250.0, 220.0}; }
};

void check_inverter(const InverterModel& model);

/// Averaged, ideally synchronized inverter: min(efficiency * p_dc, rating).
double inverter_ac_power(double p_dc_kw, const InverterModel& model);

}  // namespace gridshaver
