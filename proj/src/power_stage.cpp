#include "gridshaver/power_stage.hpp"

#include "gridshaver/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gridshaver {

namespace {

void check_duty(double d) {
    if (!(d >= 0.0 && d < 1.0)) throw DomainError("duty must lie in [0, 1)");
}

void check_sibc(const SibcParams& p) {
    if (!(p.l > 0 && p.c > 0 && p.r > 0)) throw DomainError("L, C and R must be positive");
}

// Effective linear dynamics for constant inputs: x' = m x + f.
struct Affine {
    Matrix2 m;
    std::array<double, 2> f;
};

Affine affine_form(const SibcInputs& u, double d_op, const SibcParams& p) {
    Matrix2 m = sibc_state_matrix(d_op, p);
    m[0][1] += u.d_hat / (2.0 * p.l);
    m[1][0] -= u.d_hat / p.c;
    const double f0 = (1.0 + d_op) / (2.0 * p.l) * u.v_g + u.d_hat * u.v_g / (2.0 * p.l);
    return {m, {f0, 0.0}};
}

double spectral_radius(const Matrix2& m) {
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det));
    return std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
}

}  // namespace

double sibc_gain(double d) {
    check_duty(d);
    return (1.0 + d) / (1.0 - d);
}

double sibc_duty_for_gain(double gain) {
    if (!(gain >= 1.0)) throw DomainError("switched-inductor boost cannot step down");
    return (gain - 1.0) / (gain + 1.0);
}

Matrix2 sibc_state_matrix(double d_op, const SibcParams& p) {
    check_duty(d_op);
    check_sibc(p);
    return {{
        {0.0, -(1.0 - d_op) / (2.0 * p.l)},
        {(1.0 - d_op) / p.c, -1.0 / (p.r * p.c)},
    }};
}

Matrix2 sibc_input_matrix(const SibcState& x, const SibcInputs& u, double d_op,
                          const SibcParams& p) {
    check_duty(d_op);
    check_sibc(p);
    return {{
        {(1.0 + d_op) / (2.0 * p.l), (x.v_o + u.v_g) / (2.0 * p.l)},
        {0.0, -x.i_l / p.c},
    }};
}

SibcState small_signal_derivative(const SibcState& x, const SibcInputs& u, double d_op,
                                  const SibcParams& p) {
    const Matrix2 a = sibc_state_matrix(d_op, p);
    const Matrix2 b = sibc_input_matrix(x, u, d_op, p);
    return {
        a[0][0] * x.i_l + a[0][1] * x.v_o + b[0][0] * u.v_g + b[0][1] * u.d_hat,
        a[1][0] * x.i_l + a[1][1] * x.v_o + b[1][0] * u.v_g + b[1][1] * u.d_hat,
    };
}

SibcState sibc_equilibrium(double v_g, double d_op, const SibcParams& p) {
    check_sibc(p);
    const double v_o = sibc_gain(d_op) * v_g;
    return {v_o / (p.r * (1.0 - d_op)), v_o};
}

std::array<std::complex<double>, 2> sibc_eigenvalues(double d_op, const SibcParams& p) {
    const Matrix2 a = sibc_state_matrix(d_op, p);
    const double tr = a[0][0] + a[1][1];
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det));
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

double sibc_max_step(const SibcInputs& u, double d_op, const SibcParams& p) {
    return 2.0 / spectral_radius(affine_form(u, d_op, p).m);
}

SibcState integrate_small_signal(SibcState x, const SibcInputs& u, double d_op,
                                 const SibcParams& p, double dt, int n_steps,
                                 const SibcObserver& observer) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    if (n_steps < 0) throw DomainError("step count must be non-negative");
    const Affine sys = affine_form(u, d_op, p);
    if (dt > sibc_max_step(u, d_op, p)) throw UnstableStep("time step exceeds the stability bound");

    // (I - h/2 M) x+ = (I + h/2 M) x + h f, solved in closed form.
    const double h2 = 0.5 * dt;
    const Matrix2 lhs{{{1.0 - h2 * sys.m[0][0], -h2 * sys.m[0][1]},
                       {-h2 * sys.m[1][0], 1.0 - h2 * sys.m[1][1]}}};
    const Matrix2 rhs{{{1.0 + h2 * sys.m[0][0], h2 * sys.m[0][1]},
                       {h2 * sys.m[1][0], 1.0 + h2 * sys.m[1][1]}}};
    const double det = lhs[0][0] * lhs[1][1] - lhs[0][1] * lhs[1][0];

    if (observer) observer(0, x);
    for (int k = 1; k <= n_steps; ++k) {
        const double r0 = rhs[0][0] * x.i_l + rhs[0][1] * x.v_o + dt * sys.f[0];
        const double r1 = rhs[1][0] * x.i_l + rhs[1][1] * x.v_o + dt * sys.f[1];
        x = {(lhs[1][1] * r0 - lhs[0][1] * r1) / det, (lhs[0][0] * r1 - lhs[1][0] * r0) / det};
        if (observer) observer(k, x);
    }
    return x;
}

void check_inverter(const InverterModel& m) {
    if (!(m.efficiency > 0.0 && m.efficiency <= 1.0)) {
        throw DomainError("inverter efficiency must lie in (0, 1]");
    }
    if (!(m.p_rating_kw > 0 && m.v_dc_target > 0 && m.v_ac_nominal > 0)) {
        throw DomainError("inverter ratings must be positive");
    }
}

double inverter_ac_power(double p_dc_kw, const InverterModel& model) {
    return std::min(model.efficiency * std::max(p_dc_kw, 0.0), model.p_rating_kw);
}

}  // namespace gridshaver
