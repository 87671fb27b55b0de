#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <optional>

namespace gridshaver::detail {

inline constexpr std::uintmax_t kRootIterationBudget = 200;

/// Root of f on [lo, hi] where f(lo) and f(hi) differ in sign (or one is zero).
/// Returns the abscissa with the smaller |f| among the final bracket ends, or
/// nullopt if the bracket is invalid or the budget ran out.
template <typename F>
std::optional<double> bracketed_root(F&& f, double lo, double hi) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (!(std::isfinite(f_lo) && std::isfinite(f_hi)) || std::signbit(f_lo) == std::signbit(f_hi)) {
        return std::nullopt;
    }
    std::uintmax_t iterations = kRootIterationBudget;
    boost::math::tools::eps_tolerance<double> tol(52);
    try {
        auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iterations);
        if (iterations >= kRootIterationBudget) return std::nullopt;
        return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace gridshaver::detail
