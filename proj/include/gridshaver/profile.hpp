#pragma once

#include <utility>
#include <vector>

namespace gridshaver {

/// Piecewise-linear function of time given by (t, value) breakpoints.
/// Held constant outside the breakpoint range.
class Profile {
public:
    Profile() = default;
    explicit Profile(std::vector<std::pair<double, double>> points);

    static Profile constant(double value) { return Profile({{0.0, value}}); }

    double at(double t) const;
    bool empty() const { return points_.empty(); }
    double first_time() const;
    double last_time() const;
    bool covers(double t0, double t1) const;
    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

}  // namespace gridshaver
