#include "gridshaver/profile.hpp"

#include "gridshaver/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gridshaver {

Profile::Profile(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("a profile needs at least one breakpoint");
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!std::isfinite(points_[k].first) || !std::isfinite(points_[k].second)) {
            throw DomainError("profile breakpoints must be finite");
        }
        if (k > 0 && !(points_[k].first > points_[k - 1].first)) {
            throw DomainError("profile breakpoint times must be strictly increasing");
        }
    }
}

double Profile::at(double t) const {
    if (points_.empty()) throw DomainError("empty profile");
    if (t <= points_.front().first) return points_.front().second;
    if (t >= points_.back().first) return points_.back().second;
    const auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                     [](double x, const auto& pt) { return x < pt.first; });
    const auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

double Profile::first_time() const { return points_.empty() ? 0.0 : points_.front().first; }

double Profile::last_time() const { return points_.empty() ? 0.0 : points_.back().first; }

bool Profile::covers(double t0, double t1) const {
    return !points_.empty() && first_time() <= t0 && last_time() >= t1;
}

}  // namespace gridshaver
