#pragma once

#include "gridshaver/profile.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gridshaver {

enum class Tier { Tier1 = 1, Tier2 = 2, Tier3 = 3 };  // must run, discretionary, luxury
enum class Phase { Single, Three };

const char* to_string(Tier tier);
const char* to_string(Phase phase);

struct Load {
    std::string id;
    std::string home_id;
    Tier tier = Tier::Tier1;
    Phase phase = Phase::Single;
    double rated_kw = 0.0;
    Profile profile;  // demand fraction in [0, 1]

    /// rated_kw * profile(t)
    double draw_kw(double t) const;
};

struct Home {
    std::string id;
    std::vector<Load> loads;
};

using LoadIdSet = std::set<std::string>;

/// Home Area Network. Load ids are unique across all homes.
class Han {
public:
    Han() = default;
    explicit Han(std::vector<Home> homes);

    const std::vector<Home>& homes() const { return homes_; }
    const Load& load(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.count(id) > 0; }
    std::vector<const Load*> loads_in(Tier tier) const;
    std::size_t load_count() const { return index_.size(); }

private:
    std::vector<Home> homes_;
    std::map<std::string, std::pair<std::size_t, std::size_t>> index_;
};

/// Sum of rated_kw * profile(t) over loads not in `shed`.
double aggregate_demand(const Han& han, double t, const LoadIdSet& shed = {});

double home_demand(const Home& home, double t, const LoadIdSet& shed = {});

struct MeterReading {
    std::string meter_id;
    double timestamp = 0.0;  // s since scenario start
    double active_kw = 0.0;
};

inline constexpr double kMeterResolutionKw = 0.01;

/// Round half up to the meter resolution.
double quantize_kw(double kw);

/// Smart-meter active power reading of one home. `t` must be a multiple of
/// `interval_s`.
MeterReading meter_sample(const Home& home, double t, double interval_s,
                          const LoadIdSet& shed = {});

}  // namespace gridshaver
