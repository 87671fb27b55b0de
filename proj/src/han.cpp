#include "gridshaver/han.hpp"

#include "gridshaver/errors.hpp"

#include <cmath>

namespace gridshaver {

const char* to_string(Tier tier) {
    switch (tier) {
        case Tier::Tier1: return "tier1";
        case Tier::Tier2: return "tier2";
        case Tier::Tier3: return "tier3";
    }
    return "?";
}

const char* to_string(Phase phase) { return phase == Phase::Three ? "three" : "single"; }

double Load::draw_kw(double t) const { return rated_kw * profile.at(t); }

Han::Han(std::vector<Home> homes) : homes_(std::move(homes)) {
    for (std::size_t h = 0; h < homes_.size(); ++h) {
        for (std::size_t l = 0; l < homes_[h].loads.size(); ++l) {
            Load& load = homes_[h].loads[l];
            load.home_id = homes_[h].id;
            if (!(load.rated_kw > 0.0)) throw DomainError("load " + load.id + ": rated_kw must be positive");
            const auto [it, inserted] = index_.emplace(load.id, std::pair{h, l});
            if (!inserted) {
                throw DomainError("duplicate load id " + load.id + " in homes " +
                                  homes_[it->second.first].id + " and " + homes_[h].id);
            }
        }
    }
}

const Load& Han::load(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw UnknownLoadId("unknown load id " + id);
    return homes_[it->second.first].loads[it->second.second];
}

std::vector<const Load*> Han::loads_in(Tier tier) const {
    std::vector<const Load*> out;
    for (const auto& home : homes_) {
        for (const auto& load : home.loads) {
            if (load.tier == tier) out.push_back(&load);
        }
    }
    return out;
}

double home_demand(const Home& home, double t, const LoadIdSet& shed) {
    double total = 0.0;
    for (const auto& load : home.loads) {
        if (!shed.count(load.id)) total += load.draw_kw(t);
    }
    return total;
}

double aggregate_demand(const Han& han, double t, const LoadIdSet& shed) {
    for (const auto& id : shed) {
        if (!han.contains(id)) throw UnknownLoadId("unknown load id " + id);
    }
    double total = 0.0;
    for (const auto& home : han.homes()) total += home_demand(home, t, shed);
    return total;
}

double quantize_kw(double kw) {
    return std::floor(kw / kMeterResolutionKw + 0.5) * kMeterResolutionKw;
}

MeterReading meter_sample(const Home& home, double t, double interval_s, const LoadIdSet& shed) {
    if (!(interval_s > 0.0)) throw DomainError("meter interval must be positive");
    const double periods = t / interval_s;
    if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, std::abs(periods))) {
        throw DomainError("meter sample time is not aligned to the reporting interval");
    }
    return {home.id, t, std::max(0.0, quantize_kw(home_demand(home, t, shed)))};
}

}  // namespace gridshaver
