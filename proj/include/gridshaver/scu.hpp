#pragma once

#include "gridshaver/ami.hpp"
#include "gridshaver/han.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gridshaver {

enum class ScuMode { Islanded, GridConnected };

struct ShedPolicy {
    double capacity_kw = 100.0;
    double restore_margin_kw = 5.0;
    std::int64_t min_shed_duration_steps = 15;
    /// Shedding keeps projected demand at or below capacity_kw - trigger_margin_kw.
    double trigger_margin_kw = 0.0;
};

void check_policy(const ShedPolicy& policy);

inline constexpr const char* kCapacityViolation = "CapacityViolation";

struct ScuState {
    std::map<std::string, std::int64_t> shed;  // Tier-3 load id -> step it was shed
    std::vector<std::string> alarms;
};

struct IslandedStep {
    std::vector<Message> commands;  // ShedCommand / RestoreCommand only
    ScuState state;
    std::vector<std::string> new_alarms;
};

struct ShedCandidate {
    std::string id;
    double rated_kw = 0.0;
    double draw_kw = 0.0;
};

/// Largest-rated-first prefix of `candidates` that brings `demand_kw` to
/// `limit_kw` or below (or every candidate, if that is not enough).
/// Candidates with no instantaneous draw are skipped.
std::vector<ShedCandidate> select_shed_prefix(double demand_kw, double limit_kw,
                                              std::vector<ShedCandidate> candidates);

/// Peak shaving while islanded. `demand_kw` is the demand reported by the
/// meters; `step`/`t_s` locate the decision in engine steps and seconds.
IslandedStep step_islanded(double demand_kw, const Han& han, const ShedPolicy& policy,
                           const ScuState& state, std::int64_t step, double t_s);

struct PowerFlowDecision {
    enum class Direction { None, Import, Export };
    Direction direction = Direction::None;
    double kw = 0.0;  // magnitude, >= 0

    double import_kw() const { return direction == Direction::Import ? kw : 0.0; }
    double export_kw() const { return direction == Direction::Export ? kw : 0.0; }
    bool operator==(const PowerFlowDecision&) const = default;
};

PowerFlowDecision step_grid_connected(double gen_kw, double demand_kw);

}  // namespace gridshaver
