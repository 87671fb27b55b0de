#include "gridshaver/scu.hpp"

#include "gridshaver/errors.hpp"

#include <algorithm>

namespace gridshaver {

void check_policy(const ShedPolicy& p) {
    if (!(p.capacity_kw > 0.0)) throw DomainError("capacity_kw must be positive");
    if (!(p.restore_margin_kw >= 0.0)) throw DomainError("restore_margin_kw must be non-negative");
    if (!(p.trigger_margin_kw >= 0.0 && p.trigger_margin_kw <= p.restore_margin_kw)) {
        throw DomainError("trigger_margin_kw must lie in [0, restore_margin_kw]");
    }
    if (p.min_shed_duration_steps < 0) throw DomainError("min shed duration must be non-negative");
}

std::vector<ShedCandidate> select_shed_prefix(double demand_kw, double limit_kw,
                                              std::vector<ShedCandidate> candidates) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ShedCandidate& a, const ShedCandidate& b) {
                         return a.rated_kw != b.rated_kw ? a.rated_kw > b.rated_kw : a.id < b.id;
                     });
    std::vector<ShedCandidate> chosen;
    double projected = demand_kw;
    for (auto& c : candidates) {
        if (projected <= limit_kw) break;
        if (c.draw_kw <= 0.0) continue;
        projected -= c.draw_kw;
        chosen.push_back(std::move(c));
    }
    return chosen;
}

IslandedStep step_islanded(double demand_kw, const Han& han, const ShedPolicy& policy,
                           const ScuState& state, std::int64_t step, double t_s) {
    IslandedStep out;
    out.state = state;
    const double limit = policy.capacity_kw - policy.trigger_margin_kw;

    if (demand_kw > limit) {
        std::vector<ShedCandidate> candidates;
        for (const Load* load : han.loads_in(Tier::Tier3)) {
            if (!state.shed.count(load->id)) {
                candidates.push_back({load->id, load->rated_kw, load->draw_kw(t_s)});
            }
        }
        double projected = demand_kw;
        for (const auto& c : select_shed_prefix(demand_kw, limit, std::move(candidates))) {
            projected -= c.draw_kw;
            out.state.shed.emplace(c.id, step);
            out.commands.emplace_back(ShedCommand{c.id, t_s});
        }
        if (projected > policy.capacity_kw) {
            out.new_alarms.emplace_back(kCapacityViolation);
            out.state.alarms.emplace_back(kCapacityViolation);
        }
        return out;
    }

    // Restore smallest-rated first once a load has stayed off long enough and
    // its draw fits under the hysteresis band.
    std::vector<const Load*> shed;
    for (const auto& [id, since] : state.shed) {
        if (step - since >= policy.min_shed_duration_steps) shed.push_back(&han.load(id));
    }
    std::stable_sort(shed.begin(), shed.end(), [](const Load* a, const Load* b) {
        return a->rated_kw != b->rated_kw ? a->rated_kw < b->rated_kw : a->id < b->id;
    });
    double projected = demand_kw;
    const double ceiling = policy.capacity_kw - policy.restore_margin_kw;
    for (const Load* load : shed) {
        const double draw = load->draw_kw(t_s);
        if (projected + draw <= ceiling) {
            projected += draw;
            out.state.shed.erase(load->id);
            out.commands.emplace_back(RestoreCommand{load->id, t_s});
        }
    }
    return out;
}

PowerFlowDecision step_grid_connected(double gen_kw, double demand_kw) {
    using D = PowerFlowDecision::Direction;
    if (gen_kw > demand_kw) return {D::Export, gen_kw - demand_kw};
    if (gen_kw < demand_kw) return {D::Import, demand_kw - gen_kw};
    return {D::None, 0.0};
}

}  // namespace gridshaver
