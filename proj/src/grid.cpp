#include "gridshaver/grid.hpp"

#include "gridshaver/errors.hpp"

namespace gridshaver {

GridLedger settle_exchange(const GridLedger& ledger, const PowerFlowDecision& decision, double dt_s,
                           IsolatorState isolator) {
    if (isolator == IsolatorState::Open) {
        throw IslandedExchange("no grid exchange while the isolator is open");
    }
    if (!(dt_s > 0.0)) throw DomainError("settlement interval must be positive");
    if (!(decision.kw >= 0.0)) throw DomainError("exchange magnitude must be non-negative");
    GridLedger next = ledger;
    const double kwh = decision.kw * dt_s / 3600.0;
    switch (decision.direction) {
        case PowerFlowDecision::Direction::Import: next.energy_imported_kwh += kwh; break;
        case PowerFlowDecision::Direction::Export: next.energy_exported_kwh += kwh; break;
        case PowerFlowDecision::Direction::None: break;
    }
    return next;
}

}  // namespace gridshaver
