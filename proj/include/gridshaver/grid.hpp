#pragma once

#include "gridshaver/scu.hpp"

namespace gridshaver {

enum class IsolatorState { Closed, Open };  // Closed: grid-connected, Open: islanded

/// Cumulative exchange with the utility grid at the point of common coupling.
/// The grid is an infinite bus: it never refuses power in either direction.
struct GridLedger {
    double energy_imported_kwh = 0.0;
    double energy_exported_kwh = 0.0;

    // Coupling transformer, descriptive only.
    static constexpr double kPrimaryVolts = 25e3;
    static constexpr double kSecondaryVolts = 220.0;
    static constexpr double transformer_ratio() { return kPrimaryVolts / kSecondaryVolts; }
};

/// Throws IslandedExchange when the isolator is open.
GridLedger settle_exchange(const GridLedger& ledger, const PowerFlowDecision& decision, double dt_s,
                           IsolatorState isolator = IsolatorState::Closed);

}  // namespace gridshaver
