#pragma once

#include "clearnet/network.hpp"
#include "clearnet/processes.hpp"

#include <cstdint>

namespace clearnet {

/// Everything needed to run one dynamic clearing scenario.
struct ScenarioConfig {
    FinancialNetwork network;
    Vec initial_wealth;         // V(0) for dynamic runs
    Vec external_assets;        // x for static runs; may be empty otherwise
    CashFlowSpec cashflow;
    LiabilitySchedule liabilities;
    double horizon = 1.0;       // T
    double dt0 = 1e-3;
    std::uint64_t seed = 0;
    int n_paths = 1;

    /// Structural checks; throws ValidationError. Soft conditions (zero
    /// initial wealth entries, vanishing society share) come back as
    /// warnings instead.
    std::vector<std::string> validate() const;
};

}  // namespace clearnet
