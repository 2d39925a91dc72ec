#include "clearnet/scenario.hpp"

namespace clearnet {

std::vector<std::string> ScenarioConfig::validate() const {
    network.validate();
    const int size = network.size();
    if (initial_wealth.size() != size) {
        throw ValidationError("scenario/V0: expected " + std::to_string(size) + " entries, got " +
                              std::to_string(initial_wealth.size()));
    }
    for (int i = 0; i < size; ++i) {
        if (!(initial_wealth(i) >= 0.0)) {
            throw ValidationError("scenario/V0/" + std::to_string(i) + ": must be >= 0");
        }
    }
    if (!(horizon > 0.0)) throw ValidationError("scenario/T: must be positive");
    if (!(dt0 > 0.0)) throw ValidationError("scenario/dt: must be positive");
    if (n_paths < 1) throw ValidationError("scenario/paths: must be >= 1");
    cashflow.validate(size, horizon);
    if (liabilities.size() == 0) throw ValidationError("scenario/liabilities: missing schedule");
    if (liabilities.size() != size) {
        throw ValidationError("scenario/liabilities: rate matrices are " +
                              std::to_string(liabilities.size()) + "x" +
                              std::to_string(liabilities.size()) + ", expected " +
                              std::to_string(size));
    }

    std::vector<std::string> warnings;
    for (int i = 0; i < size; ++i) {
        if (initial_wealth(i) == 0.0) {
            warnings.push_back("V0[" + std::to_string(i) +
                               "] = 0; strong-solution guarantee needs strictly positive wealth");
        }
    }
    if (liabilities.society_floor() <= 0.0) {
        warnings.push_back(
            "society share of the accrual rates reaches 0; uniqueness/boundedness unguaranteed");
    }
    return warnings;
}

}  // namespace clearnet
