#pragma once

#include "clearnet/network.hpp"

#include <optional>

namespace clearnet {

/// State of the rolling-debt clearing recursion after one date.
struct DiscreteState {
    int t = -1;           // time index, -1 before the first date
    Vec wealth;           // V(t)
    Mat exposures;        // A(t), row-stochastic
    Vec obligations;      // pbar(t) = L(t) 1 + V(t-1)^-, zero at t = -1
    int rounds = 0;       // fictitious default rounds used at this date

    /// Initial state before any clearing date. `wealth0` must be >= 0.
    static DiscreteState initial(const Vec& wealth0, const Mat& first_liabilities);
};

/// Exogenous per-date network data: cash flows c(t) and new liabilities L(t).
struct DiscreteSchedule {
    Vec initial_wealth;          // V(-1) >= 0
    std::vector<Vec> cash;       // c(t), t = 0..T
    std::vector<Mat> liabilities;  // L(t), t = 0..T

    void validate() const;
    int horizon() const { return static_cast<int>(cash.size()) - 1; }
};

/// Clears one date: rolls unpaid debt into the obligations, resolves the
/// wealth fixed point by the fictitious default inner loop, and updates the
/// relative exposures with the rolled-forward term.
///
/// The inner loop solves V^k = (I - Pi(t)^T Lambda^k)^{-1} b with
/// b = V(t-1) + c(t) + A(t-1)^T V(t-1)^-, growing the insolvent set until it
/// stabilizes (at most n rounds). Pi(t) is built from the new liabilities
/// plus rolled debt at the prior exposure mix.
///
/// Warns (into `warnings` when given) if c_i(t) fails the nonnegative
/// external-flow hypothesis or some bank owes nothing to society.
DiscreteState discrete_step(const DiscreteState& prev, const Vec& cash_t, const Mat& liabilities_t,
                            std::vector<std::string>* warnings = nullptr);

/// discrete_step on integrated increments over one step of length dt:
/// cash_increment = integral of dc, liability_increment = integral of dL.
DiscreteState discrete_step_dt(const DiscreteState& prev, const Vec& cash_increment,
                               const Mat& liability_increment,
                               std::vector<std::string>* warnings = nullptr);

struct DiscreteTrajectory {
    std::vector<DiscreteState> states;  // t = 0..T
    std::vector<std::string> warnings;
};

/// Runs the recursion over the whole schedule. states[t] is the cleared
/// state at date t.
DiscreteTrajectory run_discrete(const DiscreteSchedule& sched);

}  // namespace clearnet
