#include "clearnet/discrete_clearing.hpp"

#include <Eigen/LU>

namespace clearnet {

DiscreteState DiscreteState::initial(const Vec& wealth0, const Mat& first_liabilities) {
    for (Eigen::Index i = 0; i < wealth0.size(); ++i) {
        if (!(wealth0(i) >= 0.0)) {
            throw ValidationError("discrete/V0/" + std::to_string(i) +
                                  ": initial wealth must be >= 0");
        }
    }
    DiscreteState s;
    s.t = -1;
    s.wealth = wealth0;
    // V(-1)^- = 0, so the initial exposure mix never enters the recursion;
    // seed it with the first date's relative liabilities anyway.
    s.exposures = relative_liabilities(first_liabilities);
    s.obligations = Vec::Zero(wealth0.size());
    return s;
}

void DiscreteSchedule::validate() const {
    if (cash.empty() || cash.size() != liabilities.size()) {
        throw ValidationError("discrete schedule: need matching nonempty c(t) and L(t) lists");
    }
    const Eigen::Index size = initial_wealth.size();
    if (size < 2) throw ValidationError("discrete schedule: initial wealth too short");
    for (Eigen::Index i = 0; i < size; ++i) {
        if (!(initial_wealth(i) >= 0.0)) {
            throw ValidationError("discrete/V0/" + std::to_string(i) + ": must be >= 0");
        }
    }
    for (std::size_t t = 0; t < cash.size(); ++t) {
        if (cash[t].size() != size) {
            throw ValidationError("discrete/c/" + std::to_string(t) + ": wrong length");
        }
        validate_liabilities(liabilities[t], "discrete/L/" + std::to_string(t));
        if (liabilities[t].rows() != size) {
            throw ValidationError("discrete/L/" + std::to_string(t) + ": wrong size");
        }
    }
}

namespace {

void check_step_hypotheses(const Vec& cash_t, const Mat& liabilities_t, int t,
                           std::vector<std::string>* warnings) {
    if (!warnings) return;
    const Vec incoming = liabilities_t.colwise().sum();
    const Vec outgoing = liabilities_t.rowwise().sum();
    for (Eigen::Index i = 0; i < cash_t.size(); ++i) {
        if (cash_t(i) < incoming(i) - outgoing(i) - 1e-12) {
            warnings->push_back("t=" + std::to_string(t) + ": node " + std::to_string(i) +
                                " cash flow below the interbank level, uniqueness not guaranteed");
        }
    }
    for (Eigen::Index i = 1; i < liabilities_t.rows(); ++i) {
        if (liabilities_t(i, 0) <= 0.0) {
            warnings->push_back("t=" + std::to_string(t) + ": bank " + std::to_string(i) +
                                " owes nothing to society, uniqueness not guaranteed");
        }
    }
}

}  // namespace

DiscreteState discrete_step(const DiscreteState& prev, const Vec& cash_t, const Mat& liabilities_t,
                            std::vector<std::string>* warnings) {
    const int size = static_cast<int>(prev.wealth.size());
    const int n = size - 1;
    validate_liabilities(liabilities_t, "discrete/L");
    if (cash_t.size() != size || liabilities_t.rows() != size) {
        throw ValidationError("discrete step: inconsistent sizes");
    }
    check_step_hypotheses(cash_t, liabilities_t, prev.t + 1, warnings);

    const Vec rolled = neg_part(prev.wealth);
    const Vec pbar = liabilities_t.rowwise().sum() + rolled;

    // Relative liabilities including rolled-forward debt at the prior mix.
    Mat pi(size, size);
    for (int i = 0; i < size; ++i) {
        if (pbar(i) > 0.0) {
            pi.row(i) = (liabilities_t.row(i) + prev.exposures.row(i) * rolled(i)) / pbar(i);
        } else {
            pi.row(i) = uniform_row(n, i).transpose();
        }
    }
    const Mat pi_t = pi.transpose();

    const Vec base = prev.wealth + cash_t + prev.exposures.transpose() * rolled;

    Vec v = base;
    Eigen::VectorXi insolvent_prev = Eigen::VectorXi::Zero(size);
    bool first_round = true;
    int rounds = 0;
    for (int round = 0; round < size + 1; ++round) {
        Eigen::VectorXi insolvent = Eigen::VectorXi::Zero(size);
        for (int i = 1; i < size; ++i) {
            if (v(i) < 0.0) insolvent(i) = 1;
        }
        if (!first_round && insolvent == insolvent_prev) break;
        first_round = false;
        ++rounds;
        Mat system = Mat::Identity(size, size);
        for (int j = 0; j < size; ++j) {
            if (insolvent(j)) system.col(j) -= pi_t.col(j);
        }
        Eigen::FullPivLU<Mat> lu(system);
        if (!lu.isInvertible()) {
            std::string msg = "t=" + std::to_string(prev.t + 1) +
                              ": singular clearing system for insolvent set {";
            for (int i = 1; i < size; ++i) {
                if (insolvent(i)) msg += std::to_string(i) + ",";
            }
            throw SolverError(msg + "}");
        }
        v = lu.solve(base);
        insolvent_prev = std::move(insolvent);
    }

    // Exposure update with the rolled-forward numerator. The max with the
    // realized shortfall keeps the formula usable off equilibrium, where a
    // probe state may owe more than the clearing bound allows.
    const Vec shortfall = neg_part(v);
    DiscreteState next;
    next.t = prev.t + 1;
    next.wealth = v;
    next.obligations = pbar;
    next.rounds = rounds;
    next.exposures.resize(size, size);
    next.exposures.row(0) = uniform_row(n, 0).transpose();
    for (int i = 1; i < size; ++i) {
        const double denom = std::max(pbar(i), shortfall(i));
        if (denom > 0.0) {
            next.exposures.row(i) =
                (liabilities_t.row(i) + prev.exposures.row(i) * rolled(i)) / denom;
        } else {
            next.exposures.row(i) = uniform_row(n, i).transpose();
        }
    }
    return next;
}

DiscreteState discrete_step_dt(const DiscreteState& prev, const Vec& cash_increment,
                               const Mat& liability_increment,
                               std::vector<std::string>* warnings) {
    return discrete_step(prev, cash_increment, liability_increment, warnings);
}

DiscreteTrajectory run_discrete(const DiscreteSchedule& sched) {
    sched.validate();
    DiscreteTrajectory out;
    DiscreteState state = DiscreteState::initial(sched.initial_wealth, sched.liabilities.front());
    for (std::size_t t = 0; t < sched.cash.size(); ++t) {
        state = discrete_step(state, sched.cash[t], sched.liabilities[t], &out.warnings);
        out.states.push_back(state);
    }
    return out;
}

}  // namespace clearnet
