#include "clearnet/continuous_sim.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace clearnet {

namespace {

constexpr double kZeroSnap = 1e-12;      // wealth this close to zero is zero
constexpr long kMaxSteps = 20000000;     // runaway guard per path

Mat system_matrix(const Mat& exposures, const DistressMatrix& distress) {
    Mat m = Mat::Identity(exposures.rows(), exposures.cols());
    const Mat a_t = exposures.transpose();
    for (int j = 0; j < distress.size(); ++j) {
        if (distress.flags(j)) m.col(j) -= a_t.col(j);
    }
    return m;
}

}  // namespace

const char* to_string(StepConstraint c) {
    switch (c) {
        case StepConstraint::none: return "none";
        case StepConstraint::zero_crossing: return "zero-crossing";
        case StepConstraint::sign_preservation: return "sign-preservation";
        case StepConstraint::schedule_breakpoint: return "schedule-breakpoint";
    }
    return "unknown";
}

Mat leontief_inverse(const Mat& exposures, const DistressMatrix& distress) {
    Eigen::FullPivLU<Mat> lu(system_matrix(exposures, distress));
    if (!lu.isInvertible()) {
        throw SolverError("exposure system singular for distress set of size " +
                          std::to_string(distress.flags.sum()));
    }
    return lu.solve(Mat::Identity(exposures.rows(), exposures.cols()));
}

std::pair<Vec, Vec> transformed_coefficients(const ContinuousState& state, const Vec& mu,
                                             const Mat& sigma, const Mat& rate, const Vec& z) {
    const Vec outgoing = rate.rowwise().sum();   // Ldot 1
    const Vec incoming = rate.colwise().sum();   // Ldot^T 1
    const Vec drift_rhs = mu - incoming + state.exposures.transpose() * outgoing;
    const Vec noise_rhs = sigma * z;

    Eigen::FullPivLU<Mat> lu(system_matrix(state.exposures, state.distress));
    if (!lu.isInvertible()) {
        throw SolverError("exposure system singular at t = " + std::to_string(state.t));
    }
    return {lu.solve(drift_rhs), lu.solve(noise_rhs)};
}

StepBounds event_limited_dt(const Vec& wealth, const Vec& mubar, const Vec& sigbar, double dt0,
                            double breakpoint_gap, double floor) {
    if (!(dt0 > 0.0)) throw SimulationError("event_limited_dt: base step must be positive");
    if (floor < 0.0) floor = 1e-12 * dt0;

    StepBounds b;
    b.dt0 = dt0;
    b.dt = dt0;
    if (breakpoint_gap < b.dt) {
        b.dt = breakpoint_gap;
        b.binding = StepConstraint::schedule_breakpoint;
    }

    auto cap = [&b](double value, StepConstraint source) {
        if (value < b.dt) {
            b.dt = value;
            b.binding = source;
        }
    };

    for (Eigen::Index i = 1; i < wealth.size(); ++i) {
        const double v = wealth(i);
        const double m = mubar(i);
        const double s = sigbar(i);
        const double disc = s * s - 4.0 * m * v;
        if (v > 0.0 && m < 0.0 && disc >= 0.0) {
            const double root = (-s - std::sqrt(disc)) / (2.0 * m);
            cap(root * root, StepConstraint::zero_crossing);
        }
        if (v < 0.0 && m != 0.0 && disc >= 0.0) {
            const double root = (-s + std::sqrt(disc)) / (2.0 * m);
            cap(root * root, StepConstraint::zero_crossing);
        }
        if (m == 0.0 && v * s < 0.0) {
            cap(v * v / (s * s), StepConstraint::zero_crossing);
        }
        if (m * s < 0.0) {
            cap(s * s / (m * m), StepConstraint::sign_preservation);
        }
    }

    if (b.dt < floor) b.dt = floor;
    if (!(b.dt > 0.0)) {
        throw SimulationError("event_limited_dt: step collapsed to " + std::to_string(b.dt));
    }
    return b;
}

Mat initial_exposures(const LiabilitySchedule& sched, int size) {
    const int n = size - 1;
    const Mat rate = sched.rate_at(0.0);
    Mat a(size, size);
    a.row(0) = uniform_row(n, 0).transpose();
    for (int i = 1; i < size; ++i) {
        const double total = rate.row(i).sum();
        if (total > 0.0) {
            a.row(i) = rate.row(i) / total;
        } else {
            a.row(i) = uniform_row(n, i).transpose();
        }
    }
    return a;
}

ContinuousState advance(const ContinuousState& state, double dt, const Vec& z, const Vec& mu,
                        const Mat& sigma, const Mat& rate) {
    const int size = static_cast<int>(state.wealth.size());
    const double sqrt_dt = std::sqrt(dt);
    auto [mubar, sigbar] = transformed_coefficients(state, mu, sigma, rate, z);

    // Lambda-bar: strictly negative wealth at the step start drives the
    // exposure branch, independent of the tie-broken distress flags.
    const DistressMatrix sinking = DistressMatrix::from_negative_wealth(state.wealth);

    ContinuousState next = state;
    next.t = state.t + dt;
    next.cash = state.cash + mu * dt + sigma * z * sqrt_dt;
    next.wealth = state.wealth + mubar * dt + sigbar * sqrt_dt;
    for (int i = 0; i < size; ++i) {
        if (std::abs(next.wealth(i)) < kZeroSnap) next.wealth(i) = 0.0;
    }

    const Vec row_totals = rate.rowwise().sum();
    for (int i = 1; i < size; ++i) {
        const double total = row_totals(i);
        if (sinking.flags(i)) {
            if (total > 0.0) {
                // Closed form of da = (Ldot - a total) / V^- dt with the
                // coefficients frozen over the step; unconditionally stable
                // where the forward Euler form is not.
                const double decay = std::exp(-total * dt / (-state.wealth(i)));
                next.exposures.row(i) = state.exposures.row(i) * decay +
                                        (rate.row(i) / total) * (1.0 - decay);
            }
            // No accrual: the row is stationary.
        } else {
            if (total > 0.0) {
                next.exposures.row(i) = rate.row(i) / total;
            } else {
                next.exposures.row(i) = state.fallback_rows.row(i);
            }
        }
        if (total > 0.0) next.fallback_rows.row(i) = rate.row(i) / total;
    }
    return next;
}

namespace {

void update_exposure_stats(ExposureStats& stats, const Mat& exposures, const Mat& rate) {
    const int size = static_cast<int>(exposures.rows());
    for (int i = 0; i < size; ++i) {
        const double row_sum = exposures.row(i).sum();
        stats.min_row_sum = std::min(stats.min_row_sum, row_sum);
        stats.max_row_sum = std::max(stats.max_row_sum, row_sum);
        stats.min_entry = std::min(stats.min_entry, exposures.row(i).minCoeff());
        if (i > 0 && rate.row(i).sum() > 0.0) {
            stats.min_society_share_active =
                std::min(stats.min_society_share_active, exposures(i, 0));
        }
    }
}

}  // namespace

PathResult simulate_path(const ScenarioConfig& config, std::uint64_t path_index,
                         const PathOptions& opts) {
    PathResult result;
    result.warnings = config.validate();

    const int size = config.network.size();
    const double horizon = config.horizon;
    const double terminal_zone = 1e-9 * std::max(1.0, horizon);
    const double floor = 1e-12 * config.dt0;

    RngStream stream(config.seed, path_index);

    ContinuousState state;
    state.t = 0.0;
    state.cash = Vec::Zero(size);
    state.wealth = config.initial_wealth;
    state.exposures = initial_exposures(config.liabilities, size);
    state.fallback_rows = state.exposures;
    state.distress = DistressMatrix::none(size);

    update_exposure_stats(result.exposure_stats, state.exposures,
                          config.liabilities.rate_at(0.0));
    if (opts.record_trajectory) result.trajectory.push_back(state);

    ContinuousState previous = state;
    while (state.t < horizon - terminal_zone) {
        if (++result.steps > kMaxSteps) {
            throw SimulationError("path " + std::to_string(path_index) + " exceeded " +
                                  std::to_string(kMaxSteps) + " steps at t = " +
                                  std::to_string(state.t));
        }

        const Mat rate = config.liabilities.rate_at(state.t);
        auto [mu, sigma] = eval_mu_sigma(config.cashflow, state.t, state.cash);
        const Vec z = stream.normal_vector(size);

        // Breakpoints inside the horizon cap the step so no interval
        // straddles a rate discontinuity; the horizon itself does not cap,
        // the closing interpolation handles the overshoot.
        const double next_bp = config.liabilities.next_breakpoint_after(state.t);
        const double bp_gap = (next_bp < horizon) ? next_bp - state.t
                                                  : std::numeric_limits<double>::infinity();

        const DistressMatrix entering = state.distress;
        double dt = config.dt0;
        Vec delta;
        bool settled = false;
        // n+1 passes suffice: the refined set can change at most n times.
        for (int pass = 0; pass < size; ++pass) {
            const DistressMatrix before = state.distress;
            auto [mubar, sigbar] = transformed_coefficients(state, mu, sigma, rate, z);
            const StepBounds bounds = event_limited_dt(state.wealth, mubar, sigbar, dt, bp_gap, floor);
            dt = bounds.dt;
            delta = mubar * dt + sigbar * std::sqrt(dt);
            state.distress = DistressMatrix::from_wealth(state.wealth, delta);
            if (state.distress == before) {
                settled = true;
                break;
            }
        }
        if (!settled) {
            ++result.refinement_cap_hits;
            if (result.refinement_cap_hits == 1) {
                result.warnings.push_back("distress refinement hit its iteration cap at t = " +
                                          std::to_string(state.t));
            }
        }

        for (int i = 1; i < size; ++i) {
            if (state.distress.flags(i) != entering.flags(i)) {
                result.events.push_back(WealthEvent{state.t, i, state.distress.flags(i) ? -1 : 1});
            }
        }

        previous = state;
        state = advance(state, dt, z, mu, sigma, rate);
        update_exposure_stats(result.exposure_stats, state.exposures,
                              config.liabilities.rate_at(state.t));
        if (opts.record_trajectory) result.trajectory.push_back(state);
    }

    if (state.t > horizon && state.t > previous.t) {
        // Overshot the horizon: pull cash, wealths, and exposures back to T
        // along the last step.
        const double w = (horizon - previous.t) / (state.t - previous.t);
        state.cash = previous.cash + (state.cash - previous.cash) * w;
        state.wealth = previous.wealth + (state.wealth - previous.wealth) * w;
        state.exposures = previous.exposures + (state.exposures - previous.exposures) * w;
        if (opts.record_trajectory) {
            result.trajectory.back().cash = state.cash;
            result.trajectory.back().wealth = state.wealth;
            result.trajectory.back().exposures = state.exposures;
            result.trajectory.back().t = horizon;
        }
    }
    state.t = horizon;
    state.distress = DistressMatrix::from_negative_wealth(state.wealth);

    result.terminal = state;
    return result;
}

}  // namespace clearnet
